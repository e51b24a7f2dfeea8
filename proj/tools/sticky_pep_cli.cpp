// Command-line surface for the sticky-particle simulator: state I/O,
// simulation, perfect-velocity synthesis, equilibrium criteria and the
// convergence-region sweep.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sticky_pep/analysis.hpp"
#include "sticky_pep/approx.hpp"
#include "sticky_pep/dynamics.hpp"
#include "sticky_pep/energy.hpp"
#include "sticky_pep/io.hpp"
#include "sticky_pep/perfect.hpp"
#include "sticky_pep/state.hpp"
#include "sticky_pep/sweep.hpp"

namespace sp = sticky_pep;

namespace {

struct GlobalOptions {
    sp::Tolerances tol;
};

void add_tolerance_flags(CLI::App* cmd, GlobalOptions& opts) {
    cmd->add_option("--eps-time", opts.tol.time, "Collision-time coalescing window");
    cmd->add_option("--eps-pos", opts.tol.pos, "Co-location tolerance at merges");
    cmd->add_option("--eps-vel", opts.tol.vel, "Glancing classification tolerance");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    return out;
}

void write_trajectory_csv(const sp::EventLog& log, std::size_t samples, double t_end,
                          std::ostream& out) {
    std::vector<double> times(samples);
    const double t0 = log.initial.time;
    for (std::size_t k = 0; k < samples; ++k) {
        times[k] = samples == 1 ? t0
                                : t0 + (t_end - t0) * static_cast<double>(k) /
                                           static_cast<double>(samples - 1);
    }
    auto rows = sp::sample_trajectory(log, times);
    out << "t";
    for (std::size_t i = 0; i < rows.size(); ++i) out << ",y" << i;
    out << '\n';
    for (std::size_t k = 0; k < times.size(); ++k) {
        out << sp::format_double(times[k]);
        for (const auto& row : rows) out << ',' << sp::format_double(row[k]);
        out << '\n';
    }
}

int run_simulate(const std::string& state_path, double t_max, const std::string& log_path,
                 std::size_t samples, const std::string& trajectory_path,
                 const GlobalOptions& opts) {
    sp::ParticleState state = sp::load_state(state_path);
    sp::EventLog log = sp::simulate(state, t_max, opts.tol);

    if (log_path.empty()) {
        sp::write_event_log(log, std::cout);
    } else {
        auto out = open_output(log_path);
        sp::write_event_log(log, out);
    }

    if (!trajectory_path.empty()) {
        // Sample up to the horizon: the truncation time, or a window past the
        // last event for runs that are exact forever.
        double t_end = log.outcome.truncated() ? log.outcome.time : 0.0;
        if (!log.outcome.truncated()) {
            const double last = log.events.empty() ? log.initial.time : log.events.back().time;
            t_end = last + std::max(1.0, last);
        }
        auto out = open_output(trajectory_path);
        write_trajectory_csv(log, samples, t_end, out);
    }
    return 0;
}

int run_perfect(const std::string& input_path, bool recenter, const std::string& out_path,
                const GlobalOptions& opts) {
    auto [masses, positions] = sp::load_masses_positions(input_path);
    if (recenter) {
        double m = 0.0, my = 0.0;
        for (std::size_t i = 0; i < masses.size(); ++i) {
            m += masses[i];
            my += masses[i] * positions[i];
        }
        for (auto& y : positions) y -= my / m;
    }
    auto velocities = sp::synthesize_perfect(masses, positions);

    for (std::size_t i = 0; i < velocities.size(); ++i) {
        if (i) std::cout << ',';
        std::cout << sp::format_double(velocities[i]);
    }
    std::cout << '\n';

    sp::ParticleState state;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        state.particles.push_back({masses[i], positions[i], velocities[i]});
    }
    auto report = sp::verify_perfect(state, opts.tol);
    std::cout << "perfect: " << (report.perfect ? "yes" : "no") << '\n';
    std::cout << "collapse_time: " << sp::format_double(report.collapse_time) << '\n';
    std::cout << "events: " << report.log.events.size() << " (all glancing: "
              << (std::find(report.event_glancing.begin(), report.event_glancing.end(), false) ==
                          report.event_glancing.end()
                      ? "yes"
                      : "no")
              << ")\n";
    std::cout << "max_h_residual: " << sp::format_double(report.max_h_residual) << '\n';

    if (!out_path.empty()) sp::save_state(state, out_path);
    return 0;
}

int run_check(const std::string& state_path, const GlobalOptions& opts) {
    sp::ParticleState raw = sp::load_state(state_path);
    auto [state, frame] = sp::normalize_galilean(raw);
    std::cout << "frame: center_of_mass=" << sp::format_double(frame.center_of_mass)
              << " total_momentum=" << sp::format_double(frame.total_momentum) << '\n';

    sp::EventLog log = sp::simulate(state, sp::kUnbounded, opts.tol);
    std::cout << "outcome: " << sp::outcome_to_string(log.outcome);
    if (!log.outcome.diverged()) std::cout << " t=" << sp::format_double(log.outcome.time);
    std::cout << " events=" << log.events.size() << '\n';
    std::cout << "hamiltonian: " << sp::format_double(sp::hamiltonian(state)) << '\n';

    const double mass = sp::total_mass(state);
    if (std::abs(mass - 1.0) > 1e-9) {
        std::cout << "k-split and envelope criteria need total mass 1 (got "
                  << sp::format_double(mass) << "); skipped\n";
        return 0;
    }
    if (state.size() < 2) {
        std::cout << "single particle: already an equilibrium\n";
        return 0;
    }

    auto necessary = sp::necessary_condition(state);
    std::cout << "necessary_condition: " << (necessary.holds ? "true" : "false");
    if (necessary.k) std::cout << " (witness k=" << *necessary.k << ")";
    std::cout << '\n';

    auto sufficient = sp::sufficient_condition(state);
    std::cout << "sufficient_condition: " << (sufficient.holds ? "true" : "false");
    if (sufficient.k) std::cout << " (first failing k=" << *sufficient.k << ")";
    std::cout << '\n';

    auto envelope = sp::check_envelope(log, opts.tol);
    std::cout << "envelope: " << (envelope.within ? "within" : "exits");
    if (envelope.first_exit_time) {
        std::cout << " first_exit_t=" << sp::format_double(*envelope.first_exit_time);
    }
    std::cout << '\n';
    std::cout << "collapse_time_bound: " << sp::format_double(sp::collapse_time_bound(state))
              << '\n';
    std::cout << "w2_envelope_bound(t=0): " << sp::format_double(sp::w2_envelope_bound(state, 0.0))
              << '\n';
    return 0;
}

int run_discretize(const std::string& config_path, std::size_t n, const std::string& out_path,
                   std::size_t margin_grid) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open file for reading: " + config_path);
    sp::MeasureSpec spec = sp::parse_measure_spec(in);

    sp::ParticleState state = sp::discretize(spec, n);
    if (out_path.empty()) {
        sp::write_state_csv(state, std::cout);
    } else {
        sp::save_state(state, out_path);
        std::cout << "wrote " << state.size() << " particles to " << out_path << '\n';
    }
    if (margin_grid > 0) {
        auto margin = sp::continuous_margin(spec, margin_grid);
        std::cout << "margin: " << sp::format_double(margin.margin)
                  << " at y=" << sp::format_double(margin.argmin) << '\n';
    }
    return 0;
}

int run_sweep_cmd(const std::string& state_path, const std::string& grid_spec,
                  std::vector<double> range_x, std::vector<double> range_y, std::size_t particle,
                  unsigned workers, const std::string& out_path, const std::string& image_path,
                  const GlobalOptions& opts) {
    sp::ParticleState base = sp::load_state(state_path);

    sp::SweepParams params;
    params.particle = particle;
    params.workers = workers;
    params.tol = opts.tol;
    if (range_x.size() == 2) {
        params.x_lo = range_x[0];
        params.x_hi = range_x[1];
    }
    if (range_y.size() == 2) {
        params.y_lo = range_y[0];
        params.y_hi = range_y[1];
    }
    unsigned long nx = 0, ny = 0;
    if (std::sscanf(grid_spec.c_str(), "%lux%lu", &nx, &ny) != 2 || nx == 0 || ny == 0) {
        throw std::invalid_argument("--grid expects NxM, e.g. 101x101");
    }
    params.nx = nx;
    params.ny = ny;

    sp::RegionGrid grid = sp::run_sweep(base, params);
    {
        auto out = open_output(out_path);
        sp::write_raster_csv(grid, out);
    }
    if (!image_path.empty()) {
        auto out = open_output(image_path);
        sp::write_ppm(grid, out);
    }

    std::size_t converging = 0, diverging = 0, invalid = 0;
    for (const auto& cell : grid.cells) {
        switch (cell.kind) {
            case sp::CellKind::Converges: ++converging; break;
            case sp::CellKind::Diverges: ++diverging; break;
            case sp::CellKind::Invalid: ++invalid; break;
        }
    }
    std::cout << "cells: " << grid.cells.size() << " converging: " << converging
              << " diverging: " << diverging << " invalid: " << invalid << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact event-driven simulator for 1D repulsive pressureless Euler-Poisson sticky particles"};
    app.require_subcommand(1);
    GlobalOptions opts;

    // simulate
    std::string sim_state, sim_log, sim_trajectory;
    double sim_t_max = sp::kUnbounded;
    std::size_t sim_samples = 100;
    auto* sim = app.add_subcommand("simulate", "Run the event loop on a state CSV");
    sim->add_option("state", sim_state, "State CSV (rows: masses, positions, velocities)")
        ->required();
    sim->add_option("--t-max", sim_t_max, "Simulation horizon (default: unbounded)");
    sim->add_option("--log", sim_log, "Write the event log to a file instead of stdout");
    sim->add_option("--samples", sim_samples, "Trajectory sample count (with --trajectory)");
    sim->add_option("--trajectory", sim_trajectory, "Write sampled trajectories as CSV");
    add_tolerance_flags(sim, opts);

    // perfect
    std::string perfect_input, perfect_out;
    bool perfect_recenter = false;
    auto* perfect = app.add_subcommand("perfect", "Synthesize the perfect velocity field");
    perfect->add_option("file", perfect_input, "CSV with rows: masses, positions")->required();
    perfect->add_flag("--recenter", perfect_recenter, "Shift positions to zero center of mass first");
    perfect->add_option("--out", perfect_out, "Write the full state CSV here");
    add_tolerance_flags(perfect, opts);

    // check
    std::string check_state;
    auto* check = app.add_subcommand("check", "Equilibrium criteria and bounds for a state");
    check->add_option("state", check_state, "State CSV")->required();
    add_tolerance_flags(check, opts);

    // discretize
    std::string disc_config, disc_out;
    std::size_t disc_n = 0, disc_margin = 0;
    auto* disc = app.add_subcommand("discretize", "Discretize a continuous datum into particles");
    disc->add_option("config", disc_config, "Measure config file")->required();
    disc->add_option("--n", disc_n, "Bins of width 1/n over [-1, 1]")->required();
    disc->add_option("--margin", disc_margin, "Also report the split-functional margin on this grid");
    disc->add_option("--out", disc_out, "Write the state CSV here (default: stdout)");

    // sweep
    std::string sweep_state, sweep_grid = "101x101", sweep_out = "region.csv", sweep_image;
    std::vector<double> sweep_range_x, sweep_range_y;
    std::size_t sweep_particle = 0;
    unsigned sweep_workers = 0;
    auto* sweep = app.add_subcommand("sweep", "Convergence-region sweep over one particle's offsets");
    sweep->add_option("state", sweep_state, "Base state CSV")->required();
    sweep->add_option("--particle", sweep_particle, "Swept particle index (default 0)");
    sweep->add_option("--grid", sweep_grid, "Resolution NxM (default 101x101)");
    sweep->add_option("--range-x", sweep_range_x, "Position offset range a b (default -2 2)")
        ->expected(2);
    sweep->add_option("--range-y", sweep_range_y, "Velocity offset range a b (default -2 2)")
        ->expected(2);
    sweep->add_option("--workers", sweep_workers,
                      "Worker threads (default: STICKY_PEP_WORKERS or hardware)");
    sweep->add_option("--out", sweep_out, "Raster CSV path (default region.csv)");
    sweep->add_option("--image", sweep_image, "Also render a portable pixmap here");
    add_tolerance_flags(sweep, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            return run_simulate(sim_state, sim_t_max, sim_log, sim_samples, sim_trajectory, opts);
        }
        if (perfect->parsed()) {
            return run_perfect(perfect_input, perfect_recenter, perfect_out, opts);
        }
        if (check->parsed()) return run_check(check_state, opts);
        if (disc->parsed()) return run_discretize(disc_config, disc_n, disc_out, disc_margin);
        if (sweep->parsed()) {
            return run_sweep_cmd(sweep_state, sweep_grid, sweep_range_x, sweep_range_y,
                                 sweep_particle, sweep_workers, sweep_out, sweep_image, opts);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
