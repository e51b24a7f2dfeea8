#include "sticky_pep/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "sticky_pep/dynamics.hpp"
#include "sticky_pep/energy.hpp"
#include "sticky_pep/io.hpp"

namespace sticky_pep {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    // Symmetric form lands exactly on 0 for symmetric ranges.
    const double denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = (lo * (denom - static_cast<double>(i)) + hi * static_cast<double>(i)) / denom;
    }
    return out;
}

SweepCell evaluate_cell(const ParticleState& base, std::size_t particle, double dx, double dv,
                        const Tolerances& tol) {
    ParticleState state = base;
    auto& p = state.particles[particle];
    p.position += dx;
    p.velocity += dv;

    // Offsets apply to the particle as indexed in the file: a reordering makes
    // the cell invalid rather than silently sweeping a different particle.
    if (!std::isfinite(p.position) || !std::isfinite(p.velocity)) return {CellKind::Invalid, 0, 0};
    if (particle > 0 && !(state.particles[particle - 1].position < p.position)) {
        return {CellKind::Invalid, 0, 0};
    }
    if (particle + 1 < state.size() && !(p.position < state.particles[particle + 1].position)) {
        return {CellKind::Invalid, 0, 0};
    }

    EventLog log = simulate(state, kUnbounded, tol);
    if (!log.outcome.collapsed()) return {CellKind::Diverges, 0, 0};
    return {CellKind::Converges, log.outcome.time, hamiltonian(state)};
}

}  // namespace

unsigned default_worker_count() {
    if (const char* env = std::getenv("STICKY_PEP_WORKERS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end && *end == '\0' && value > 0) return static_cast<unsigned>(value);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

RegionGrid run_sweep(const ParticleState& base, const SweepParams& params) {
    require_valid(base);
    if (params.particle >= base.size()) {
        throw std::invalid_argument("run_sweep: swept particle index out of range");
    }
    if (params.nx == 0 || params.ny == 0) {
        throw std::invalid_argument("run_sweep: grid resolution must be positive");
    }

    RegionGrid grid;
    grid.params = params;
    grid.x_offsets = linspace(params.x_lo, params.x_hi, params.nx);
    grid.y_offsets = linspace(params.y_lo, params.y_hi, params.ny);
    grid.cells.resize(params.nx * params.ny);

    const unsigned workers =
        std::max(1u, params.workers > 0 ? params.workers : default_worker_count());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= grid.cells.size()) break;
            const std::size_t ix = cell % params.nx;
            const std::size_t iy = cell / params.nx;
            grid.cells[cell] = evaluate_cell(base, params.particle, grid.x_offsets[ix],
                                             grid.y_offsets[iy], params.tol);
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return grid;
}

void write_raster_csv(const RegionGrid& grid, std::ostream& out) {
    out << "# particle " << grid.params.particle << ", rows: velocity offset descending, columns: position offset ascending\n";
    out << "# x-offsets:";
    for (double x : grid.x_offsets) out << ' ' << format_double(x);
    out << "\n# y-offsets:";
    for (double y : grid.y_offsets) out << ' ' << format_double(y);
    out << '\n';
    for (std::size_t row = grid.params.ny; row-- > 0;) {
        for (std::size_t ix = 0; ix < grid.params.nx; ++ix) {
            if (ix) out << ',';
            const SweepCell& cell = grid.at(ix, row);
            switch (cell.kind) {
                case CellKind::Diverges: out << 'D'; break;
                case CellKind::Invalid: out << 'I'; break;
                case CellKind::Converges:
                    out << format_double(cell.collapse_time) << ';' << format_double(cell.hamiltonian);
                    break;
            }
        }
        out << '\n';
    }
}

void write_ppm(const RegionGrid& grid, std::ostream& out) {
    double h_lo = std::numeric_limits<double>::infinity();
    double h_hi = -std::numeric_limits<double>::infinity();
    for (const auto& cell : grid.cells) {
        if (cell.kind == CellKind::Converges) {
            h_lo = std::min(h_lo, cell.hamiltonian);
            h_hi = std::max(h_hi, cell.hamiltonian);
        }
    }
    const double span = (h_hi > h_lo) ? h_hi - h_lo : 1.0;

    out << "P6\n" << grid.params.nx << ' ' << grid.params.ny << "\n255\n";
    auto emit = [&](unsigned char r, unsigned char g, unsigned char b) {
        char rgb[3] = {static_cast<char>(r), static_cast<char>(g), static_cast<char>(b)};
        out.write(rgb, 3);
    };
    for (std::size_t row = grid.params.ny; row-- > 0;) {
        for (std::size_t ix = 0; ix < grid.params.nx; ++ix) {
            const SweepCell& cell = grid.at(ix, row);
            if (cell.kind == CellKind::Diverges) {
                emit(0, 0, 0);
            } else if (cell.kind == CellKind::Invalid) {
                emit(60, 60, 60);
            } else {
                const double w = (cell.hamiltonian - h_lo) / span;
                emit(static_cast<unsigned char>(std::lround(255.0 * w)),
                     static_cast<unsigned char>(std::lround(165.0 * w)),
                     static_cast<unsigned char>(std::lround(255.0 * (1.0 - w))));
            }
        }
    }
}

}  // namespace sticky_pep
