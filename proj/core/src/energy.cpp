#include "sticky_pep/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sticky_pep {

double kinetic(const ParticleState& state) {
    double sum = 0.0;
    for (const auto& p : state.particles) sum += p.mass * p.velocity * p.velocity;
    return sum;
}

double potential(const ParticleState& state) {
    // Positions are sorted, so sum_i m_i sum_{j<i} m_j (y_i - y_j) expands to
    // sum_i m_i (y_i P_i - S_i) with prefix sums P_i, S_i.
    double prefix_mass = 0.0;
    double prefix_moment = 0.0;
    double sum = 0.0;
    for (const auto& p : state.particles) {
        sum += p.mass * (p.position * prefix_mass - prefix_moment);
        prefix_mass += p.mass;
        prefix_moment += p.mass * p.position;
    }
    return -sum;
}

double potential_pairwise(const ParticleState& state) {
    double sum = 0.0;
    const auto& ps = state.particles;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = 0; j < ps.size(); ++j) {
            sum += ps[i].mass * ps[j].mass * std::abs(ps[i].position - ps[j].position);
        }
    }
    return -0.5 * sum;
}

double hamiltonian(const ParticleState& state) {
    return kinetic(state) + potential(state);
}

std::vector<bool> is_glancing(const CollisionEvent& event, double vel_tol) {
    std::vector<bool> out;
    out.reserve(event.clusters.size());
    for (const auto& c : event.clusters) {
        auto [lo, hi] = std::minmax_element(c.pre_velocities.begin(), c.pre_velocities.end());
        out.push_back(*hi - *lo <= vel_tol);
    }
    return out;
}

namespace {

// Samples along the segment's own anchor so the right endpoint is the
// pre-merge (left) limit, not the next segment's state.
void sample_segment(const LogReplay::Segment& segment, double t1, std::size_t count,
                    EnergyReport& report, double energy_tol, std::size_t segment_index) {
    const double t0 = segment.start;
    if (count < 2) count = 2;
    double h_min = std::numeric_limits<double>::infinity();
    double h_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < count; ++k) {
        const double t = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(count - 1);
        ParticleState s = free_flight(segment.anchor, t - t0);
        EnergySample sample{t, kinetic(s), potential(s), 0.0};
        sample.hamiltonian = sample.kinetic + sample.potential;
        h_min = std::min(h_min, sample.hamiltonian);
        h_max = std::max(h_max, sample.hamiltonian);
        report.samples.push_back(sample);
    }
    const double scale = 1.0 + std::max(std::abs(h_min), std::abs(h_max));
    if (h_max - h_min > energy_tol * scale) {
        std::ostringstream msg;
        msg << "segment " << segment_index << ": H spread " << (h_max - h_min)
            << " exceeds tolerance (H should be piecewise constant)";
        report.violations.push_back(msg.str());
    }
}

}  // namespace

EnergyReport audit(const EventLog& log, std::size_t samples_per_segment, double energy_tol,
                   const Tolerances& tol) {
    EnergyReport report;
    LogReplay replay(log, tol);

    // Segment endpoints: event times, then a finite tail window for logs that
    // run forever (H is constant there but we still sample it).
    std::vector<double> ends;
    for (const auto& event : log.events) ends.push_back(event.time);
    if (log.outcome.truncated()) {
        ends.push_back(log.outcome.time);
    } else {
        const double last = ends.empty() ? log.initial.time : ends.back();
        ends.push_back(last + std::max(1.0, last));
    }

    for (std::size_t seg = 0; seg < ends.size(); ++seg) {
        sample_segment(replay.segments()[seg], ends[seg], samples_per_segment, report, energy_tol,
                       seg);
    }

    for (std::size_t e = 0; e < log.events.size(); ++e) {
        const auto& event = log.events[e];
        // Left limit: the pre-merge state at the event time lives in segment e.
        const auto& pre_seg = replay.segments()[e];
        ParticleState before = free_flight(pre_seg.anchor, event.time - pre_seg.start);
        const ParticleState& after = replay.segments()[e + 1].anchor;

        EventEnergy ee;
        ee.time = event.time;
        ee.kinetic_before = kinetic(before);
        ee.kinetic_after = kinetic(after);
        ee.potential_before = potential(before);
        ee.potential_after = potential(after);
        ee.hamiltonian_before = ee.kinetic_before + ee.potential_before;
        ee.hamiltonian_after = ee.kinetic_after + ee.potential_after;
        ee.glancing = is_glancing(event, tol.vel);

        const double scale = 1.0 + std::abs(ee.hamiltonian_before);
        auto flag = [&](const std::string& what) {
            std::ostringstream msg;
            msg << "event " << e << " (t = " << event.time << "): " << what;
            report.violations.push_back(msg.str());
        };
        if (ee.hamiltonian_after > ee.hamiltonian_before + energy_tol * scale) {
            flag("H increased across the event");
        }
        if (ee.kinetic_after > ee.kinetic_before + energy_tol * scale) {
            flag("kinetic energy increased across the event");
        }
        if (std::abs(ee.potential_after - ee.potential_before) > energy_tol * scale) {
            flag("potential energy is discontinuous");
        }
        if (ee.all_glancing() &&
            std::abs(ee.hamiltonian_after - ee.hamiltonian_before) > energy_tol * scale) {
            flag("H is discontinuous at a glancing event");
        }
        report.events.push_back(std::move(ee));
    }
    return report;
}

}  // namespace sticky_pep
