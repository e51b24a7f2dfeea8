#include "sticky_pep/perfect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sticky_pep/energy.hpp"

namespace sticky_pep {

namespace {

constexpr double kMinGap = 1e-10;

struct PairSplit {
    std::size_t j = 0;       // left index of the combined pair
    double left_mass = 0.0;  // m_j
    double right_mass = 0.0; // m_{j+1}
    double speed = 0.0;      // sqrt(gap / pair mass)
};

}  // namespace

std::vector<double> synthesize_perfect(const std::vector<double>& masses,
                                       const std::vector<double>& positions) {
    const std::size_t n = masses.size();
    if (n == 0 || positions.size() != n) {
        throw std::invalid_argument("synthesize_perfect: masses and positions must be nonempty and equal length");
    }
    double total = 0.0, moment = 0.0, max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(masses[i] > 0.0) || !std::isfinite(masses[i]) || !std::isfinite(positions[i])) {
            throw std::invalid_argument("synthesize_perfect: masses must be positive and all fields finite");
        }
        if (i > 0 && !(positions[i] - positions[i - 1] >= kMinGap)) {
            throw std::invalid_argument("synthesize_perfect: positions must be strictly increasing with gaps >= 1e-10");
        }
        total += masses[i];
        moment += masses[i] * positions[i];
        max_abs = std::max(max_abs, std::abs(positions[i]));
    }
    if (std::abs(moment) > 1e-9 * (1.0 + total * max_abs)) {
        throw std::invalid_argument("synthesize_perfect: center of mass must be zero");
    }

    // The constructive recursion, run iteratively: repeatedly combine the pair
    // that would collide first (smallest gap / pair-mass, leftmost on ties) at
    // its center of mass, then unwind, splitting each combined velocity so the
    // pair's collision is exactly tangent.
    std::vector<double> ms(masses), ys(positions);
    std::vector<PairSplit> splits;
    splits.reserve(n - 1);
    while (ms.size() > 1) {
        std::size_t best = 0;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
            const double ratio = (ys[i + 1] - ys[i]) / (ms[i] + ms[i + 1]);
            if (ratio < best_ratio) {
                best_ratio = ratio;
                best = i;
            }
        }
        PairSplit split;
        split.j = best;
        split.left_mass = ms[best];
        split.right_mass = ms[best + 1];
        split.speed = std::sqrt(best_ratio);
        splits.push_back(split);

        const double pair_mass = ms[best] + ms[best + 1];
        ys[best] = (ms[best] * ys[best] + ms[best + 1] * ys[best + 1]) / pair_mass;
        ms[best] = pair_mass;
        ms.erase(ms.begin() + static_cast<std::ptrdiff_t>(best) + 1);
        ys.erase(ys.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }

    std::vector<double> velocities{0.0};
    for (auto it = splits.rbegin(); it != splits.rend(); ++it) {
        const double combined = velocities[it->j];
        velocities.insert(velocities.begin() + static_cast<std::ptrdiff_t>(it->j) + 1,
                          combined - it->left_mass * it->speed);
        velocities[it->j] = combined + it->right_mass * it->speed;
    }
    return velocities;
}

PerfectReport verify_perfect(const ParticleState& state, const Tolerances& tol, double h_tol,
                             std::size_t samples_per_segment) {
    require_valid(state);

    PerfectReport report;
    report.velocities.reserve(state.size());
    for (const auto& p : state.particles) report.velocities.push_back(p.velocity);

    const double momentum = total_momentum(state);
    const double target = momentum * momentum / total_mass(state);

    report.log = simulate(state, kUnbounded, tol);
    report.outcome = report.log.outcome;
    if (report.outcome.collapsed()) report.collapse_time = report.outcome.time;

    bool all_glancing = true;
    for (const auto& event : report.log.events) {
        bool event_ok = true;
        for (const auto& g : is_glancing(event, tol.vel)) event_ok = event_ok && g;
        report.event_glancing.push_back(event_ok);
        all_glancing = all_glancing && event_ok;
    }

    EnergyReport energy = audit(report.log, samples_per_segment, h_tol, tol);
    double residual = 0.0;
    for (const auto& s : energy.samples) residual = std::max(residual, std::abs(s.hamiltonian - target));
    for (const auto& e : energy.events) {
        residual = std::max(residual, std::abs(e.hamiltonian_before - target));
        residual = std::max(residual, std::abs(e.hamiltonian_after - target));
    }
    report.max_h_residual = residual;

    report.perfect = report.outcome.collapsed() && all_glancing && residual <= h_tol;
    return report;
}

}  // namespace sticky_pep
