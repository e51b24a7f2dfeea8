#pragma once

#include <cstddef>
#include <vector>

#include "sticky_pep/dynamics.hpp"
#include "sticky_pep/state.hpp"

namespace sticky_pep {

/// Certificate produced by verify_perfect: the run plus the residuals that
/// decided the classification.
struct PerfectReport {
    bool perfect = false;
    std::vector<double> velocities;  ///< initial velocities of the verified state
    double collapse_time = 0.0;      ///< valid when the outcome collapsed
    Outcome outcome;
    std::vector<bool> event_glancing;  ///< per event: every cluster glancing
    double max_h_residual = 0.0;       ///< max |H - m0^2/M| over samples and event limits
    EventLog log;
};

/// The unique initial velocities that make the given mass distribution evolve
/// as a perfect solution (every collision glancing, collapse to a stationary
/// particle at the origin).
///
/// Positions must be strictly increasing with zero center of mass; adjacent
/// gaps below 1e-10 are rejected as numerically meaningless.
std::vector<double> synthesize_perfect(const std::vector<double>& masses,
                                       const std::vector<double>& positions);

/// Simulates the state and classifies it: perfect iff it collapses, every
/// event is glancing, and H stays within h_tol of m0^2/M over all samples and
/// one-sided event limits.
PerfectReport verify_perfect(const ParticleState& state, const Tolerances& tol = {},
                             double h_tol = 1e-8, std::size_t samples_per_segment = 16);

}  // namespace sticky_pep
