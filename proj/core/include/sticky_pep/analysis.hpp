#pragma once

#include <cstddef>
#include <optional>

#include "sticky_pep/dynamics.hpp"
#include "sticky_pep/state.hpp"

namespace sticky_pep {

/// Two-particle reduction of a state: each side collapsed to its center of
/// mass with its total mass and total momentum.
struct SplitState {
    Particle left;
    Particle right;
    std::size_t k = 0;  ///< number of particles on the left side
};

/// The k-split (1 <= k <= n-1) of a zero-frame state.
SplitState k_split(const ParticleState& state, std::size_t k);

/// Whether the split's two particles eventually meet (tangency counts),
/// i.e. v_L - v_R >= sqrt((m_L + m_R)(y_R - y_L)).
bool two_particle_converges(const SplitState& split);

struct SplitCondition {
    bool holds = false;
    /// Witnessing k (necessary) or first failing k (sufficient), for diagnostics.
    std::optional<std::size_t> k;
};

/// True iff some k-split converges. When false the system provably does not
/// reach equilibrium. Requires a zero-frame state of total mass 1.
SplitCondition necessary_condition(const ParticleState& state);

/// True iff every k-split converges; then the system provably collapses.
/// Requires a zero-frame state of total mass 1.
SplitCondition sufficient_condition(const ParticleState& state);

/// The sharp quadratic tube [y_L0 f(t), y_R0 f(t)] that a collapsing solution's
/// support must stay inside.
struct Envelope {
    double y_left0 = 0.0;
    double y_right0 = 0.0;

    double width() const { return y_right0 - y_left0; }
    /// Time at which the tube closes at the origin: 2 sqrt(y_R0 - y_L0).
    double closing_time() const;
    double f(double t) const;        ///< f(0) = 1, nonincreasing, 0 after closing_time
    double f_left(double t) const;   ///< y_left0 * f(t)
    double f_right(double t) const;  ///< y_right0 * f(t)
};

/// Envelope anchored at a state's initial support (zero-frame, total mass 1).
Envelope envelope_of(const ParticleState& state);

struct EnvelopeCheck {
    bool within = true;
    std::optional<double> first_exit_time;
};

/// Exact per-segment containment check of the log's support inside its own
/// envelope: each segment compares two quadratics by sign analysis, not
/// sampling. Ties at tangency count as within.
EnvelopeCheck check_envelope(const EventLog& log, const Tolerances& tol = {});

/// Upper bound 2 sqrt(y_R(0) - y_L(0)) on any collapse time (zero-frame, mass 1).
double collapse_time_bound(const ParticleState& state);

/// Upper bound on W2(rho_t, delta_0) for any collapsing solution with the
/// given initial support (zero-frame, mass 1).
double w2_envelope_bound(const ParticleState& state, double t);

/// Replaces a contiguous group by one particle at its center of mass with the
/// group's total mass and total momentum.
ParticleState combine_group(const ParticleState& state, IndexRange range);

}  // namespace sticky_pep
