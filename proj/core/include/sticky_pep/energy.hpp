#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sticky_pep/dynamics.hpp"
#include "sticky_pep/state.hpp"

namespace sticky_pep {

/// Kinetic energy: sum m_i v_i^2 (the L2(rho) norm squared, no 1/2).
double kinetic(const ParticleState& state);

/// Potential energy -1/2 * sum_ij m_i m_j |y_i - y_j|, computed in O(n) via
/// sorted prefix sums.
double potential(const ParticleState& state);

/// O(n^2) double-sum form of the potential, retained as an independent oracle
/// for the prefix-sum identity.
double potential_pairwise(const ParticleState& state);

/// hamiltonian = kinetic + potential.
double hamiltonian(const ParticleState& state);

/// Recomputes the glancing flag per cluster: true iff the pre-velocity spread
/// within the cluster is at most vel_tol.
std::vector<bool> is_glancing(const CollisionEvent& event, double vel_tol);

struct EnergySample {
    double time = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
    double hamiltonian = 0.0;
};

struct EventEnergy {
    double time = 0.0;
    double kinetic_before = 0.0, kinetic_after = 0.0;
    double potential_before = 0.0, potential_after = 0.0;
    double hamiltonian_before = 0.0, hamiltonian_after = 0.0;
    std::vector<bool> glancing;  ///< per cluster

    bool all_glancing() const {
        for (bool g : glancing)
            if (!g) return false;
        return true;
    }
};

struct EnergyReport {
    std::vector<EnergySample> samples;  ///< per segment, chronological
    std::vector<EventEnergy> events;    ///< one-sided limits at each event
    std::vector<std::string> violations;

    bool clean() const { return violations.empty(); }
};

/// Samples H on every inter-event segment and takes both one-sided limits at
/// each event. Flags any violation of: H constant within a segment, H
/// non-increasing at events, H continuous at glancing events, potential
/// continuous at all events, kinetic energy non-increasing at events.
/// Violations are report entries, not errors.
EnergyReport audit(const EventLog& log, std::size_t samples_per_segment = 100,
                   double energy_tol = 1e-9, const Tolerances& tol = {});

}  // namespace sticky_pep
