#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "sticky_pep/state.hpp"

namespace corpus {

// Deterministic across standard library implementations (the distributions in
// <random> are not pinned by the standard).
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

double standard_normal(std::mt19937_64& rng);

enum class VelocityStyle {
    Perfect,           // the synthesized perfect field: collapses glancingly
    PerturbedPerfect,  // perfect plus a small momentum-preserving perturbation
    RandomCapped,      // random zero-momentum field with capped extreme speeds
};

struct SystemOptions {
    std::size_t min_particles = 2;
    std::size_t max_particles = 8;
    double mass_lo = 0.1, mass_hi = 1.0;  // drawn then normalized to total 1
    double gap_lo = 0.1, gap_hi = 1.0;
    double perturbation = 0.05;  // scale for PerturbedPerfect
};

// Total mass 1, zero center of mass, strictly increasing positions.
// RandomCapped keeps the extreme particles' speeds below
// 0.95 sqrt(max(y_R, -y_L)), which keeps any collapse strictly slower than
// sqrt of the farthest initial extreme (the extreme must cross that distance
// against a nonnegative outward acceleration).
sticky_pep::ParticleState random_system(std::mt19937_64& rng, VelocityStyle style,
                                        const SystemOptions& options = {});

// A momentum-preserving direction of unit Euclidean norm.
std::vector<double> momentum_preserving_direction(std::mt19937_64& rng,
                                                  const std::vector<double>& masses);

// Cycles Perfect / PerturbedPerfect / RandomCapped for mixed-outcome corpora.
sticky_pep::ParticleState mixed_system(std::mt19937_64& rng, std::size_t index,
                                       const SystemOptions& options = {});

}  // namespace corpus
