#include "corpus.hpp"

#include <algorithm>
#include <cmath>

#include "sticky_pep/perfect.hpp"

namespace corpus {

double standard_normal(std::mt19937_64& rng) {
    const double u1 = std::max(uniform01(rng), 0x1.0p-60);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238 * u2);
}

namespace {

void zero_momentum(std::vector<double>& velocities, const std::vector<double>& masses) {
    double m = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        m += masses[i];
        mv += masses[i] * velocities[i];
    }
    const double shift = mv / m;
    for (auto& v : velocities) v -= shift;
}

}  // namespace

std::vector<double> momentum_preserving_direction(std::mt19937_64& rng,
                                                  const std::vector<double>& masses) {
    std::vector<double> d(masses.size());
    double norm = 0.0;
    while (norm < 1e-12) {
        for (auto& x : d) x = standard_normal(rng);
        zero_momentum(d, masses);
        norm = 0.0;
        for (double x : d) norm += x * x;
        norm = std::sqrt(norm);
    }
    for (auto& x : d) x /= norm;
    return d;
}

sticky_pep::ParticleState random_system(std::mt19937_64& rng, VelocityStyle style,
                                        const SystemOptions& options) {
    const std::size_t n = uniform_index(rng, options.min_particles, options.max_particles);

    std::vector<double> masses(n), positions(n);
    double total = 0.0;
    for (auto& m : masses) {
        m = uniform(rng, options.mass_lo, options.mass_hi);
        total += m;
    }
    for (auto& m : masses) m /= total;

    double y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) y += uniform(rng, options.gap_lo, options.gap_hi);
        positions[i] = y;
    }
    double com = 0.0;
    for (std::size_t i = 0; i < n; ++i) com += masses[i] * positions[i];
    for (auto& p : positions) p -= com;

    std::vector<double> velocities;
    switch (style) {
        case VelocityStyle::Perfect:
            velocities = sticky_pep::synthesize_perfect(masses, positions);
            break;
        case VelocityStyle::PerturbedPerfect: {
            velocities = sticky_pep::synthesize_perfect(masses, positions);
            const auto d = momentum_preserving_direction(rng, masses);
            for (std::size_t i = 0; i < n; ++i) velocities[i] += options.perturbation * d[i];
            break;
        }
        case VelocityStyle::RandomCapped: {
            const double extreme = std::max(positions.back(), -positions.front());
            const double cap = 0.9 * std::sqrt(extreme);
            velocities.resize(n);
            for (auto& v : velocities) v = uniform(rng, -cap, cap);
            zero_momentum(velocities, masses);
            const double worst =
                std::max(std::abs(velocities.front()), std::abs(velocities.back()));
            const double limit = 0.95 * std::sqrt(extreme);
            if (worst > limit) {
                const double scale = limit / worst;
                for (auto& v : velocities) v *= scale;
            }
            break;
        }
    }

    sticky_pep::ParticleState state;
    state.particles.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        state.particles.push_back({masses[i], positions[i], velocities[i]});
    }
    return state;
}

sticky_pep::ParticleState mixed_system(std::mt19937_64& rng, std::size_t index,
                                       const SystemOptions& options) {
    switch (index % 3) {
        case 0: return random_system(rng, VelocityStyle::Perfect, options);
        case 1: return random_system(rng, VelocityStyle::PerturbedPerfect, options);
        default: return random_system(rng, VelocityStyle::RandomCapped, options);
    }
}

}  // namespace corpus
