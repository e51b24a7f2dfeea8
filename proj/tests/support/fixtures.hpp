#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sticky_pep/state.hpp"

namespace fixtures {

// Two half masses at -1 and 1 with just enough inward velocity to collide
// tangentially at the origin; collapses glancingly at t = 2 sqrt(2).
inline sticky_pep::ParticleState equal_pair() {
    const double v = std::sqrt(2.0) / 2.0;
    return {{{0.5, -1.0, v}, {0.5, 1.0, -v}}, 0.0};
}

// The same velocities from slightly wider positions; diverges for any eps > 0.
inline sticky_pep::ParticleState equal_pair_widened(double eps) {
    const double v = std::sqrt(2.0) / 2.0;
    return {{{0.5, -1.0 - eps, v}, {0.5, 1.0 + eps, -v}}, 0.0};
}

// Three equal thirds at -1, 0, 1 with the synthesized perfect velocities;
// collapses in a single triple glancing collision at t = 2 sqrt(3/2).
inline sticky_pep::ParticleState perfect_thirds() {
    const double v = std::sqrt(2.0 / 3.0);
    const double third = 1.0 / 3.0;
    return {{{third, -1.0, v}, {third, 0.0, 0.0}, {third, 1.0, -v}}, 0.0};
}

// Mirrored geometric pairs i = 1..depth: mass 2^-(i+1) at +/- 3^(1-i), each
// given just enough inward velocity that its untruncated parabola has its
// vertex at the origin.
inline sticky_pep::ParticleState geometric_pairs(std::size_t depth) {
    std::vector<sticky_pep::Particle> left, right;
    for (std::size_t i = 1; i <= depth; ++i) {
        const double fi = static_cast<double>(i);
        const double mass = std::pow(2.0, -(fi + 1.0));
        const double y = std::pow(3.0, 1.0 - fi);
        const double speed = 1.5 * std::sqrt(2.0) * std::pow(6.0, -fi / 2.0);
        left.push_back({mass, -y, speed});
        right.push_back({mass, y, -speed});
    }
    sticky_pep::ParticleState state;
    state.particles.insert(state.particles.end(), left.begin(), left.end());
    for (auto it = right.rbegin(); it != right.rend(); ++it) state.particles.push_back(*it);
    return state;
}

// Collision time of mirrored pair i against the center for the depth-limited
// system: smallest root of
//   3^(1-i) - (3 sqrt2 / 2) 6^(-i/2) t + (t^2/4)(3 * 2^-(i+1) - 2^-depth) = 0.
inline double geometric_pair_collision_time(std::size_t i, std::size_t depth) {
    const double fi = static_cast<double>(i);
    const double c = std::pow(3.0, 1.0 - fi);
    const double b = 1.5 * std::sqrt(2.0) * std::pow(6.0, -fi / 2.0);
    const double a = (3.0 * std::pow(2.0, -(fi + 1.0)) - std::pow(2.0, -static_cast<double>(depth))) / 4.0;
    const double disc = b * b - 4.0 * a * c;
    return 2.0 * c / (b + std::sqrt(disc));
}

// The hand-built approximating sequence for the uniform datum with v0 = Id:
// 2n+1 equal masses at (i + sgn i)/n with velocities sgn(y)/n - y.
inline sticky_pep::ParticleState uniform_identity_approximation(std::size_t n) {
    sticky_pep::ParticleState state;
    const double mass = 1.0 / (2.0 * static_cast<double>(n) + 1.0);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t i = -sn; i <= sn; ++i) {
        const double sgn = i > 0 ? 1.0 : (i < 0 ? -1.0 : 0.0);
        const double y = (static_cast<double>(i) + sgn) / static_cast<double>(n);
        state.particles.push_back({mass, y, sgn / static_cast<double>(n) - y});
    }
    return state;
}

// The sharp two-particle system attaining the collapse envelope for a given
// initial support [y_left, y_right]: critical masses with perfect velocities.
inline sticky_pep::ParticleState envelope_extremal_pair(double y_left, double y_right) {
    const double width = y_right - y_left;
    const double mass_left = y_right / width;
    const double mass_right = -y_left / width;
    const double speed = std::sqrt(width);
    return {{{mass_left, y_left, mass_right * speed}, {mass_right, y_right, -mass_left * speed}},
            0.0};
}

}  // namespace fixtures
