#pragma once

#include <cmath>
#include <limits>
#include <optional>

namespace sticky_pep::detail {

// Tangency half-width for the gap discriminant dv^2 - M*dy. The gap of a
// near-simultaneous pair is formed by cancelling O(position_scale) values, so
// the discriminant carries an ABSOLUTE error of a few hundred ulp of
// |dv|*velocity_scale + M*position_scale no matter how small the pair's own
// magnitudes are. Glancing cascades sit exactly on disc = 0; noise inside
// this band must read as tangency or the sqrt would inject ~1e-8 into the
// root and derail the cascade.
inline double discriminant_noise(double dv, double pair_mass, double position_scale,
                                 double velocity_scale) {
    constexpr double k = 512.0 * std::numeric_limits<double>::epsilon();
    return k * (std::abs(dv) * velocity_scale + pair_mass * position_scale);
}

// Time until an adjacent gap dy - dv*t + (M/4)*t^2 closes, where dy > 0 is
// the gap and dv the approach speed. The smaller root is computed in the
// cancellation-free form 2*dy / (dv + sqrt(disc)). nullopt: never meets.
inline std::optional<double> gap_closing_time(double dy, double dv, double pair_mass,
                                              double position_scale, double velocity_scale) {
    if (!(dv > 0.0)) return std::nullopt;  // receding or parallel; gap is convex
    const double disc = dv * dv - pair_mass * dy;
    const double noise = discriminant_noise(dv, pair_mass, position_scale, velocity_scale);
    if (disc < -noise) return std::nullopt;
    if (disc <= noise) return 2.0 * dy / dv;  // tangency
    return 2.0 * dy / (dv + std::sqrt(disc));
}

// Two-particle convergence test: meets (tangency included) iff
// dv >= sqrt(M * dy), with the same clamped discriminant the simulator uses
// so borderline pairs classify consistently.
inline bool pair_converges(double dy, double dv, double pair_mass, double position_scale,
                           double velocity_scale) {
    return gap_closing_time(dy, dv, pair_mass, position_scale, velocity_scale).has_value();
}

}  // namespace sticky_pep::detail
