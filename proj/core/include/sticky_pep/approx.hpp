#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "sticky_pep/state.hpp"

namespace sticky_pep {

struct BinIntegral {
    double mass = 0.0;
    double first_moment = 0.0;
};

/// A continuous initial datum: a quantile function (generalized inverse CDF)
/// pushing Lebesgue measure on (0,1) to the mass distribution, plus an initial
/// velocity field on the support.
///
/// The quantile callable must be nondecreasing and right-continuous and is
/// evaluated on clamped arguments in [0, 1]. interval_integral, when set,
/// supplies the exact mass and first moment of a position interval
/// [lo, hi) (closed on the right when closed_right); otherwise both are
/// obtained from the quantile function by bisection and adaptive Simpson
/// integration (absolute tolerance 1e-10).
struct MeasureSpec {
    std::function<double(double)> quantile;
    std::function<double(double)> velocity;
    double support_lo = -1.0;
    double support_hi = 1.0;
    std::function<BinIntegral(double lo, double hi, bool closed_right)> interval_integral;
};

MeasureSpec measure_uniform(double a, double b, std::function<double(double)> velocity);
MeasureSpec measure_diracs(std::vector<double> masses, std::vector<double> points,
                           std::function<double(double)> velocity);
MeasureSpec measure_quantile_table(std::vector<double> u, std::vector<double> y,
                                   std::function<double(double)> velocity);

std::function<double(double)> velocity_linear(double c);      ///< v0(y) = c * y
std::function<double(double)> velocity_sgn_scaled(double c);  ///< v0(y) = c * sgn(y)
std::function<double(double)> velocity_table(std::vector<double> y, std::vector<double> v);

/// Parses the measure config format: a "measure ..." line and a "velocity ..."
/// line ('#' comments and blank lines ignored). Measure kinds:
///   measure uniform a b
///   measure diracs m1 y1 m2 y2 ...
///   measure quantile-table u1 y1 u2 y2 ...
/// Velocity kinds:
///   velocity linear c
///   velocity sgn-scaled c
///   velocity table y1 v1 y2 v2 ...
MeasureSpec parse_measure_spec(std::istream& in);

/// Discretizes onto bins of width 1/n over [-1, 1]: one particle per bin with
/// positive mass, placed at the bin's center of mass with velocity v0 there.
/// Guarantees W2(rho^n, rho) <= 1/n. Support must lie within [-1, 1].
ParticleState discretize(const MeasureSpec& spec, std::size_t n);

/// Grid of the split functional E[mu,v](y) = V_L - V_R - sqrt(Y_R - Y_L)
/// over admissible cuts (0 < M(y) < 1).
struct SplitFunctional {
    std::vector<double> cut;        ///< cut positions y
    std::vector<double> mass_left;  ///< M(y)
    std::vector<double> y_left, y_right;
    std::vector<double> v_left, v_right;
    std::vector<double> value;      ///< E at the cut
};

struct MarginResult {
    double margin = 0.0;   ///< inf E over the grid
    double argmin = 0.0;   ///< cut attaining it
    SplitFunctional grid;
};

/// Evaluates E on the quantile images N(k/G), k = 1..G-1, keeping only
/// admissible cuts. A strictly positive margin certifies that the
/// discretizations of every large n collapse by time 2 sqrt(2).
/// Requires zero center of mass and zero mean velocity.
MarginResult continuous_margin(const MeasureSpec& spec, std::size_t grid_size);

/// W2 between a discrete state (an empirical probability measure) and the
/// spec, computed from the two quantile functions.
double w2_to_measure(const ParticleState& state, const MeasureSpec& spec);

}  // namespace sticky_pep
