#include "sticky_pep/approx.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sticky_pep {

namespace {

constexpr double kIntegralTol = 1e-10;
constexpr double kEmptyBinMass = 1e-12;

double simpson_rule(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double m, double b,
                        double fa, double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_rule(f, a, m, fa, flm, fm);
    const double right = simpson_rule(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, rm, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

/// Adaptive Simpson quadrature, absolute tolerance. Bounded recursion depth
/// keeps step discontinuities (atomic measures) from looping.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = kIntegralTol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson_rule(f, a, b, fa, fm, fb);
    return adaptive_simpson(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

double clamp01(double u) { return std::min(1.0, std::max(0.0, u)); }

/// Smallest u in [0,1] with N(u) >= x (N nondecreasing, right-continuous).
double u_where_quantile_reaches(const std::function<double(double)>& quantile, double x) {
    if (quantile(1.0) < x) return 1.0;
    if (quantile(0.0) >= x) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (quantile(mid) >= x) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

/// Smallest u in [0,1] with N(u) > y; equals the CDF value M(y).
double cdf_from_quantile(const std::function<double(double)>& quantile, double y) {
    if (quantile(1.0) <= y) return 1.0;
    if (quantile(0.0) > y) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (quantile(mid) > y) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

BinIntegral generic_interval_integral(const MeasureSpec& spec, double lo, double hi,
                                      bool closed_right) {
    const double u_lo = u_where_quantile_reaches(spec.quantile, lo);
    const double u_hi = closed_right ? 1.0 : u_where_quantile_reaches(spec.quantile, hi);
    BinIntegral bin;
    bin.mass = u_hi - u_lo;
    if (bin.mass > 0.0) {
        bin.first_moment = integrate([&](double u) { return spec.quantile(clamp01(u)); }, u_lo, u_hi);
    }
    return bin;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string token;
    while (in >> token) out.push_back(token);
    return out;
}

double parse_double(const std::string& token, const char* what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("measure config: bad number for ") + what + ": '" +
                                    token + "'");
    }
    return value;
}

std::vector<double> parse_doubles(const std::vector<std::string>& tokens, std::size_t from,
                                  const char* what) {
    std::vector<double> out;
    for (std::size_t i = from; i < tokens.size(); ++i) out.push_back(parse_double(tokens[i], what));
    return out;
}

}  // namespace

MeasureSpec measure_uniform(double a, double b, std::function<double(double)> velocity) {
    if (!(a < b)) throw std::invalid_argument("measure_uniform: requires a < b");
    MeasureSpec spec;
    spec.support_lo = a;
    spec.support_hi = b;
    spec.quantile = [a, b](double u) { return a + (b - a) * clamp01(u); };
    spec.velocity = std::move(velocity);
    spec.interval_integral = [a, b](double lo, double hi, bool closed_right) {
        // Density 1/(b-a); the right-closed flag is irrelevant for an
        // absolutely continuous measure.
        (void)closed_right;
        const double left = std::max(lo, a);
        const double right = std::min(hi, b);
        BinIntegral bin;
        if (right > left) {
            bin.mass = (right - left) / (b - a);
            bin.first_moment = 0.5 * (right * right - left * left) / (b - a);
        }
        return bin;
    };
    return spec;
}

MeasureSpec measure_diracs(std::vector<double> masses, std::vector<double> points,
                           std::function<double(double)> velocity) {
    if (masses.empty() || masses.size() != points.size()) {
        throw std::invalid_argument("measure_diracs: need equally many masses and points");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (!(masses[i] > 0.0)) throw std::invalid_argument("measure_diracs: masses must be positive");
        if (i > 0 && !(points[i] > points[i - 1])) {
            throw std::invalid_argument("measure_diracs: points must be strictly increasing");
        }
        total += masses[i];
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("measure_diracs: masses must sum to 1");
    }

    std::vector<double> cumulative(masses.size());
    double running = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        running += masses[i];
        cumulative[i] = running;
    }
    cumulative.back() = 1.0;

    MeasureSpec spec;
    spec.support_lo = points.front();
    spec.support_hi = points.back();
    spec.quantile = [cumulative, points](double u) {
        u = clamp01(u);
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) return points.back();
        return points[static_cast<std::size_t>(it - cumulative.begin())];
    };
    spec.velocity = std::move(velocity);
    spec.interval_integral = [masses, points](double lo, double hi, bool closed_right) {
        BinIntegral bin;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const bool inside = points[i] >= lo && (closed_right ? points[i] <= hi : points[i] < hi);
            if (inside) {
                bin.mass += masses[i];
                bin.first_moment += masses[i] * points[i];
            }
        }
        return bin;
    };
    return spec;
}

MeasureSpec measure_quantile_table(std::vector<double> u, std::vector<double> y,
                                   std::function<double(double)> velocity) {
    if (u.size() < 2 || u.size() != y.size()) {
        throw std::invalid_argument("measure_quantile_table: need >= 2 (u, y) pairs");
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < 0.0 || u[i] > 1.0) {
            throw std::invalid_argument("measure_quantile_table: u values must lie in [0, 1]");
        }
        if (i > 0 && (!(u[i] > u[i - 1]) || y[i] < y[i - 1])) {
            throw std::invalid_argument(
                "measure_quantile_table: u must be strictly increasing and y nondecreasing");
        }
    }

    MeasureSpec spec;
    spec.support_lo = y.front();
    spec.support_hi = y.back();
    spec.quantile = [u, y](double x) {
        x = clamp01(x);
        if (x <= u.front()) return y.front();
        if (x >= u.back()) return y.back();
        auto it = std::upper_bound(u.begin(), u.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - u.begin());
        const double w = (x - u[i - 1]) / (u[i] - u[i - 1]);
        return y[i - 1] + w * (y[i] - y[i - 1]);
    };
    spec.velocity = std::move(velocity);
    return spec;
}

std::function<double(double)> velocity_linear(double c) {
    return [c](double y) { return c * y; };
}

std::function<double(double)> velocity_sgn_scaled(double c) {
    return [c](double y) { return y > 0.0 ? c : (y < 0.0 ? -c : 0.0); };
}

std::function<double(double)> velocity_table(std::vector<double> y, std::vector<double> v) {
    if (y.size() < 2 || y.size() != v.size()) {
        throw std::invalid_argument("velocity_table: need >= 2 (y, v) pairs");
    }
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (!(y[i] > y[i - 1])) {
            throw std::invalid_argument("velocity_table: y values must be strictly increasing");
        }
    }
    return [y, v](double x) {
        if (x <= y.front()) return v.front();
        if (x >= y.back()) return v.back();
        auto it = std::upper_bound(y.begin(), y.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - y.begin());
        const double w = (x - y[i - 1]) / (y[i] - y[i - 1]);
        return v[i - 1] + w * (v[i] - v[i - 1]);
    };
}

MeasureSpec parse_measure_spec(std::istream& in) {
    std::vector<std::string> measure_tokens;
    std::vector<std::string> velocity_tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "measure") {
            measure_tokens = std::move(tokens);
        } else if (tokens[0] == "velocity") {
            velocity_tokens = std::move(tokens);
        } else {
            throw std::invalid_argument("measure config: unknown directive '" + tokens[0] + "'");
        }
    }
    if (measure_tokens.size() < 2) throw std::invalid_argument("measure config: missing measure line");
    if (velocity_tokens.size() < 2) throw std::invalid_argument("measure config: missing velocity line");

    std::function<double(double)> velocity;
    const std::string& vkind = velocity_tokens[1];
    auto vargs = parse_doubles(velocity_tokens, 2, "velocity");
    if (vkind == "linear" && vargs.size() == 1) {
        velocity = velocity_linear(vargs[0]);
    } else if (vkind == "sgn-scaled" && vargs.size() == 1) {
        velocity = velocity_sgn_scaled(vargs[0]);
    } else if (vkind == "table" && vargs.size() >= 4 && vargs.size() % 2 == 0) {
        std::vector<double> ys, vs;
        for (std::size_t i = 0; i < vargs.size(); i += 2) {
            ys.push_back(vargs[i]);
            vs.push_back(vargs[i + 1]);
        }
        velocity = velocity_table(std::move(ys), std::move(vs));
    } else {
        throw std::invalid_argument("measure config: bad velocity line (kinds: linear c | sgn-scaled c | table y v ...)");
    }

    const std::string& mkind = measure_tokens[1];
    auto margs = parse_doubles(measure_tokens, 2, "measure");
    if (mkind == "uniform" && margs.size() == 2) {
        return measure_uniform(margs[0], margs[1], std::move(velocity));
    }
    if (mkind == "diracs" && margs.size() >= 2 && margs.size() % 2 == 0) {
        std::vector<double> ms, ys;
        for (std::size_t i = 0; i < margs.size(); i += 2) {
            ms.push_back(margs[i]);
            ys.push_back(margs[i + 1]);
        }
        return measure_diracs(std::move(ms), std::move(ys), std::move(velocity));
    }
    if (mkind == "quantile-table" && margs.size() >= 4 && margs.size() % 2 == 0) {
        std::vector<double> us, ys;
        for (std::size_t i = 0; i < margs.size(); i += 2) {
            us.push_back(margs[i]);
            ys.push_back(margs[i + 1]);
        }
        return measure_quantile_table(std::move(us), std::move(ys), std::move(velocity));
    }
    throw std::invalid_argument(
        "measure config: bad measure line (kinds: uniform a b | diracs m y ... | quantile-table u y ...)");
}

ParticleState discretize(const MeasureSpec& spec, std::size_t n) {
    if (n < 2) throw std::invalid_argument("discretize: n must be >= 2");
    if (!spec.quantile || !spec.velocity) {
        throw std::invalid_argument("discretize: spec needs quantile and velocity callables");
    }
    if (spec.support_lo < -1.0 - 1e-12 || spec.support_hi > 1.0 + 1e-12) {
        throw std::invalid_argument("discretize: support must lie within [-1, 1]; rescale externally");
    }

    ParticleState state;
    const auto signed_n = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t k = -signed_n; k < signed_n; ++k) {
        const double lo = static_cast<double>(k) / static_cast<double>(n);
        const double hi = static_cast<double>(k + 1) / static_cast<double>(n);
        const bool last = (k == signed_n - 1);
        const BinIntegral bin = spec.interval_integral
                                    ? spec.interval_integral(lo, hi, last)
                                    : generic_interval_integral(spec, lo, hi, last);
        if (bin.mass <= kEmptyBinMass) continue;
        const double y = bin.first_moment / bin.mass;
        state.particles.push_back({bin.mass, y, spec.velocity(y)});
    }
    if (state.particles.empty()) throw std::invalid_argument("discretize: no bin carries mass");
    require_valid(state);
    return state;
}

MarginResult continuous_margin(const MeasureSpec& spec, std::size_t grid_size) {
    if (grid_size < 2) throw std::invalid_argument("continuous_margin: grid_size must be >= 2");
    auto quantile = [&](double u) { return spec.quantile(clamp01(u)); };
    auto velocity_at = [&](double u) { return spec.velocity(quantile(u)); };

    const double moment = integrate(quantile, 0.0, 1.0);
    const double mean_velocity = integrate(velocity_at, 0.0, 1.0);
    if (std::abs(moment) > 1e-6 || std::abs(mean_velocity) > 1e-6) {
        throw std::invalid_argument("continuous_margin: requires zero center of mass and zero mean velocity");
    }

    // Admissible cuts: quantile images with CDF strictly inside (0, 1).
    std::vector<double> cuts, cut_u;
    for (std::size_t k = 1; k < grid_size; ++k) {
        const double y = quantile(static_cast<double>(k) / static_cast<double>(grid_size));
        if (!cuts.empty() && y == cuts.back()) continue;
        const double u = cdf_from_quantile(spec.quantile, y);
        if (u <= 0.0 || u >= 1.0) continue;
        cuts.push_back(y);
        cut_u.push_back(u);
    }
    if (cuts.empty()) {
        throw std::invalid_argument("continuous_margin: measure has no admissible cuts");
    }

    // Prefix integrals of N and v0(N), accumulated cut to cut.
    MarginResult result;
    result.margin = std::numeric_limits<double>::infinity();
    double prev_u = 0.0;
    double moment_prefix = 0.0;
    double velocity_prefix = 0.0;
    const double moment_total = moment;
    const double velocity_total = mean_velocity;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        moment_prefix += integrate(quantile, prev_u, cut_u[i]);
        velocity_prefix += integrate(velocity_at, prev_u, cut_u[i]);
        prev_u = cut_u[i];

        const double mass_left = cut_u[i];
        const double mass_right = 1.0 - mass_left;
        const double y_left = moment_prefix / mass_left;
        const double y_right = (moment_total - moment_prefix) / mass_right;
        const double v_left = velocity_prefix / mass_left;
        const double v_right = (velocity_total - velocity_prefix) / mass_right;
        const double gap = std::max(0.0, y_right - y_left);
        const double value = v_left - v_right - std::sqrt(gap);

        result.grid.cut.push_back(cuts[i]);
        result.grid.mass_left.push_back(mass_left);
        result.grid.y_left.push_back(y_left);
        result.grid.y_right.push_back(y_right);
        result.grid.v_left.push_back(v_left);
        result.grid.v_right.push_back(v_right);
        result.grid.value.push_back(value);
        if (value < result.margin) {
            result.margin = value;
            result.argmin = cuts[i];
        }
    }
    return result;
}

double w2_to_measure(const ParticleState& state, const MeasureSpec& spec) {
    require_valid(state);
    if (std::abs(total_mass(state) - 1.0) > 1e-9) {
        throw std::invalid_argument("w2_to_measure: state must carry total mass 1");
    }
    auto quantile = [&](double u) { return spec.quantile(clamp01(u)); };
    double sum = 0.0;
    double cum = 0.0;
    for (const auto& p : state.particles) {
        const double next = cum + p.mass;
        const double y = p.position;
        sum += integrate([&](double u) {
            const double d = y - quantile(u);
            return d * d;
        }, cum, std::min(next, 1.0));
        cum = next;
    }
    return std::sqrt(std::max(0.0, sum));
}

}  // namespace sticky_pep
