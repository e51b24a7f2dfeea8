#include "sticky_pep/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gap_quadratic.hpp"

namespace sticky_pep {

namespace {

void require_unit_zero_frame(const ParticleState& state, const char* where) {
    require_valid(state);
    double mass = 0.0, moment = 0.0, momentum = 0.0, max_y = 0.0, max_v = 0.0;
    for (const auto& p : state.particles) {
        mass += p.mass;
        moment += p.mass * p.position;
        momentum += p.mass * p.velocity;
        max_y = std::max(max_y, std::abs(p.position));
        max_v = std::max(max_v, std::abs(p.velocity));
    }
    std::ostringstream msg;
    if (std::abs(mass - 1.0) > 1e-9) {
        msg << where << ": requires total mass 1 (got " << mass << ")";
        throw std::invalid_argument(msg.str());
    }
    if (std::abs(moment) > 1e-9 * (1.0 + max_y)) {
        msg << where << ": requires zero center of mass";
        throw std::invalid_argument(msg.str());
    }
    if (std::abs(momentum) > 1e-9 * (1.0 + max_v)) {
        msg << where << ": requires zero total momentum";
        throw std::invalid_argument(msg.str());
    }
}

Particle side_mean(const ParticleState& state, std::size_t begin, std::size_t end) {
    double m = 0.0, my = 0.0, mv = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const auto& p = state.particles[i];
        m += p.mass;
        my += p.mass * p.position;
        mv += p.mass * p.velocity;
    }
    return {m, my / m, mv / m};
}

// Quadratic c0 + c1 t + c2 t^2.
struct Quad {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;

    double operator()(double t) const { return c0 + t * (c1 + t * c2); }
    Quad operator-(const Quad& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
};

// Earliest t in [a, b] (b may be infinite) where q(t) > threshold, by exact
// root analysis. nullopt if q stays at or below the threshold.
std::optional<double> first_above(const Quad& q, double a, double b, double threshold) {
    if (a > b) return std::nullopt;
    if (q(a) > threshold) return a;
    const double c0 = q.c0 - threshold;
    if (q.c2 == 0.0) {
        if (q.c1 <= 0.0) return std::nullopt;
        const double t = -c0 / q.c1;
        const double first = std::max(t, a);
        return first <= b ? std::optional<double>(first) : std::nullopt;
    }
    const double disc = q.c1 * q.c1 - 4.0 * q.c2 * c0;
    if (q.c2 > 0.0) {
        // Upward parabola with q(a) <= threshold: a lies between the roots;
        // the value exceeds the threshold after the larger root.
        if (disc <= 0.0) return std::nullopt;  // grazing from below
        const double root = (-q.c1 + std::sqrt(disc)) / (2.0 * q.c2);
        const double first = std::max(root, a);
        return first <= b ? std::optional<double>(first) : std::nullopt;
    }
    // Downward parabola: above the threshold only between the roots.
    if (disc <= 0.0) return std::nullopt;
    const double smaller_root = (-q.c1 + std::sqrt(disc)) / (2.0 * q.c2);  // c2 < 0 flips order
    if (smaller_root < a) return std::nullopt;  // already past the bump
    return smaller_root <= b ? std::optional<double>(smaller_root) : std::nullopt;
}

}  // namespace

SplitState k_split(const ParticleState& state, std::size_t k) {
    require_valid(state);
    const std::size_t n = state.size();
    if (k < 1 || k >= n) {
        std::ostringstream msg;
        msg << "k_split: k must be in [1, " << n - 1 << "], got " << k;
        throw std::out_of_range(msg.str());
    }
    double moment = 0.0, momentum = 0.0, max_y = 0.0, max_v = 0.0;
    for (const auto& p : state.particles) {
        moment += p.mass * p.position;
        momentum += p.mass * p.velocity;
        max_y = std::max(max_y, std::abs(p.position));
        max_v = std::max(max_v, std::abs(p.velocity));
    }
    if (std::abs(moment) > 1e-9 * (1.0 + max_y) || std::abs(momentum) > 1e-9 * (1.0 + max_v)) {
        throw std::invalid_argument("k_split: requires zero center of mass and zero total momentum");
    }
    return {side_mean(state, 0, k), side_mean(state, k, n), k};
}

bool two_particle_converges(const SplitState& split) {
    const double position_scale =
        std::max({1.0, std::abs(split.left.position), std::abs(split.right.position)});
    const double velocity_scale =
        std::max({1.0, std::abs(split.left.velocity), std::abs(split.right.velocity)});
    return detail::pair_converges(split.right.position - split.left.position,
                                  split.left.velocity - split.right.velocity,
                                  split.left.mass + split.right.mass, position_scale,
                                  velocity_scale);
}

SplitCondition necessary_condition(const ParticleState& state) {
    require_unit_zero_frame(state, "necessary_condition");
    for (std::size_t k = 1; k < state.size(); ++k) {
        if (two_particle_converges(k_split(state, k))) return {true, k};
    }
    return {false, std::nullopt};
}

SplitCondition sufficient_condition(const ParticleState& state) {
    require_unit_zero_frame(state, "sufficient_condition");
    for (std::size_t k = 1; k < state.size(); ++k) {
        if (!two_particle_converges(k_split(state, k))) return {false, k};
    }
    return {true, std::nullopt};
}

double Envelope::closing_time() const { return 2.0 * std::sqrt(width()); }

double Envelope::f(double t) const {
    const double remaining = closing_time() - t;
    if (remaining <= 0.0) return 0.0;
    return remaining * remaining / (4.0 * width());
}

double Envelope::f_left(double t) const { return y_left0 * f(t); }
double Envelope::f_right(double t) const { return y_right0 * f(t); }

Envelope envelope_of(const ParticleState& state) {
    require_unit_zero_frame(state, "envelope_of");
    if (state.size() < 2) {
        throw std::invalid_argument("envelope_of: needs at least two particles");
    }
    return {state.particles.front().position, state.particles.back().position};
}

EnvelopeCheck check_envelope(const EventLog& log, const Tolerances& tol) {
    require_unit_zero_frame(log.initial, "check_envelope");
    const double t_init = log.initial.time;
    const double tol_env = std::max(tol.pos, 1e-12);

    if (log.initial.size() < 2) {
        // A lone particle is the equilibrium itself.
        const double y = log.initial.particles.front().position;
        if (std::abs(y) <= tol_env) return {true, std::nullopt};
        return {false, t_init};
    }

    const Envelope env = envelope_of(log.initial);
    const double duration = env.closing_time();
    const double quarter_env = 1.0 / (4.0 * env.width());

    LogReplay replay(log, tol);
    const auto& segments = replay.segments();

    std::optional<double> exit;
    auto consider = [&](std::optional<double> candidate, double seg_start) {
        if (!candidate) return;
        const double t = seg_start + *candidate;
        if (!exit || t < *exit) exit = t;
    };

    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto& seg = segments[s];
        const double seg_len = (s + 1 < segments.size())
                                   ? segments[s + 1].start - seg.start
                                   : log.horizon() - seg.start;
        const ParticleState& anchor = seg.anchor;
        const std::size_t n = anchor.size();

        if (n == 1) {
            // Post-collapse equilibrium; FP momentum residue is not extrapolated.
            if (std::abs(anchor.particles.front().position) > tol_env) {
                consider(0.0, seg.start);
            }
            continue;
        }

        const auto acc = accelerations(anchor);
        const Quad right{anchor.particles.back().position, anchor.particles.back().velocity,
                         acc.back() / 2.0};
        const Quad left{anchor.particles.front().position, anchor.particles.front().velocity,
                        acc.front() / 2.0};

        // Remaining envelope time at the segment start.
        const double g = duration - (seg.start - t_init);

        // Open part of the tube: compare trajectory and envelope quadratics.
        const double a_open = 0.0;
        const double b_open = std::min(seg_len, g);
        if (b_open >= a_open) {
            const Quad f_right{env.y_right0 * quarter_env * g * g,
                               -2.0 * env.y_right0 * quarter_env * g, env.y_right0 * quarter_env};
            const Quad f_left{env.y_left0 * quarter_env * g * g,
                              -2.0 * env.y_left0 * quarter_env * g, env.y_left0 * quarter_env};
            consider(first_above(right - f_right, a_open, b_open, tol_env), seg.start);
            const Quad neg_left{f_left.c0 - left.c0, f_left.c1 - left.c1, f_left.c2 - left.c2};
            consider(first_above(neg_left, a_open, b_open, tol_env), seg.start);
        }

        // Closed part: the tube has collapsed to the origin.
        const double a_closed = std::max(0.0, g);
        if (seg_len > a_closed) {
            consider(first_above(right, a_closed, seg_len, tol_env), seg.start);
            consider(first_above(Quad{-left.c0, -left.c1, -left.c2}, a_closed, seg_len, tol_env),
                     seg.start);
        }
    }

    if (exit) return {false, exit};
    return {true, std::nullopt};
}

double collapse_time_bound(const ParticleState& state) {
    require_unit_zero_frame(state, "collapse_time_bound");
    return 2.0 * std::sqrt(state.particles.back().position - state.particles.front().position);
}

double w2_envelope_bound(const ParticleState& state, double t) {
    require_unit_zero_frame(state, "w2_envelope_bound");
    const double y_left = state.particles.front().position;
    const double y_right = state.particles.back().position;
    const double width = y_right - y_left;
    const double remaining = 2.0 * std::sqrt(width) - t;
    if (remaining <= 0.0) return 0.0;
    return std::sqrt(-y_right * y_left) / (4.0 * width) * remaining * remaining;
}

ParticleState combine_group(const ParticleState& state, IndexRange range) {
    require_valid(state);
    if (range.size() == 0 || range.end > state.size()) {
        throw std::invalid_argument("combine_group: range must be a nonempty contiguous slice");
    }
    if (range.size() == 1) return state;

    ParticleState out;
    out.time = state.time;
    out.particles.reserve(state.size() - range.size() + 1);
    for (std::size_t i = 0; i < range.begin; ++i) out.particles.push_back(state.particles[i]);
    out.particles.push_back(side_mean(state, range.begin, range.end));
    for (std::size_t i = range.end; i < state.size(); ++i) out.particles.push_back(state.particles[i]);
    return out;
}

}  // namespace sticky_pep
