#include "sticky_pep/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gap_quadratic.hpp"
#include "sticky_pep/energy.hpp"

namespace sticky_pep {

namespace {

void check_index(const ParticleState& state, std::size_t i) {
    if (i >= state.size()) {
        std::ostringstream msg;
        msg << "particle index " << i << " out of range (n = " << state.size() << ")";
        throw std::out_of_range(msg.str());
    }
}

// (mass left - mass right) / 4 for every particle: the t^2 coefficient of the
// kinematic parabola. Recomputed from scratch after every merge.
std::vector<double> quadratic_coefficients(const ParticleState& state) {
    const std::size_t n = state.size();
    std::vector<double> quarter(n);
    double left = 0.0;
    std::vector<double> right_suffix(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        right_suffix[i] = right_suffix[i + 1] + state.particles[i].mass;
    }
    for (std::size_t i = 0; i < n; ++i) {
        quarter[i] = (left - right_suffix[i + 1]) / 4.0;
        left += state.particles[i].mass;
    }
    return quarter;
}

}  // namespace

double acceleration(const ParticleState& state, std::size_t i) {
    check_index(state, i);
    return 2.0 * quadratic_coefficients(state)[i];
}

std::vector<double> accelerations(const ParticleState& state) {
    auto quarter = quadratic_coefficients(state);
    for (auto& q : quarter) q *= 2.0;
    return quarter;
}

ParticleState free_flight(const ParticleState& state, double dt) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("free_flight: dt must be a finite nonnegative real");
    }
    const auto quarter = quadratic_coefficients(state);
    ParticleState out = state;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& p = out.particles[i];
        p.position += dt * p.velocity + dt * dt * quarter[i];
        p.velocity += 2.0 * quarter[i] * dt;
    }
    out.time += dt;
    return out;
}

double ghost_trajectory(const ParticleState& state, std::size_t i, double t) {
    check_index(state, i);
    const auto quarter = quadratic_coefficients(state);
    const auto& p = state.particles[i];
    return p.position + t * p.velocity + t * t * quarter[i];
}

std::optional<NextCollision> next_collision(const ParticleState& state, const Tolerances& tol) {
    if (state.size() < 2) {
        throw std::invalid_argument("next_collision: state has no adjacent pairs");
    }

    const std::size_t n = state.size();
    double position_scale = 1.0, velocity_scale = 1.0;
    for (const auto& p : state.particles) {
        position_scale = std::max(position_scale, std::abs(p.position));
        velocity_scale = std::max(velocity_scale, std::abs(p.velocity));
    }

    std::vector<double> pair_time(n - 1, std::numeric_limits<double>::infinity());
    double t_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto& a = state.particles[i];
        const auto& b = state.particles[i + 1];
        auto t = detail::gap_closing_time(b.position - a.position, a.velocity - b.velocity,
                                          a.mass + b.mass, position_scale, velocity_scale);
        if (t) {
            pair_time[i] = *t;
            t_min = std::min(t_min, *t);
        }
    }
    if (!std::isfinite(t_min)) return std::nullopt;

    // Coalesce every pair within the coincidence window of the minimum;
    // overlapping pairs form one multi-particle cluster.
    NextCollision out;
    out.dt = t_min;
    const double window = t_min + tol.time;
    std::size_t i = 0;
    while (i + 1 < n) {
        if (pair_time[i] <= window) {
            IndexRange range{i, i + 2};
            while (range.end < n && pair_time[range.end - 1] <= window) ++range.end;
            out.clusters.push_back(range);
            i = range.end;
        } else {
            ++i;
        }
    }
    return out;
}

ParticleState merge(const ParticleState& state, const std::vector<IndexRange>& clusters,
                    const Tolerances& tol) {
    const std::size_t n = state.size();
    std::size_t prev_end = 0;
    for (const auto& c : clusters) {
        if (c.size() < 2 || c.end > n || (prev_end > 0 && c.begin < prev_end)) {
            throw std::invalid_argument("merge: clusters must be disjoint ascending ranges of >= 2 particles");
        }
        prev_end = c.end;
        double lo = state.particles[c.begin].position;
        double hi = state.particles[c.end - 1].position;
        if (hi - lo > tol.pos * (1.0 + std::abs(lo))) {
            throw std::invalid_argument("merge: cluster members are not co-located");
        }
    }

    ParticleState out;
    out.time = state.time;
    out.particles.reserve(n);
    std::size_t i = 0;
    auto next_cluster = clusters.begin();
    while (i < n) {
        if (next_cluster != clusters.end() && next_cluster->begin == i) {
            double m = 0.0, my = 0.0, mv = 0.0;
            for (std::size_t j = next_cluster->begin; j < next_cluster->end; ++j) {
                const auto& p = state.particles[j];
                m += p.mass;
                my += p.mass * p.position;
                mv += p.mass * p.velocity;
            }
            out.particles.push_back({m, my / m, mv / m});
            i = next_cluster->end;
            ++next_cluster;
        } else {
            out.particles.push_back(state.particles[i]);
            ++i;
        }
    }
    return out;
}

EventLog simulate(const ParticleState& state, double t_max, const Tolerances& tol) {
    require_valid(state);
    if (!(t_max > 0.0) || t_max < state.time) {
        throw std::invalid_argument("simulate: t_max must be positive and not before the state's time");
    }

    EventLog log;
    log.initial = state;
    ParticleState current = state;

    while (current.size() > 1) {
        auto next = next_collision(current, tol);
        if (!next) {
            log.outcome = Outcome::diverges();
            break;
        }
        const double t_event = current.time + next->dt;
        if (t_event > t_max) {
            current = free_flight(current, t_max - current.time);
            log.outcome = Outcome::truncated_at(t_max);
            break;
        }

        ParticleState at_impact = free_flight(current, next->dt);
        CollisionEvent event;
        event.time = t_event;
        event.hamiltonian_before = hamiltonian(at_impact);
        for (const auto& range : next->clusters) {
            ClusterMerge cluster;
            cluster.range = range;
            double m = 0.0, mv = 0.0;
            double v_lo = std::numeric_limits<double>::infinity();
            double v_hi = -std::numeric_limits<double>::infinity();
            for (std::size_t j = range.begin; j < range.end; ++j) {
                const auto& p = at_impact.particles[j];
                cluster.pre_velocities.push_back(p.velocity);
                m += p.mass;
                mv += p.mass * p.velocity;
                v_lo = std::min(v_lo, p.velocity);
                v_hi = std::max(v_hi, p.velocity);
            }
            cluster.post_velocity = mv / m;
            cluster.glancing = (v_hi - v_lo) <= tol.vel;
            event.clusters.push_back(std::move(cluster));
        }

        current = merge(at_impact, next->clusters, tol);
        event.hamiltonian_after = hamiltonian(current);
        log.events.push_back(std::move(event));
    }

    if (current.size() == 1) {
        log.outcome = Outcome::collapsed_at(current.time);
    }
    log.final_state = std::move(current);
    return log;
}

LogReplay::LogReplay(const EventLog& log, const Tolerances& tol) {
    Segment seg;
    seg.start = log.initial.time;
    seg.anchor = log.initial;
    seg.original_to_current.resize(log.initial.size());
    for (std::size_t i = 0; i < log.initial.size(); ++i) seg.original_to_current[i] = i;
    segments_.push_back(std::move(seg));

    for (const auto& event : log.events) {
        const Segment& prev = segments_.back();
        ParticleState at_impact = free_flight(prev.anchor, event.time - prev.start);

        std::vector<IndexRange> ranges;
        ranges.reserve(event.clusters.size());
        for (const auto& c : event.clusters) ranges.push_back(c.range);

        Segment next;
        next.start = event.time;
        next.anchor = merge(at_impact, ranges, tol);

        // Remap pre-event indices to post-merge indices.
        std::vector<std::size_t> remap(at_impact.size());
        std::size_t out_idx = 0, i = 0;
        auto range = ranges.begin();
        while (i < at_impact.size()) {
            if (range != ranges.end() && range->begin == i) {
                for (std::size_t j = range->begin; j < range->end; ++j) remap[j] = out_idx;
                i = range->end;
                ++range;
            } else {
                remap[i] = out_idx;
                ++i;
            }
            ++out_idx;
        }
        next.original_to_current.reserve(prev.original_to_current.size());
        for (std::size_t cur : prev.original_to_current) {
            next.original_to_current.push_back(remap[cur]);
        }
        segments_.push_back(std::move(next));
    }

    start_time_ = log.initial.time;
    horizon_ = log.horizon();
}

const LogReplay::Segment& LogReplay::segment_for(double t) const {
    if (t < start_time_ || t > horizon_) {
        std::ostringstream msg;
        msg << "time " << t << " outside the log's range [" << start_time_ << ", " << horizon_ << "]";
        throw std::out_of_range(msg.str());
    }
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double value, const Segment& s) { return value < s.start; });
    return *std::prev(it);
}

ParticleState LogReplay::state_at(double t) const {
    const Segment& seg = segment_for(t);
    return free_flight(seg.anchor, t - seg.start);
}

std::vector<double> LogReplay::original_positions_at(double t) const {
    const Segment& seg = segment_for(t);
    const double dt = t - seg.start;
    const auto quarter = quadratic_coefficients(seg.anchor);
    std::vector<double> positions(seg.original_to_current.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const auto& p = seg.anchor.particles[seg.original_to_current[i]];
        positions[i] = p.position + dt * p.velocity + dt * dt * quarter[seg.original_to_current[i]];
    }
    return positions;
}

std::vector<std::vector<double>> sample_trajectory(const EventLog& log,
                                                   const std::vector<double>& times) {
    LogReplay replay(log);
    std::vector<std::vector<double>> rows(log.initial.size(), std::vector<double>(times.size()));
    for (std::size_t k = 0; k < times.size(); ++k) {
        auto positions = replay.original_positions_at(times[k]);
        for (std::size_t i = 0; i < positions.size(); ++i) rows[i][k] = positions[i];
    }
    return rows;
}

ParticleState state_at(const EventLog& log, double t) {
    return LogReplay(log).state_at(t);
}

}  // namespace sticky_pep
