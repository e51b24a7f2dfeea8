#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "sticky_pep/state.hpp"

namespace sticky_pep {

/// Half-open index range [begin, end) into a state's particle sequence.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool contains(std::size_t i) const { return begin <= i && i < end; }
};

/// One merged cluster within a collision event. Indices refer to the particle
/// sequence immediately before the event.
struct ClusterMerge {
    IndexRange range;
    std::vector<double> pre_velocities;  ///< one per member, left to right
    double post_velocity = 0.0;          ///< mass-weighted mean (momentum conservation)
    bool glancing = false;               ///< velocity spread at impact within tolerance
};

struct CollisionEvent {
    double time = 0.0;  ///< absolute
    std::vector<ClusterMerge> clusters;
    double hamiltonian_before = 0.0;
    double hamiltonian_after = 0.0;
};

/// Initial data plus chronological merge events: a complete, exact record of
/// the piecewise-quadratic solution.
struct EventLog {
    ParticleState initial;
    std::vector<CollisionEvent> events;
    Outcome outcome;
    /// State anchored at the last event time (at the horizon for truncated runs).
    ParticleState final_state;

    /// Largest time the log can be sampled at; infinite unless truncated.
    double horizon() const {
        return outcome.truncated() ? outcome.time : std::numeric_limits<double>::infinity();
    }
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// a_i = (sum of mass left of i - sum of mass right of i) / 2.
double acceleration(const ParticleState& state, std::size_t i);
std::vector<double> accelerations(const ParticleState& state);

/// Advances every particle along its parabola by dt. The caller must ensure
/// no collision occurs strictly inside (0, dt); simulate() never violates this.
ParticleState free_flight(const ParticleState& state, double dt);

/// Particle i's initial parabola extrapolated past all collisions, evaluated
/// t time units after the state's instant.
double ghost_trajectory(const ParticleState& state, std::size_t i, double t);

struct NextCollision {
    double dt = 0.0;  ///< time until impact, relative to the state's instant
    std::vector<IndexRange> clusters;  ///< maximal contiguous groups, ascending
};

/// Earliest collision over all adjacent pairs, with every pair within
/// tol.time of the minimum coalesced into maximal contiguous clusters.
/// nullopt means no pair ever collides: an exact divergence certificate,
/// since accelerations are constant until the next event.
std::optional<NextCollision> next_collision(const ParticleState& state,
                                            const Tolerances& tol = {});

/// Replaces each cluster by one particle with summed mass, mass-weighted
/// position and mass-weighted velocity. Clusters must be co-located within
/// tol.pos (scaled by magnitude).
ParticleState merge(const ParticleState& state, const std::vector<IndexRange>& clusters,
                    const Tolerances& tol = {});

/// Event loop: alternates next_collision / free_flight / merge until one
/// particle remains (CollapsedAt), no pair ever collides (Diverges), or the
/// horizon is reached (TruncatedAt). Terminates after at most n-1 events.
EventLog simulate(const ParticleState& state, double t_max = kUnbounded,
                  const Tolerances& tol = {});

/// Segment-wise replay of an event log. Each inter-event segment is anchored
/// at its own start state, so sampling does not accumulate error.
class LogReplay {
  public:
    struct Segment {
        double start = 0.0;
        ParticleState anchor;
        /// original particle index -> index in anchor.particles
        std::vector<std::size_t> original_to_current;
    };

    explicit LogReplay(const EventLog& log, const Tolerances& tol = {});

    double horizon() const { return horizon_; }
    const std::vector<Segment>& segments() const { return segments_; }

    /// Distinct surviving particles at time t (post-merge at event times).
    ParticleState state_at(double t) const;

    /// Position of every original particle at time t; merged particles report
    /// the merged trajectory.
    std::vector<double> original_positions_at(double t) const;

  private:
    const Segment& segment_for(double t) const;

    std::vector<Segment> segments_;
    double start_time_ = 0.0;
    double horizon_ = 0.0;
};

/// positions[i][k] = position of original particle i at times[k].
std::vector<std::vector<double>> sample_trajectory(const EventLog& log,
                                                   const std::vector<double>& times);

/// Distinct surviving particles at time t.
ParticleState state_at(const EventLog& log, double t);

}  // namespace sticky_pep
