#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace sticky_pep {

/// Absolute tolerances threaded through the simulator and its audits.
/// All are overridable from the CLI.
struct Tolerances {
    double time = 1e-9;  ///< coalescing window for simultaneous collisions
    double pos = 1e-9;   ///< co-location check at merges
    double vel = 1e-7;   ///< glancing classification (velocity spread at impact)
};

struct Particle {
    double mass = 0.0;
    double position = 0.0;
    double velocity = 0.0;
};

/// Ordered particle system at one instant.
///
/// Positions are strictly increasing; co-located particles must be merged
/// into a single particle before a state is formed. States are immutable
/// values: every operation returns a new state.
struct ParticleState {
    std::vector<Particle> particles;
    double time = 0.0;

    std::size_t size() const { return particles.size(); }
};

/// Frame data removed by normalize_galilean. The original trajectories are
/// recovered from the normalized ones as
///   y(t) = ybar(t) + center_of_mass + t * total_momentum / total_mass.
struct Frame {
    double center_of_mass = 0.0;
    double total_momentum = 0.0;
};

enum class OutcomeKind { CollapsedAt, Diverges, TruncatedAt };

/// Terminal classification of a simulation run.
struct Outcome {
    OutcomeKind kind = OutcomeKind::Diverges;
    double time = 0.0;  ///< meaningful for CollapsedAt and TruncatedAt

    static Outcome collapsed_at(double t) { return {OutcomeKind::CollapsedAt, t}; }
    static Outcome diverges() { return {OutcomeKind::Diverges, 0.0}; }
    static Outcome truncated_at(double t) { return {OutcomeKind::TruncatedAt, t}; }

    bool collapsed() const { return kind == OutcomeKind::CollapsedAt; }
    bool diverged() const { return kind == OutcomeKind::Diverges; }
    bool truncated() const { return kind == OutcomeKind::TruncatedAt; }
};

struct Violation {
    std::size_t index = 0;
    std::string message;
};

double total_mass(const ParticleState& state);
double total_momentum(const ParticleState& state);
double center_of_mass(const ParticleState& state);

/// Collects every violated state invariant with its particle index.
/// An empty result means the state is valid. Never throws.
std::vector<Violation> validate(const ParticleState& state);

/// Throws std::invalid_argument listing all violations if the state is invalid.
void require_valid(const ParticleState& state);

/// Shifts the state into the zero center-of-mass, zero total-momentum frame
/// and returns the removed frame data.
std::pair<ParticleState, Frame> normalize_galilean(const ParticleState& state);

/// Same-instant inverse of normalize_galilean.
ParticleState apply_frame(const ParticleState& state, const Frame& frame);

/// 2-Wasserstein distance to the Dirac mass at the origin: sqrt(sum m_i y_i^2).
double w2_to_dirac(const ParticleState& state);

}  // namespace sticky_pep
