#include "sticky_pep/state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sticky_pep {

double total_mass(const ParticleState& state) {
    double m = 0.0;
    for (const auto& p : state.particles) m += p.mass;
    return m;
}

double total_momentum(const ParticleState& state) {
    double mv = 0.0;
    for (const auto& p : state.particles) mv += p.mass * p.velocity;
    return mv;
}

double center_of_mass(const ParticleState& state) {
    double my = 0.0;
    for (const auto& p : state.particles) my += p.mass * p.position;
    return my / total_mass(state);
}

std::vector<Violation> validate(const ParticleState& state) {
    std::vector<Violation> out;
    if (state.particles.empty()) {
        out.push_back({0, "state has no particles"});
        return out;
    }
    if (!std::isfinite(state.time) || state.time < 0.0) {
        out.push_back({0, "time is not a finite nonnegative real"});
    }
    for (std::size_t i = 0; i < state.particles.size(); ++i) {
        const auto& p = state.particles[i];
        std::ostringstream at;
        at << " at index " << i;
        if (!std::isfinite(p.mass)) {
            out.push_back({i, "mass not finite" + at.str()});
        } else if (p.mass <= 0.0) {
            out.push_back({i, "mass <= 0" + at.str()});
        }
        if (!std::isfinite(p.position)) out.push_back({i, "position not finite" + at.str()});
        if (!std::isfinite(p.velocity)) out.push_back({i, "velocity not finite" + at.str()});
    }
    for (std::size_t i = 0; i + 1 < state.particles.size(); ++i) {
        if (!(state.particles[i].position < state.particles[i + 1].position)) {
            std::ostringstream msg;
            msg << "positions not strictly increasing at index " << i;
            out.push_back({i, msg.str()});
        }
    }
    return out;
}

void require_valid(const ParticleState& state) {
    auto violations = validate(state);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "invalid particle state:";
    for (const auto& v : violations) msg << " [" << v.message << "]";
    throw std::invalid_argument(msg.str());
}

std::pair<ParticleState, Frame> normalize_galilean(const ParticleState& state) {
    require_valid(state);
    const double mass = total_mass(state);
    const double momentum = total_momentum(state);
    const double com = center_of_mass(state);
    const double mean_velocity = momentum / mass;

    ParticleState shifted = state;
    for (auto& p : shifted.particles) {
        p.position -= com;
        p.velocity -= mean_velocity;
    }
    return {shifted, Frame{com, momentum}};
}

ParticleState apply_frame(const ParticleState& state, const Frame& frame) {
    const double mean_velocity = frame.total_momentum / total_mass(state);
    ParticleState out = state;
    for (auto& p : out.particles) {
        p.position += frame.center_of_mass;
        p.velocity += mean_velocity;
    }
    return out;
}

double w2_to_dirac(const ParticleState& state) {
    double sum = 0.0;
    for (const auto& p : state.particles) sum += p.mass * p.position * p.position;
    return std::sqrt(sum);
}

}  // namespace sticky_pep
