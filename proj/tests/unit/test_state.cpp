#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "fixtures.hpp"
#include "sticky_pep/state.hpp"

using namespace sticky_pep;

TEST_CASE("validate accepts a single valid particle") {
    ParticleState s{{{1.0, 0.0, 0.0}}, 0.0};
    CHECK(validate(s).empty());
}

TEST_CASE("validate reports coincident positions") {
    ParticleState s{{{0.5, -1.0, 0.0}, {0.5, -1.0, 0.0}}, 0.0};
    auto violations = validate(s);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].index == 0);
    CHECK(violations[0].message.find("strictly increasing") != std::string::npos);
}

TEST_CASE("validate reports nonpositive mass") {
    ParticleState s{{{-0.5, 0.0, 0.0}}, 0.0};
    auto violations = validate(s);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].index == 0);
    CHECK(violations[0].message.find("mass") != std::string::npos);
}

TEST_CASE("validate reports non-finite fields and empty states") {
    CHECK(validate(ParticleState{}).size() == 1);
    ParticleState s{{{1.0, std::nan(""), 0.0}}, 0.0};
    CHECK(!validate(s).empty());
}

TEST_CASE("normalize_galilean shifts a symmetric pair") {
    ParticleState s{{{0.5, 0.0, 1.0}, {0.5, 2.0, 1.0}}, 0.0};
    auto [shifted, frame] = normalize_galilean(s);
    CHECK(frame.center_of_mass == doctest::Approx(1.0));
    CHECK(frame.total_momentum == doctest::Approx(1.0));
    CHECK(shifted.particles[0].position == doctest::Approx(-1.0));
    CHECK(shifted.particles[1].position == doctest::Approx(1.0));
    CHECK(shifted.particles[0].velocity == doctest::Approx(0.0));
    CHECK(shifted.particles[1].velocity == doctest::Approx(0.0));
}

TEST_CASE("normalize_galilean leaves the zero-frame pair unchanged") {
    auto s = fixtures::equal_pair();
    auto [shifted, frame] = normalize_galilean(s);
    CHECK(frame.center_of_mass == 0.0);
    CHECK(frame.total_momentum == 0.0);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(shifted.particles[i].position == s.particles[i].position);
        CHECK(shifted.particles[i].velocity == s.particles[i].velocity);
    }
}

TEST_CASE("normalize_galilean on an asymmetric pair") {
    const double third = 1.0 / 3.0;
    ParticleState s{{{third, -1.0, 1.0}, {2 * third, 2.0, -1.0}}, 0.0};
    auto [shifted, frame] = normalize_galilean(s);
    CHECK(frame.center_of_mass == doctest::Approx(1.0));
    CHECK(frame.total_momentum == doctest::Approx(-third));
    CHECK(shifted.particles[0].position == doctest::Approx(-2.0));
    CHECK(shifted.particles[1].position == doctest::Approx(1.0));
    CHECK(shifted.particles[0].velocity == doctest::Approx(4.0 / 3.0));
    CHECK(shifted.particles[1].velocity == doctest::Approx(-2.0 / 3.0));
    // Re-verify the frame identities directly.
    CHECK(std::abs(center_of_mass(shifted)) < 1e-15);
    CHECK(std::abs(total_momentum(shifted)) < 1e-15);
}

TEST_CASE("normalize_galilean round trip is exact") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = corpus::random_system(rng, corpus::VelocityStyle::RandomCapped);
        for (auto& p : s.particles) {
            p.position += 3.25;
            p.velocity += -1.5;
        }
        auto [shifted, frame] = normalize_galilean(s);
        CHECK(std::abs(center_of_mass(shifted)) <= 1e-12 * (1.0 + std::abs(frame.center_of_mass)));
        CHECK(std::abs(total_momentum(shifted)) <= 1e-12 * (1.0 + std::abs(frame.total_momentum)));
        auto restored = apply_frame(shifted, frame);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(restored.particles[i].position ==
                  doctest::Approx(s.particles[i].position).epsilon(1e-15));
            CHECK(restored.particles[i].velocity ==
                  doctest::Approx(s.particles[i].velocity).epsilon(1e-15));
        }
    }
}

TEST_CASE("normalize_galilean rejects invalid states") {
    ParticleState bad{{{-1.0, 0.0, 0.0}}, 0.0};
    CHECK_THROWS_AS(normalize_galilean(bad), std::invalid_argument);
}

TEST_CASE("w2_to_dirac on point and pair") {
    CHECK(w2_to_dirac(ParticleState{{{1.0, 0.0, 0.0}}, 0.0}) == 0.0);
    ParticleState pair{{{0.5, -1.0, 0.3}, {0.5, 1.0, 0.1}}, 0.0};
    CHECK(w2_to_dirac(pair) == doctest::Approx(1.0));
}

TEST_CASE("w2_to_dirac on the quarter-mass configuration") {
    ParticleState s{
        {{0.25, -0.75, 0.0}, {0.25, -0.25, 0.0}, {0.25, 0.25, 0.0}, {0.25, 0.75, 0.0}}, 0.0};
    CHECK(w2_to_dirac(s) == doctest::Approx(std::sqrt(5.0 / 16.0)).epsilon(1e-12));
}

TEST_CASE("w2_to_dirac squared matches Kahan summation") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = corpus::random_system(rng, corpus::VelocityStyle::RandomCapped,
                                       {.min_particles = 2, .max_particles = 10});
        double sum = 0.0, compensation = 0.0;
        for (const auto& p : s.particles) {
            const double term = p.mass * p.position * p.position - compensation;
            const double next = sum + term;
            compensation = (next - sum) - term;
            sum = next;
        }
        const double direct = w2_to_dirac(s);
        CHECK(direct * direct == doctest::Approx(sum).epsilon(1e-12));
    }
}
