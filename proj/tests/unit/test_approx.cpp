#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "sticky_pep/approx.hpp"
#include "sticky_pep/dynamics.hpp"
#include "sticky_pep/state.hpp"

using namespace sticky_pep;

TEST_CASE("discretize the uniform density at n = 2") {
    auto spec = measure_uniform(-1.0, 1.0, velocity_linear(1.0));  // v0 = Id
    auto state = discretize(spec, 2);
    REQUIRE(state.size() == 4);
    const double expected_y[4] = {-0.75, -0.25, 0.25, 0.75};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(state.particles[i].mass == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(state.particles[i].position == doctest::Approx(expected_y[i]).epsilon(1e-12));
        CHECK(state.particles[i].velocity == doctest::Approx(expected_y[i]).epsilon(1e-12));
    }
}

TEST_CASE("discretize a Dirac mass gives one particle") {
    auto spec = measure_diracs({1.0}, {0.0}, velocity_linear(-2.0));
    for (std::size_t n : {2, 7, 32}) {
        auto state = discretize(spec, n);
        REQUIRE(state.size() == 1);
        CHECK(state.particles[0].mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(state.particles[0].position) < 1e-12);
        CHECK(std::abs(state.particles[0].velocity) < 1e-12);
    }
}

TEST_CASE("discretize through the generic quantile path matches closed forms") {
    auto closed = measure_uniform(-1.0, 1.0, velocity_linear(-2.0));
    MeasureSpec generic = closed;
    generic.interval_integral = nullptr;
    for (std::size_t n : {2, 5, 16}) {
        auto a = discretize(closed, n);
        auto b = discretize(generic, n);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a.particles[i].mass == doctest::Approx(b.particles[i].mass).epsilon(1e-8));
            CHECK(a.particles[i].position ==
                  doctest::Approx(b.particles[i].position).epsilon(1e-8));
        }
    }
}

TEST_CASE("discretize conserves mass and first moment") {
    auto spec = measure_uniform(-1.0, 1.0, velocity_linear(-2.0));
    for (std::size_t n : {3, 9, 40}) {
        auto state = discretize(spec, n);
        CHECK(std::abs(total_mass(state) - 1.0) < 1e-10);
        CHECK(std::abs(center_of_mass(state)) < 1e-8);
    }
}

TEST_CASE("discretize respects the quantile Wasserstein bound") {
    auto spec = measure_uniform(-1.0, 1.0, velocity_linear(-2.0));
    for (std::size_t n : {2, 8, 32}) {
        auto state = discretize(spec, n);
        CHECK(w2_to_measure(state, spec) <= 1.0 / static_cast<double>(n) + 1e-9);
    }
}

TEST_CASE("discretize rejects supports beyond the unit interval") {
    auto spec = measure_uniform(-2.0, 1.0, velocity_linear(0.0));
    CHECK_THROWS_AS(discretize(spec, 4), std::invalid_argument);
}

TEST_CASE("continuous_margin of the uniform linear-inflow datum is 1") {
    auto spec = measure_uniform(-1.0, 1.0, velocity_linear(-2.0));
    auto result = continuous_margin(spec, 64);
    CHECK(result.margin == doctest::Approx(1.0).epsilon(1e-7));
    for (double value : result.grid.value) CHECK(value == doctest::Approx(1.0).epsilon(1e-7));
    // Admissible cuts never flip the side means.
    for (std::size_t i = 0; i < result.grid.cut.size(); ++i) {
        CHECK(result.grid.y_left[i] <= result.grid.y_right[i]);
        CHECK(result.grid.y_left[i] <= result.grid.cut[i] + 1e-12);
    }
}

TEST_CASE("continuous_margin of the tangent Dirac pair is 0") {
    const double c = std::sqrt(2.0) / 2.0;
    auto spec = measure_diracs({0.5, 0.5}, {-1.0, 1.0}, velocity_sgn_scaled(-c));
    auto result = continuous_margin(spec, 32);
    REQUIRE(result.grid.cut.size() == 1);  // only the cut at y = -1 is admissible
    CHECK(std::abs(result.margin) < 1e-9);
}

TEST_CASE("continuous_margin is negative for a motionless datum") {
    auto spec = measure_uniform(-1.0, 1.0, velocity_linear(0.0));
    auto result = continuous_margin(spec, 32);
    for (double value : result.grid.value) CHECK(value < 0.0);
}

TEST_CASE("continuous_margin enforces the zero frame") {
    auto spec = measure_uniform(0.0, 1.0, velocity_linear(0.0));
    CHECK_THROWS_AS(continuous_margin(spec, 16), std::invalid_argument);
}

TEST_CASE("positive margin certifies collapse of the discretizations") {
    auto spec = measure_uniform(-1.0, 1.0, velocity_linear(-2.0));
    REQUIRE(continuous_margin(spec, 32).margin > 0.5);
    for (std::size_t n : {4, 16}) {
        auto log = simulate(discretize(spec, n));
        CHECK(log.outcome.collapsed());
        CHECK(log.outcome.time <= 2.0 * std::sqrt(2.0) + 1e-9);
    }
}

TEST_CASE("the hand-built identity-velocity approximation splits into two half clusters") {
    const std::size_t n = 10;
    auto log = simulate(fixtures::uniform_identity_approximation(n));
    auto state = state_at(log, 3.0);

    double mass_left = 0.0, mass_right = 0.0, com_left = 0.0, com_right = 0.0;
    for (const auto& p : state.particles) {
        if (p.position > 1e-12) {
            mass_right += p.mass;
            com_right += p.mass * p.position;
        } else if (p.position < -1e-12) {
            mass_left += p.mass;
            com_left += p.mass * p.position;
        }
    }
    const double slack = 5.0 / static_cast<double>(n);
    CHECK(std::abs(mass_right - 0.5) < slack);
    CHECK(std::abs(mass_left - 0.5) < slack);
    CHECK(std::abs(com_right / mass_right - 0.125) < slack);
    CHECK(std::abs(com_left / mass_left + 0.125) < slack);
}

TEST_CASE("quantile tables interpolate and discretize") {
    // Piecewise-linear quantile of the uniform measure on [-1, 1].
    auto spec = measure_quantile_table({0.0, 0.5, 1.0}, {-1.0, 0.0, 1.0}, velocity_linear(-2.0));
    CHECK(spec.quantile(0.25) == doctest::Approx(-0.5));
    auto state = discretize(spec, 2);
    REQUIRE(state.size() == 4);
    CHECK(state.particles[0].position == doctest::Approx(-0.75).epsilon(1e-8));
    CHECK(state.particles[3].position == doctest::Approx(0.75).epsilon(1e-8));
}

TEST_CASE("parse_measure_spec reads the three measure kinds") {
    {
        std::istringstream in("# uniform datum\nmeasure uniform -1 1\nvelocity linear -2\n");
        auto spec = parse_measure_spec(in);
        CHECK(spec.quantile(0.75) == doctest::Approx(0.5));
        CHECK(spec.velocity(0.5) == doctest::Approx(-1.0));
    }
    {
        std::istringstream in("measure diracs 0.5 -1 0.5 1\nvelocity sgn-scaled -0.5\n");
        auto spec = parse_measure_spec(in);
        CHECK(spec.quantile(0.25) == -1.0);
        CHECK(spec.velocity(1.0) == -0.5);
    }
    {
        std::istringstream in(
            "measure quantile-table 0 -1 1 1\nvelocity table -1 0.5 1 -0.5\n");
        auto spec = parse_measure_spec(in);
        CHECK(spec.quantile(0.5) == doctest::Approx(0.0));
        CHECK(spec.velocity(0.0) == doctest::Approx(0.0));
    }
}

TEST_CASE("parse_measure_spec rejects malformed configs") {
    std::istringstream missing("measure uniform -1 1\n");
    CHECK_THROWS_AS(parse_measure_spec(missing), std::invalid_argument);
    std::istringstream junk("measure uniform -1 one\nvelocity linear 0\n");
    CHECK_THROWS_AS(parse_measure_spec(junk), std::invalid_argument);
    std::istringstream unknown("gradient uniform -1 1\nvelocity linear 0\n");
    CHECK_THROWS_AS(parse_measure_spec(unknown), std::invalid_argument);
}
