#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "fixtures.hpp"
#include "sticky_pep/sweep.hpp"

using namespace sticky_pep;

namespace {

SweepParams small_grid(unsigned workers) {
    SweepParams params;
    params.nx = 5;
    params.ny = 5;
    params.workers = workers;
    return params;
}

}  // namespace

TEST_CASE("sweep cells classify the tangent pair's neighborhood") {
    auto grid = run_sweep(fixtures::equal_pair(), small_grid(2));
    // Offsets are {-2, -1, 0, 1, 2} on each axis.
    CHECK(grid.x_offsets[2] == 0.0);
    CHECK(grid.y_offsets[2] == 0.0);

    const auto& center = grid.at(2, 2);
    CHECK(center.kind == CellKind::Converges);
    CHECK(std::abs(center.hamiltonian) < 1e-12);
    CHECK(center.collapse_time == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));

    // Slowing the left particle by 1 leaves too little approach speed.
    CHECK(grid.at(2, 1).kind == CellKind::Diverges);
    // Moving the left particle onto the right one is not a valid state.
    CHECK(grid.at(4, 2).kind == CellKind::Invalid);
}

TEST_CASE("sweep output is byte-identical for any worker count") {
    auto one = run_sweep(fixtures::equal_pair(), small_grid(1));
    auto four = run_sweep(fixtures::equal_pair(), small_grid(4));
    std::ostringstream a, b;
    write_raster_csv(one, a);
    write_raster_csv(four, b);
    CHECK(a.str() == b.str());

    std::ostringstream img_a, img_b;
    write_ppm(one, img_a);
    write_ppm(four, img_b);
    CHECK(img_a.str() == img_b.str());
}

TEST_CASE("H grows with the velocity offset among converging cells") {
    SweepParams params;
    params.nx = 1;
    params.ny = 9;
    params.x_lo = params.x_hi = 0.0;
    params.workers = 2;
    auto grid = run_sweep(fixtures::equal_pair(), params);

    double prev = -1.0;
    for (std::size_t iy = 4; iy < 9; ++iy) {  // offsets 0, 0.5, ..., 2
        const auto& cell = grid.at(0, iy);
        REQUIRE(cell.kind == CellKind::Converges);
        CHECK(cell.hamiltonian >= prev);
        prev = cell.hamiltonian;
    }
}

TEST_CASE("raster CSV encodes cells as D, I or t;H") {
    auto grid = run_sweep(fixtures::equal_pair(), small_grid(1));
    std::ostringstream out;
    write_raster_csv(grid, out);
    std::istringstream lines(out.str());
    std::string line;
    std::size_t rows = 0, comments = 0;
    while (std::getline(lines, line)) {
        if (line.rfind('#', 0) == 0) {
            ++comments;
            continue;
        }
        ++rows;
        std::size_t cells = 1;
        for (char c : line) cells += c == ',';
        CHECK(cells == 5);
        CHECK(line.find_first_not_of("0123456789.,;eE+-DI") == std::string::npos);
    }
    CHECK(rows == 5);
    CHECK(comments == 3);
}

TEST_CASE("ppm header matches the grid resolution") {
    auto grid = run_sweep(fixtures::equal_pair(), small_grid(1));
    std::ostringstream out;
    write_ppm(grid, out);
    const std::string ppm = out.str();
    CHECK(ppm.rfind("P6\n5 5\n255\n", 0) == 0);
    CHECK(ppm.size() == std::string("P6\n5 5\n255\n").size() + 3 * 25);
}

TEST_CASE("worker count falls back to the environment variable") {
    setenv("STICKY_PEP_WORKERS", "3", 1);
    CHECK(default_worker_count() == 3);
    setenv("STICKY_PEP_WORKERS", "garbage", 1);
    CHECK(default_worker_count() >= 1);
    unsetenv("STICKY_PEP_WORKERS");
    CHECK(default_worker_count() >= 1);
}

TEST_CASE("sweep validates the particle index") {
    SweepParams params = small_grid(1);
    params.particle = 5;
    CHECK_THROWS_AS(run_sweep(fixtures::equal_pair(), params), std::invalid_argument);
}
