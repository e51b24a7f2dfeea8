#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sticky_pep/state.hpp"

namespace sticky_pep {

enum class CellKind : char { Converges = 'C', Diverges = 'D', Invalid = 'I' };

struct SweepCell {
    CellKind kind = CellKind::Invalid;
    double collapse_time = 0.0;  ///< valid for Converges
    double hamiltonian = 0.0;    ///< H of the offset initial state, valid for Converges
};

struct SweepParams {
    std::size_t particle = 0;
    std::size_t nx = 101;        ///< position-offset resolution
    std::size_t ny = 101;        ///< velocity-offset resolution
    double x_lo = -2.0, x_hi = 2.0;
    double y_lo = -2.0, y_hi = 2.0;
    unsigned workers = 0;        ///< 0: STICKY_PEP_WORKERS env var, else hardware
    Tolerances tol;
};

/// Raster of outcomes over (position offset, velocity offset) applied to one
/// particle of a base state. Cells are stored row-major: index iy * nx + ix
/// with iy indexing velocity offsets in ascending order.
struct RegionGrid {
    SweepParams params;
    std::vector<double> x_offsets;
    std::vector<double> y_offsets;
    std::vector<SweepCell> cells;

    const SweepCell& at(std::size_t ix, std::size_t iy) const {
        return cells[iy * params.nx + ix];
    }
};

/// Simulates every cell with an unbounded horizon (divergence is decided
/// exactly, never by a time cutoff). Offsets that break the strict position
/// ordering yield Invalid cells. Cells are independent and are evaluated by a
/// worker pool; the result is identical for any worker count.
RegionGrid run_sweep(const ParticleState& base, const SweepParams& params);

/// Cell encoding: "D" diverges, "I" invalid, else "t_collapse;H".
/// Rows are written top-to-bottom from the largest velocity offset.
void write_raster_csv(const RegionGrid& grid, std::ostream& out);

/// Binary PPM: black = diverges, gray = invalid; converging cells are colored
/// blue (small H) to orange (large H).
void write_ppm(const RegionGrid& grid, std::ostream& out);

/// STICKY_PEP_WORKERS environment variable, else hardware concurrency.
unsigned default_worker_count();

}  // namespace sticky_pep
