#pragma once

#include <kclose/grid.hpp>

#include <cstddef>
#include <vector>

namespace kclose::detail {

// Band-limited refinement along one axis. A grid function is read as a
// trigonometric polynomial with frequencies in [-M/2, M/2) along `axis` and
// resampled on factor*M points per line. Output is line-major: line r (the
// frozen coordinate, 0 in 1D) occupies [r*factor*M, (r+1)*factor*M).
std::vector<cplx> refine_lines(const GridFunction& f, Axis axis, std::size_t factor);

// Inverse of refine_lines up to truncation: transforms each fine line, keeps
// the [-M/2, M/2) window and returns the coarse grid function.
GridFunction restrict_lines(std::vector<cplx> fine, const GridDomain& domain, Axis axis, std::size_t factor);

// Number of lines along an axis (1 in 1D, M in 2D).
inline std::size_t line_count(const GridDomain& d) { return d.dimension() == 1 ? 1 : d.size(); }

// Storage index of element t of line r along axis.
inline std::size_t line_element(const GridDomain& d, Axis axis, std::size_t r, std::size_t t) {
    if (d.dimension() == 1) return t;
    return axis == Axis::first ? t * d.size() + r : r * d.size() + t;
}

}  // namespace kclose::detail
