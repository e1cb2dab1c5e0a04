#pragma once

#include <kclose/grid.hpp>

#include <cstddef>
#include <span>

namespace kclose::detail {

enum class FftSign : int { forward = -1, backward = +1 };

/// In-place unnormalized DFT of `howmany` lines of length n. Line i starts at
/// data[i*dist] and has element stride `stride`. Thread-safe.
void fft_lines(cplx* data, std::size_t n, std::size_t howmany, std::size_t stride,
               std::size_t dist, FftSign sign);

/// Unnormalized 1D transform of a contiguous buffer.
inline void fft(std::span<cplx> data, FftSign sign) {
    fft_lines(data.data(), data.size(), 1, 1, data.size(), sign);
}

/// Unnormalized transform of a whole grid (both axes in 2D), FFT storage order.
void fft_grid(std::span<cplx> data, const GridDomain& domain, FftSign sign);

/// Unnormalized transform along one axis only.
void fft_axis(std::span<cplx> data, const GridDomain& domain, Axis axis, FftSign sign);

/// Signed frequency of FFT-order index m for length n.
inline long fft_frequency(std::size_t m, std::size_t n) noexcept {
    return m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
}

/// FFT-order index of signed frequency k in [-n/2, n/2).
inline std::size_t fft_index(long k, std::size_t n) noexcept {
    return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + static_cast<long>(n));
}

}  // namespace kclose::detail
