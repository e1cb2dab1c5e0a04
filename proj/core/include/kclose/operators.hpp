#pragma once

#include <kclose/grid.hpp>

#include <functional>

namespace kclose {

/// Half-line a witness or cut-off is supported on along its axis.
enum class Side { analytic, anti_analytic };

/// Admissible frequencies [lo, hi] along one axis, the other axis unrestricted.
/// When twisted, membership is tested on conj(theta) * f (see settings.hpp).
struct SpectralSupport {
    Axis axis = Axis::first;
    long lo = 0;
    long hi = 0;
    bool twisted = false;

    bool admits(long k) const noexcept { return k >= lo && k <= hi; }
};

/// Side and axis of an algebra of one-sided functions.
struct AlgebraSide {
    Side side = Side::analytic;
    Axis axis = Axis::first;
};

/// k >= 0 (analytic) or k <= 0 (anti-analytic) along the side's axis.
SpectralSupport algebra_support(const AlgebraSide& side);

/// ||f_outside||_2 / ||f||_2 for the spectral mass outside an untwisted
/// support; 0 for f = 0.
double spectral_residual(const GridFunction& f, const SpectralSupport& support);

/// Multiplies the spectrum along `axis` by m(k); in 2D the other variable is frozen.
GridFunction apply_multiplier(const GridFunction& f, Axis axis, const std::function<cplx(long)>& m);

/// Spectral multiplier -i*sgn(k) along the axis. The Nyquist mode k = -M/2 is
/// sent to zero so that real input gives real output.
/// Throws PreconditionError if u has imaginary parts above 1e-12.
GridFunction harmonic_conjugate(const GridFunction& u, Axis axis = Axis::first);

/// Keeps frequencies k <= -1 along the axis.
GridFunction riesz_neg(const GridFunction& f, Axis axis = Axis::first);

/// Keeps frequencies k >= 0 along the axis.
GridFunction riesz_pos(const GridFunction& f, Axis axis = Axis::first);

/// Fejer mean of order n: multiplier max(0, 1 - |k|/(n+1)). Requires 1 <= n <= M/2 - 1.
GridFunction fejer_smooth(const GridFunction& u, int n, Axis axis = Axis::first);

/// w = v + i*H(v) (analytic) or v - i*H(v) (anti-analytic) with v the Fejer mean
/// of u. Re w equals v exactly, so Re w >= 0 whenever u >= 0.
///
/// Throws PreconditionError for non-real u or samples below -1e-12.
GridFunction alpha_witness(const GridFunction& u, int n, Side side, Axis axis = Axis::first);

}  // namespace kclose
