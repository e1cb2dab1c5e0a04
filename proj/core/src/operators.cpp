#include <kclose/operators.hpp>

#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kclose {

namespace {

constexpr double kRealTolerance = 1e-12;

void require_real(const GridFunction& u, const char* op) {
    if (!u.is_real(kRealTolerance))
        throw PreconditionError(std::string(op) + ": input must be real-valued (|Im| <= 1e-12)");
}

GridFunction drop_imaginary(const GridFunction& f) { return f.real_part(); }

}  // namespace

SpectralSupport algebra_support(const AlgebraSide& side) {
    constexpr long unbounded = std::numeric_limits<long>::max();
    if (side.side == Side::analytic) return {side.axis, 0, unbounded, false};
    return {side.axis, -unbounded, 0, false};
}

double spectral_residual(const GridFunction& f, const SpectralSupport& support) {
    if (support.twisted) throw DomainError("twisted supports need a setting (use support_residual)");
    f.domain().check_axis(support.axis);
    const Spectrum spec = to_spectrum(f);
    const auto& d = spec.domain();
    const std::size_t m = d.size();
    auto c = spec.coeffs();

    double outside = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const std::size_t along = d.dimension() == 1 ? i : (support.axis == Axis::first ? i / m : i % m);
        const double e = std::norm(c[i]);
        total += e;
        if (!support.admits(spec.frequency(along))) outside += e;
    }
    return total == 0.0 ? 0.0 : std::sqrt(outside / total);
}

GridFunction apply_multiplier(const GridFunction& f, Axis axis, const std::function<cplx(long)>& m) {
    const auto& d = f.domain();
    d.check_axis(axis);
    const std::size_t n = d.size();

    std::vector<cplx> factor(n);
    for (std::size_t i = 0; i < n; ++i) factor[i] = m(detail::fft_frequency(i, n)) / static_cast<double>(n);

    std::vector<cplx> work(f.samples().begin(), f.samples().end());
    detail::fft_axis(work, d, axis, detail::FftSign::forward);
    if (d.dimension() == 1) {
        for (std::size_t i = 0; i < n; ++i) work[i] *= factor[i];
    } else if (axis == Axis::first) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) work[i * n + j] *= factor[i];
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) work[i * n + j] *= factor[j];
    }
    detail::fft_axis(work, d, axis, detail::FftSign::backward);
    return GridFunction(d, std::move(work));
}

GridFunction harmonic_conjugate(const GridFunction& u, Axis axis) {
    require_real(u, "harmonic_conjugate");
    const long nyquist = -static_cast<long>(u.domain().size() / 2);
    auto v = apply_multiplier(u, axis, [nyquist](long k) -> cplx {
        if (k == 0 || k == nyquist) return {};
        return k > 0 ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
    });
    return drop_imaginary(v);
}

GridFunction riesz_neg(const GridFunction& f, Axis axis) {
    return apply_multiplier(f, axis, [](long k) { return k <= -1 ? cplx(1.0) : cplx{}; });
}

GridFunction riesz_pos(const GridFunction& f, Axis axis) {
    return apply_multiplier(f, axis, [](long k) { return k >= 0 ? cplx(1.0) : cplx{}; });
}

GridFunction fejer_smooth(const GridFunction& u, int n, Axis axis) {
    const long limit = static_cast<long>(u.domain().size() / 2) - 1;
    if (n < 1 || n > limit)
        throw DomainError("Fejer order " + std::to_string(n) + " outside [1, " + std::to_string(limit) + "]");
    const double width = n + 1.0;
    auto v = apply_multiplier(u, axis, [width](long k) {
        return cplx(std::max(0.0, 1.0 - std::abs(static_cast<double>(k)) / width));
    });
    return u.is_real(0.0) ? drop_imaginary(v) : v;
}

GridFunction alpha_witness(const GridFunction& u, int n, Side side, Axis axis) {
    require_real(u, "alpha_witness");
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i].real() < -kRealTolerance)
            throw PreconditionError("alpha_witness: input negative at grid index " + std::to_string(i));
    }
    const auto v = fejer_smooth(u.real_part(), n, axis);
    const auto conj_v = harmonic_conjugate(v, axis);
    const double sign = side == Side::analytic ? 1.0 : -1.0;

    std::vector<cplx> w(v.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = cplx(v[i].real(), sign * conj_v[i].real());
    return GridFunction(v.domain(), std::move(w));
}

}  // namespace kclose
