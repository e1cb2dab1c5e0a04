#include <kclose/grid.hpp>

#include "fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace kclose {

GridDomain::GridDomain(int dimension, std::size_t size) : dimension_(dimension), size_(size) {
    if (dimension != 1 && dimension != 2)
        throw DomainError("grid dimension must be 1 or 2, got " + std::to_string(dimension));
    if (size < 8 || !std::has_single_bit(size))
        throw DomainError("grid size must be a power of two >= 8, got " + std::to_string(size));
}

double GridDomain::angle(std::size_t j) const noexcept {
    return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size_);
}

void GridDomain::check_axis(Axis axis) const {
    if (static_cast<int>(axis) > dimension_)
        throw DomainError("axis " + std::to_string(static_cast<int>(axis)) + " does not exist on a " +
                          std::to_string(dimension_) + "D grid");
}

GridFunction::GridFunction(GridDomain domain)
    : domain_(domain), samples_(domain.point_count(), cplx{}) {}

GridFunction::GridFunction(GridDomain domain, std::vector<cplx> samples)
    : domain_(domain), samples_(std::move(samples)) {
    if (samples_.size() != domain_.point_count())
        throw DomainError("sample count " + std::to_string(samples_.size()) + " does not match grid (" +
                          std::to_string(domain_.point_count()) + " points)");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i].real()) || !std::isfinite(samples_[i].imag()))
            throw DomainError("non-finite sample at grid index " + std::to_string(i));
    }
}

GridFunction GridFunction::sample(const GridDomain& domain, const std::function<cplx(double)>& f) {
    if (domain.dimension() != 1) throw DomainError("one-variable sampler used on a 2D grid");
    std::vector<cplx> v(domain.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(domain.angle(j));
    return GridFunction(domain, std::move(v));
}

GridFunction GridFunction::sample(const GridDomain& domain, const std::function<cplx(double, double)>& f) {
    if (domain.dimension() != 2) throw DomainError("two-variable sampler used on a 1D grid");
    const std::size_t m = domain.size();
    std::vector<cplx> v(m * m);
    for (std::size_t j1 = 0; j1 < m; ++j1)
        for (std::size_t j2 = 0; j2 < m; ++j2) v[j1 * m + j2] = f(domain.angle(j1), domain.angle(j2));
    return GridFunction(domain, std::move(v));
}

GridFunction GridFunction::constant(const GridDomain& domain, cplx value) {
    return GridFunction(domain, std::vector<cplx>(domain.point_count(), value));
}

bool GridFunction::is_real(double tol) const noexcept {
    return std::all_of(samples_.begin(), samples_.end(),
                       [tol](cplx z) { return std::abs(z.imag()) <= tol; });
}

GridFunction GridFunction::real_part() const {
    return map(*this, [](cplx z) { return cplx(z.real(), 0.0); });
}

GridFunction GridFunction::conj() const {
    return map(*this, [](cplx z) { return std::conj(z); });
}

namespace {

void require_same_domain(const GridFunction& f, const GridFunction& g) {
    if (!(f.domain() == g.domain())) throw DomainError("grid functions live on different domains");
}

}  // namespace

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_domain(*this, other);
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_domain(*this, other);
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(cplx scale) {
    for (auto& z : samples_) z *= scale;
    return *this;
}

GridFunction operator+(GridFunction f, const GridFunction& g) { return f += g; }
GridFunction operator-(GridFunction f, const GridFunction& g) { return f -= g; }
GridFunction operator-(GridFunction f) { return f *= -1.0; }
GridFunction operator*(GridFunction f, cplx scale) { return f *= scale; }
GridFunction operator*(cplx scale, GridFunction f) { return f *= scale; }

Spectrum::Spectrum(GridDomain domain) : domain_(domain), coeffs_(domain.point_count(), cplx{}) {}

Spectrum::Spectrum(GridDomain domain, std::vector<cplx> coeffs)
    : domain_(domain), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != domain_.point_count())
        throw DomainError("coefficient count does not match grid");
}

std::size_t Spectrum::position(long k) const {
    if (k < min_frequency() || k >= end_frequency())
        throw DomainError("frequency " + std::to_string(k) + " outside window [" +
                          std::to_string(min_frequency()) + ", " + std::to_string(end_frequency()) + ")");
    return static_cast<std::size_t>(k - min_frequency());
}

Spectrum to_spectrum(const GridFunction& f) {
    const auto& d = f.domain();
    const std::size_t m = d.size();
    std::vector<cplx> work(f.samples().begin(), f.samples().end());
    detail::fft_grid(work, d, detail::FftSign::forward);
    const double scale = d.measure_weight();

    Spectrum s(d);
    auto out = s.coeffs();
    if (d.dimension() == 1) {
        for (std::size_t p = 0; p < m; ++p)
            out[p] = work[detail::fft_index(s.frequency(p), m)] * scale;
    } else {
        for (std::size_t p = 0; p < m; ++p) {
            const std::size_t row = detail::fft_index(s.frequency(p), m);
            for (std::size_t q = 0; q < m; ++q)
                out[p * m + q] = work[row * m + detail::fft_index(s.frequency(q), m)] * scale;
        }
    }
    return s;
}

GridFunction from_spectrum(const Spectrum& s) {
    const auto& d = s.domain();
    const std::size_t m = d.size();
    auto in = s.coeffs();
    std::vector<cplx> work(d.point_count());
    if (d.dimension() == 1) {
        for (std::size_t p = 0; p < m; ++p) work[detail::fft_index(s.frequency(p), m)] = in[p];
    } else {
        for (std::size_t p = 0; p < m; ++p) {
            const std::size_t row = detail::fft_index(s.frequency(p), m);
            for (std::size_t q = 0; q < m; ++q)
                work[row * m + detail::fft_index(s.frequency(q), m)] = in[p * m + q];
        }
    }
    detail::fft_grid(work, d, detail::FftSign::backward);
    return GridFunction(d, std::move(work));
}

GridFunction map(const GridFunction& f, const std::function<cplx(cplx)>& op) {
    std::vector<cplx> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(f[i]);
    return GridFunction(f.domain(), std::move(v));
}

GridFunction multiply(const GridFunction& f, const GridFunction& g) {
    require_same_domain(f, g);
    std::vector<cplx> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] * g[i];
    return GridFunction(f.domain(), std::move(v));
}

GridFunction divide(const GridFunction& f, const GridFunction& g) {
    require_same_domain(f, g);
    std::vector<cplx> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (g[i] == cplx{}) throw SingularityError(i, "division by zero sample at grid index " + std::to_string(i));
        v[i] = f[i] / g[i];
    }
    return GridFunction(f.domain(), std::move(v));
}

GridFunction abs(const GridFunction& f) {
    return map(f, [](cplx z) { return cplx(std::abs(z), 0.0); });
}

GridFunction sgn(const GridFunction& f) {
    return map(f, [](cplx z) {
        const double r = std::abs(z);
        return r == 0.0 ? cplx{} : z / r;
    });
}

GridFunction min_with(const GridFunction& f, double lambda) {
    return map(f, [lambda](cplx z) { return cplx(std::min(lambda, std::abs(z)), 0.0); });
}

GridFunction pointwise(const GridFunction& f, const GridFunction& g, PointwiseOp op, double scalar) {
    switch (op) {
        case PointwiseOp::add: return f + g;
        case PointwiseOp::sub: return f - g;
        case PointwiseOp::mul: return multiply(f, g);
        case PointwiseOp::div: return divide(f, g);
        case PointwiseOp::abs: return abs(f);
        case PointwiseOp::min_with_scalar: return min_with(f, scalar);
        case PointwiseOp::sgn: return sgn(f);
    }
    throw DomainError("unknown pointwise operation");
}

}  // namespace kclose
