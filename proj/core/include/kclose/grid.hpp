#pragma once

#include <kclose/error.hpp>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kclose {

using cplx = std::complex<double>;

/// Which torus variable an operator acts in.
enum class Axis : int { first = 1, second = 2 };

/// Uniform grid on the circle (dimension 1) or the bi-torus (dimension 2).
///
/// Each axis carries M points at angles 2*pi*j/M, M a power of two with M >= 8.
/// Quadrature weights are 1/M^d so the total measure is exactly one.
class GridDomain {
public:
    GridDomain(int dimension, std::size_t size);

    int dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return size_; }
    std::size_t point_count() const noexcept { return dimension_ == 1 ? size_ : size_ * size_; }
    double measure_weight() const noexcept { return 1.0 / static_cast<double>(point_count()); }

    /// Angle of grid index j along one axis.
    double angle(std::size_t j) const noexcept;

    /// Throws DomainError if the axis does not exist on this domain.
    void check_axis(Axis axis) const;

    friend bool operator==(const GridDomain&, const GridDomain&) = default;

private:
    int dimension_;
    std::size_t size_;
};

/// Complex samples on a GridDomain. 2D samples are row-major: index j1*M + j2,
/// where j1 runs along Axis::first and j2 along Axis::second.
class GridFunction {
public:
    /// The zero function.
    explicit GridFunction(GridDomain domain);
    GridFunction(GridDomain domain, std::vector<cplx> samples);

    /// Samples a callable f(theta) (1D) or f(theta1, theta2) (2D).
    static GridFunction sample(const GridDomain& domain, const std::function<cplx(double)>& f);
    static GridFunction sample(const GridDomain& domain, const std::function<cplx(double, double)>& f);
    static GridFunction constant(const GridDomain& domain, cplx value);

    const GridDomain& domain() const noexcept { return domain_; }
    std::span<const cplx> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    cplx operator[](std::size_t i) const { return samples_[i]; }
    cplx& operator[](std::size_t i) { return samples_[i]; }
    cplx at(std::size_t j1, std::size_t j2) const { return samples_[j1 * domain_.size() + j2]; }

    /// True when every imaginary part is at most tol in magnitude.
    bool is_real(double tol = 1e-12) const noexcept;

    /// Real parts as a new function with zero imaginary parts.
    GridFunction real_part() const;
    GridFunction conj() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(cplx scale);

private:
    GridDomain domain_;
    std::vector<cplx> samples_;
};

GridFunction operator+(GridFunction f, const GridFunction& g);
GridFunction operator-(GridFunction f, const GridFunction& g);
GridFunction operator-(GridFunction f);
GridFunction operator*(GridFunction f, cplx scale);
GridFunction operator*(cplx scale, GridFunction f);

/// Fourier coefficients on the symmetric window [-M/2, M/2) per axis.
///
/// Storage is shifted so that position k + M/2 holds frequency k; in 2D the
/// layout is row-major over (k + M/2, l + M/2) with k along Axis::first.
class Spectrum {
public:
    explicit Spectrum(GridDomain domain);
    Spectrum(GridDomain domain, std::vector<cplx> coeffs);

    const GridDomain& domain() const noexcept { return domain_; }
    std::span<const cplx> coeffs() const noexcept { return coeffs_; }
    std::span<cplx> coeffs() noexcept { return coeffs_; }

    /// Lowest and one-past-highest frequency of the window.
    long min_frequency() const noexcept { return -static_cast<long>(domain_.size() / 2); }
    long end_frequency() const noexcept { return static_cast<long>(domain_.size() / 2); }

    cplx coeff(long k) const { return coeffs_[position(k)]; }
    cplx coeff(long k, long l) const { return coeffs_[position(k) * domain_.size() + position(l)]; }
    cplx& coeff(long k) { return coeffs_[position(k)]; }
    cplx& coeff(long k, long l) { return coeffs_[position(k) * domain_.size() + position(l)]; }

    /// Frequency held at a storage position along one axis.
    long frequency(std::size_t position) const noexcept {
        return static_cast<long>(position) + min_frequency();
    }

private:
    std::size_t position(long k) const;

    GridDomain domain_;
    std::vector<cplx> coeffs_;
};

/// coeffs(k) = (1/M) sum_j f(x_j) e^{-i k x_j} per axis.
Spectrum to_spectrum(const GridFunction& f);

/// f(x_j) = sum_k coeffs(k) e^{i k x_j}; exact inverse of to_spectrum.
GridFunction from_spectrum(const Spectrum& s);

// Pointwise arithmetic. Binary operations require equal domains.

GridFunction multiply(const GridFunction& f, const GridFunction& g);
/// Throws SingularityError naming the first zero sample of g.
GridFunction divide(const GridFunction& f, const GridFunction& g);
GridFunction abs(const GridFunction& f);
/// Unimodular phase f/|f| with the convention 0/0 = 0.
GridFunction sgn(const GridFunction& f);
/// min{lambda, |f|} as a real-valued function.
GridFunction min_with(const GridFunction& f, double lambda);
/// Applies a scalar map to every sample.
GridFunction map(const GridFunction& f, const std::function<cplx(cplx)>& op);

enum class PointwiseOp { add, sub, mul, div, abs, min_with_scalar, sgn };

/// Dispatching form of the pointwise operations. Unary operations ignore g;
/// min_with_scalar reads its level from scalar.
GridFunction pointwise(const GridFunction& f, const GridFunction& g, PointwiseOp op, double scalar = 0.0);

}  // namespace kclose
