#pragma once

#include <kclose/grid.hpp>

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kclose {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ((1/M^d) sum |f|^p)^(1/p); p = kInfinity gives max |f|. Throws DomainError for p < 1.
double lp_norm(const GridFunction& f, double p);

/// sup_t t * mu{|f| > t}, computed exactly as max_k |f|_(k) * k / M^d over the
/// moduli sorted in decreasing order. The supremum is approached just below each jump.
double weak_l1(const GridFunction& f);

/// Step function sigma(t) = mu{|f| > t}, determined by the sorted moduli.
class DistributionFunction {
public:
    explicit DistributionFunction(const GridFunction& f);

    /// Distinct moduli in increasing order.
    const std::vector<double>& thresholds() const noexcept { return thresholds_; }
    /// masses()[i] = mu{|f| >= thresholds()[i]}, i.e. sigma on [thresholds[i-1], thresholds[i]).
    const std::vector<double>& masses() const noexcept { return masses_; }

    /// mu{|f| > t}.
    double operator()(double t) const;

    /// q * integral_0^inf t^(q-1) sigma(t) dt, integrated exactly over the steps.
    double power_integral(double q) const;

private:
    std::vector<double> thresholds_;
    std::vector<double> masses_;
};

/// numerator / denominator of one corpus case; 0/0 cases are skipped.
struct Ratio {
    double numerator = 0.0;
    double denominator = 0.0;
};

using Operator = std::function<GridFunction(const GridFunction&)>;
using RatioFunctional = std::function<Ratio(const GridFunction& input, const GridFunction& output)>;

struct ConstantEstimate {
    double sup_ratio = 0.0;
    std::optional<std::size_t> argmax_case;
    std::vector<double> ratios;           // per case, NaN for skipped cases
    std::vector<std::size_t> skipped;     // cases with ratio 0/0
};

/// Empirical operator constant: sup over the corpus of functional(f, op(f)).
ConstantEstimate estimate_constant(const Operator& op, std::span<const GridFunction> corpus,
                                   const RatioFunctional& functional);

/// ||Tf||_q / ||f||_q.
RatioFunctional lq_ratio(double q);

/// sup_lambda lambda * mu{|Tf| > lambda} / ||f||_1, the weak type (1,1) ratio.
/// The supremum is taken over the jump points of the distribution function.
RatioFunctional weak_type_ratio();

}  // namespace kclose
