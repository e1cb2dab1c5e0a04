#pragma once

#include <kclose/cutoff.hpp>
#include <kclose/grid.hpp>
#include <kclose/settings.hpp>

#include <cstdint>
#include <vector>

namespace kclose {

struct Truncation {
    GridFunction alpha;  ///< min{lambda, |f|} sgn f
    GridFunction beta;   ///< f - alpha, supported on {|f| > lambda}
};

/// Crude split at level lambda. Throws DomainError for lambda <= 0.
Truncation truncate(const GridFunction& f, double lambda);

/// Measured constants of the split, each normalized by the weak-L1 norm W of f.
struct SplitRatios {
    double u1 = 0.0;  ///< ||a||_q / (lambda^(1/p) W^(1/q))
    double u2 = 0.0;  ///< integral over X\E of |b|, over W
    double u3 = 0.0;  ///< mu(E) lambda / W
    double u4 = 0.0;  ///< sup_t t mu{|b| > t} / W
};

struct SplitResult {
    GridFunction a;
    GridFunction b;
    std::vector<std::uint8_t> exceed;  ///< E = {|f| > lambda}, one flag per grid point
    double lambda = 0.0;
    double weak_norm = 0.0;            ///< ||f||_{1,inf}
    SplitRatios measured;
    double phi_ratio = 0.0;            ///< ||phi - 1||_p / (W^(1/p) lambda^(-1/p))
    double membership_residual_a = 0.0;
    GridFunction phi;
    CutoffResult cutoff;
    std::size_t refinement = 1;        ///< oversampling used for a = Phi f
};

/// mu(E) for a flag vector on a domain.
double exceed_measure(const std::vector<std::uint8_t>& exceed, const GridDomain& domain);

/// Splits f in the target annihilator at level lambda as f = a + b with
/// a = Phi f and b = f - a, Phi the cut-off of phi = max{1, (|f|/lambda)^(1/gamma)}
/// in the algebra over which the target is a module.
///
/// params.gamma must exceed params.p; side and axis are taken from the setting.
/// Throws PreconditionError if f is not in the target (residual > 1e-8) or
/// gamma <= p, DomainError for lambda <= 0.
SplitResult split(const GridFunction& f, double lambda, const Setting& s, Space target, const CutoffParams& params);

}  // namespace kclose
