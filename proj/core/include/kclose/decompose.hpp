#pragma once

#include <kclose/cutoff.hpp>
#include <kclose/grid.hpp>
#include <kclose/settings.hpp>
#include <kclose/splitter.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kclose {

/// f = g + h with f in C^{perp,q} + D^{perp,q}, g in L^1, h in L^q.
/// Membership of f is certified by whoever built it (see corpus.hpp).
struct DualDecompositionInput {
    GridFunction f;
    GridFunction g;
    GridFunction h;
    Setting setting;
    double p = 2.0;

    double q() const noexcept { return p / (p - 1.0); }
};

struct DecompositionIntermediates {
    GridFunction Pg;
    GridFunction a;
    GridFunction b;
    std::vector<std::uint8_t> exceed;  ///< E from the split of Pg
    GridFunction u;
    GridFunction phi;
    GridFunction Phi;
    GridFunction witness;              ///< w with Phi = (1 + w)^(-gamma)
    GridFunction Phi_u;                ///< dealiased product Phi * u
    GridFunction Ph;
    GridFunction psi;
};

/// Individually recomputed pieces of the g1 and h1 estimates, normalized by r or s.
struct EstimateTerms {
    double g_term = 0.0;          ///< ||(1 - Phi) g||_1 / r
    double h_term = 0.0;          ///< ||(1 - Phi)(Ph - h)||_1 / r
    double a_term = 0.0;          ///< ||(1 - Phi) a||_1 / r
    double b_term = 0.0;          ///< ||Phi b||_1 / r
    double b_term_bound = 0.0;    ///< (mu(E) lambda + integral over X\E of |b|) / r
    double dealias_defect = 0.0;  ///< ||Phi.u - Phi_u||_1 / r, pointwise vs dealiased product
    double one_minus_Phi = 0.0;   ///< ||1 - Phi||_p s / r
    double h1_tail = 0.0;         ///< ||Phi (g - b)||_q / s
    double h1_tail_bound = 0.0;   ///< (lambda mu(E)^(1/q) + (integral over X\E of lambda^(q-1)(|g|+|b|))^(1/q)) / s
};

struct DecompositionResiduals {
    double identity = 0.0;     ///< max|g1 + h1 - f| / max|f|
    double Phi_u = 0.0;        ///< D_perp residual of Phi u
    double Ph = 0.0;           ///< C_perp residual of Ph
    double a = 0.0;            ///< C_perp residual of a
};

struct DecompositionReport {
    GridFunction g1;
    GridFunction h1;
    double p = 2.0;
    int gamma = 2;
    double r = 0.0;            ///< ||g||_1
    double s = 0.0;            ///< ||h||_q
    double lambda = 0.0;       ///< r^(1/(1-q)) s^p
    double Cg = 0.0;           ///< ||g1||_1 / r
    double Ch = 0.0;           ///< ||h1||_q / s
    std::string degenerate;    ///< "", "r=0" or "s=0"

    DecompositionResiduals residuals;
    EstimateTerms terms;
    SplitRatios split_ratios;
    double first_cutoff_slack = 0.0;
    double second_cutoff_slack = 0.0;
    double second_cutoff_o1 = 0.0;
    int first_cutoff_degree = 0;
    int second_cutoff_degree = 0;
    std::size_t first_refinement = 1;
    std::size_t second_refinement = 1;
    std::vector<std::string> warnings;

    std::optional<DecompositionIntermediates> intermediates;
};

/// Runs the dual-side pipeline for f = g + h:
///   Pg = P g; (a, b, E) = split(Pg, lambda, C_perp) with lambda = r^(1/(1-q)) s^p;
///   u = g + h - a - b - Ph; phi = max{1, ((|g| + |b|)/lambda)^(1/gamma)};
///   Phi = cut-off of phi in conj(B); psi = Phi u - h + Ph + a;
///   g1 = g - psi, h1 = h + psi.
/// r = 0 returns (0, f) and s = 0 returns (f, 0), tagged as degenerate.
/// params.gamma must exceed input.p; params.p is replaced by input.p.
DecompositionReport decompose(const DualDecompositionInput& input, const CutoffParams& params,
                              bool keep_intermediates = true);

struct VerifyTolerances {
    double identity = 1e-9;
    /// Membership tolerance; empty picks 1e-8 for monomial theta and bitorus,
    /// 1e-5 for Blaschke theta.
    std::optional<double> membership;
    double slack = -1e-12;
    double consistency = 1e-9;
};

struct Verification {
    bool ok = true;
    std::vector<std::string> diagnostics;  ///< one entry per violated clause
};

/// Re-derives every claim of a report without calling into decompose: the
/// identity, norms and constants, memberships of Phi u, Ph and a (by direct
/// Fourier summation), h1 = Phi u + Ph + a, the pointwise cut-off bounds, and
/// the summand bound on ||g1||_1.
Verification verify_report(const DecompositionReport& report, const DualDecompositionInput& input,
                           const VerifyTolerances& tol = {});

/// Default membership tolerance for a setting.
double membership_tolerance(const Setting& s);

}  // namespace kclose
