#pragma once

#include <kclose/grid.hpp>
#include <kclose/operators.hpp>

#include <cstddef>
#include <optional>
#include <string>

namespace kclose {

/// Smallest integer strictly greater than p, and at least 2.
int admissible_gamma(double p);

struct CutoffParams {
    int gamma = 2;
    double p = 2.0;
    /// Fejer order n; empty means adaptive (16, 32, ... up to M/8).
    std::optional<int> smoothing_degree;
    Side side = Side::analytic;
    Axis axis = Axis::first;
};

/// Phi = (1 + w)^(-gamma) for the Fejer witness w of u = phi - 1.
struct CutoffResult {
    GridFunction phi_cut;          ///< Phi, pointwise on the grid
    GridFunction witness;          ///< w; Re w = Fejer mean of phi - 1
    int gamma = 2;
    AlgebraSide algebra;
    int degree = 0;                ///< Fejer order actually used

    double o1_ratio = 0.0;         ///< ||1 - Phi||_p / ||1 - phi||_p (0/0 reported as 0)
    double pointwise_slack = 0.0;  ///< min over grid of 1/(1 + Re w)^gamma - |Phi|
    double algebra_residual = 0.0; ///< spectral leakage of Phi off its half-line
    double max_modulus = 0.0;      ///< max |Phi|
    double witness_error = 0.0;    ///< ||Re w - u||_p / ||u||_p (0 when u = 0)
    bool converged = true;         ///< adaptive target met
    std::string warning;           ///< set when the adaptive order was exhausted
};

/// Builds the analytic cut-off of phi >= 1 in the algebra (params.side, params.axis).
///
/// Guarantees |Phi| <= 1 and |Phi| <= 1/(1 + Re w)^gamma at every grid point.
/// Throws PreconditionError when phi is not real or dips below 1 - 1e-12,
/// DomainError for gamma < 2, p <= 1, or an explicit order outside [1, M/2 - 1].
CutoffResult build_cutoff(const GridFunction& phi, const CutoffParams& params);

struct CutoffProduct {
    GridFunction value;
    std::size_t refinement = 1;    ///< oversampling factor used for Phi
    double refined_leakage = 0.0;  ///< leakage of Phi on the refined grid
};

/// Phi * f without aliasing: Phi is re-evaluated from its witness on a grid
/// refined along the cut-off axis until its spectral leakage there drops below
/// 1e-14 (factor at most 64), multiplied with the band-limited interpolant of f,
/// and truncated back to the [-M/2, M/2) window.
CutoffProduct apply_cutoff(const CutoffResult& cutoff, const GridFunction& f);

/// (1 + w)^(-gamma) evaluated pointwise.
GridFunction cutoff_from_witness(const GridFunction& w, int gamma);

}  // namespace kclose
