#pragma once

#include <kclose/grid.hpp>
#include <kclose/operators.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kclose {

/// Inner function on the disk: either z^k or a finite Blaschke product
/// c * prod (z - a_i) / (1 - conj(a_i) z) with |a_i| < 1 and |c| = 1.
class InnerFunction {
public:
    enum class Kind { monomial, blaschke };

    static InnerFunction monomial(int power);
    static InnerFunction blaschke(std::vector<cplx> zeros, cplx unimodular = 1.0);

    Kind kind() const noexcept { return kind_; }
    int power() const noexcept { return power_; }
    const std::vector<cplx>& zeros() const noexcept { return zeros_; }
    cplx unimodular() const noexcept { return unimodular_; }
    int degree() const noexcept { return kind_ == Kind::monomial ? power_ : static_cast<int>(zeros_.size()); }

    cplx evaluate(cplx z) const;

    /// Boundary values on a 1D grid. Monomials use reduced integer angles so
    /// the samples are e^{ik theta_j} to rounding.
    GridFunction sample(const GridDomain& domain) const;

    /// "monomial:k" or "blaschke:a1,a2,..." (the form accepted by parse).
    std::string describe() const;

    /// Parses the CLI form: monomial:k | blaschke:a1,a2,... where each a_i is
    /// a complex literal such as 0.5, 0.3i, -0.2+0.4i.
    static InnerFunction parse(std::string_view spec);

private:
    InnerFunction() = default;

    Kind kind_ = Kind::monomial;
    int power_ = 0;
    std::vector<cplx> zeros_;
    cplx unimodular_ = 1.0;
};

enum class SettingKind { model_space, bitorus };
enum class Space { C_perp, D_perp, A, B, C, D };

std::string to_string(SettingKind kind);
std::string to_string(Space space);

/// The quadruple (A, B, C, D) plus the projection P for one concrete case.
///
/// model_space (circle): A = H^inf (k >= 0), B = conj(A), C = A, D = theta*B.
///   C^perp: spectrum in k <= -1. D^perp: conj(theta)*f has spectrum in k >= 1.
///   P = riesz_neg. P(D^perp) = {0}.
/// bitorus: A analytic in the first variable, B in the second, C = A, D = B.
///   C^perp: k <= -1 in the first variable. D^perp: l <= -1 in the second.
///   P = riesz_neg along the first axis, which maps D^perp into itself.
class Setting {
public:
    static Setting model_space(GridDomain domain, InnerFunction theta);
    static Setting bitorus(GridDomain domain);

    SettingKind kind() const noexcept { return kind_; }
    const GridDomain& domain() const noexcept { return domain_; }
    const std::optional<InnerFunction>& theta() const noexcept { return theta_; }
    /// Cached boundary samples of theta (model_space only).
    const GridFunction& theta_samples() const;

    SpectralSupport support(Space space) const;

    /// conj(A) for C_perp, conj(B) for D_perp.
    AlgebraSide module_algebra(Space target) const;

    /// Axis the projection P acts along.
    Axis projection_axis() const noexcept { return Axis::first; }

    /// Same setting on another grid size.
    Setting with_size(std::size_t m) const;

    std::string describe() const;

private:
    Setting(SettingKind kind, GridDomain domain, std::optional<InnerFunction> theta);

    SettingKind kind_;
    GridDomain domain_;
    std::optional<InnerFunction> theta_;
    std::optional<GridFunction> theta_samples_;
};

/// Relative spectral mass of g outside the support, ||g_outside||_2 / ||g||_2
/// (0 for g = 0). g is f, or conj(theta)*f for twisted supports.
double support_residual(const GridFunction& f, const SpectralSupport& support, const Setting& s);

/// 0 means f lies in the space.
double membership_residual(const GridFunction& f, Space space, const Setting& s);

/// The setting's projection onto C^{perp,q}.
GridFunction project_P(const GridFunction& f, const Setting& s);

/// Product of an algebra element Phi with f in the target annihilator.
///
/// Computed as the exact product of the band-limited interpolants on a doubled
/// grid, truncated back to the frequency window, so no aliasing enters.
/// Throws ModuleStructureError when Phi or f are not members (residual > 1e-8;
/// the error carries both input residuals) and when the product residual
/// exceeds 10 * max(input residuals) + 1e-10.
GridFunction multiply_into_module(const GridFunction& phi, const GridFunction& f, Space target, const Setting& s);

/// {"setting": "model_space", "M": 1024, "theta": {"kind": "monomial", "k": 2}}
/// or {"setting": "bitorus", "M": 256}. Blaschke theta:
/// {"kind": "blaschke", "zeros": [[re, im], ...], "constant": [re, im]}.
Setting setting_from_json(std::string_view text);
std::string setting_to_json(const Setting& s);

/// Builds a setting from CLI-style descriptors.
Setting make_setting(std::string_view name, std::size_t m, std::string_view theta_spec = "monomial:2");

}  // namespace kclose
