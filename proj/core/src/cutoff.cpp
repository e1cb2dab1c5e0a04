#include <kclose/cutoff.hpp>

#include <kclose/metrics.hpp>

#include "fft.hpp"
#include "lines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kclose {

namespace {

constexpr double kPhiTolerance = 1e-12;
constexpr double kAdaptiveTarget = 0.01;
constexpr double kRefinedLeakageTarget = 1e-14;
constexpr std::size_t kMaxRefinement = 64;

cplx cutoff_value(cplx w, int gamma) {
    const cplx base = 1.0 / (1.0 + w);
    cplx v = base;
    for (int i = 1; i < gamma; ++i) v *= base;
    return v;
}

// Relative mass of the refined lines on the forbidden half-line.
double refined_leakage(std::vector<cplx> fine, std::size_t fine_m, std::size_t lines, Side side) {
    detail::fft_lines(fine.data(), fine_m, lines, 1, fine_m, detail::FftSign::forward);
    double outside = 0.0;
    double total = 0.0;
    for (std::size_t r = 0; r < lines; ++r) {
        for (std::size_t i = 0; i < fine_m; ++i) {
            const long k = detail::fft_frequency(i, fine_m);
            const double e = std::norm(fine[r * fine_m + i]);
            total += e;
            if (side == Side::analytic ? k < 0 : k > 0) outside += e;
        }
    }
    return total == 0.0 ? 0.0 : std::sqrt(outside / total);
}

}  // namespace

int admissible_gamma(double p) {
    if (!(p > 1.0) || std::isinf(p)) throw DomainError("exponent p must lie in (1, inf)");
    return std::max(2, static_cast<int>(std::floor(p)) + 1);
}

GridFunction cutoff_from_witness(const GridFunction& w, int gamma) {
    return map(w, [gamma](cplx z) { return cutoff_value(z, gamma); });
}

CutoffResult build_cutoff(const GridFunction& phi, const CutoffParams& params) {
    if (params.gamma < 2) throw DomainError("cut-off exponent gamma must be >= 2");
    if (!(params.p > 1.0)) throw DomainError("cut-off needs p in (1, inf)");
    const auto& d = phi.domain();
    d.check_axis(params.axis);
    if (!phi.is_real(kPhiTolerance)) throw PreconditionError("build_cutoff: phi must be real-valued");
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (phi[i].real() < 1.0 - kPhiTolerance)
            throw PreconditionError("build_cutoff: phi < 1 at grid index " + std::to_string(i));
    }

    const GridFunction u = map(phi, [](cplx z) { return cplx(std::max(0.0, z.real() - 1.0), 0.0); });
    const double u_norm = lp_norm(u, params.p);
    const int order_cap = static_cast<int>(d.size() / 2) - 1;

    auto witness_error = [&](const GridFunction& w) {
        if (u_norm == 0.0) return 0.0;
        return lp_norm(w.real_part() - u, params.p) / u_norm;
    };

    CutoffResult result{.phi_cut = GridFunction(d), .witness = GridFunction(d)};
    result.gamma = params.gamma;
    result.algebra = {params.side, params.axis};

    if (params.smoothing_degree) {
        const int n = *params.smoothing_degree;
        if (n < 1 || n > order_cap)
            throw DomainError("smoothing degree " + std::to_string(n) + " outside [1, " + std::to_string(order_cap) + "]");
        result.witness = alpha_witness(u, n, params.side, params.axis);
        result.degree = n;
        result.witness_error = witness_error(result.witness);
    } else {
        const int n_max = std::clamp(static_cast<int>(d.size() / 8), 1, order_cap);
        int n = std::min(16, n_max);
        while (true) {
            result.witness = alpha_witness(u, n, params.side, params.axis);
            result.degree = n;
            result.witness_error = witness_error(result.witness);
            if (result.witness_error <= kAdaptiveTarget) break;
            if (n >= n_max) {
                result.converged = false;
                result.warning = "adaptive Fejer order reached " + std::to_string(n) +
                                 " with relative witness error " + std::to_string(result.witness_error);
                break;
            }
            n = std::min(2 * n, n_max);
        }
    }

    result.phi_cut = cutoff_from_witness(result.witness, params.gamma);

    double slack = kInfinity;
    double max_mod = 0.0;
    for (std::size_t i = 0; i < d.point_count(); ++i) {
        const double bound = std::pow(1.0 + result.witness[i].real(), -params.gamma);
        const double mod = std::abs(result.phi_cut[i]);
        slack = std::min(slack, bound - mod);
        max_mod = std::max(max_mod, mod);
    }
    result.pointwise_slack = slack;
    result.max_modulus = max_mod;

    const GridFunction one = GridFunction::constant(d, 1.0);
    const double num = lp_norm(one - result.phi_cut, params.p);
    const double den = lp_norm(one - phi, params.p);
    result.o1_ratio = den == 0.0 ? (num == 0.0 ? 0.0 : kInfinity) : num / den;
    result.algebra_residual = spectral_residual(result.phi_cut, algebra_support(result.algebra));
    return result;
}

CutoffProduct apply_cutoff(const CutoffResult& cutoff, const GridFunction& f) {
    const auto& d = cutoff.witness.domain();
    if (!(f.domain() == d)) throw DomainError("apply_cutoff: function and cut-off live on different grids");
    const Axis axis = cutoff.algebra.axis;
    const std::size_t lines = detail::line_count(d);

    std::size_t factor = 2;
    std::vector<cplx> fine_phi;
    double leakage = 0.0;
    while (true) {
        fine_phi = detail::refine_lines(cutoff.witness, axis, factor);
        for (auto& z : fine_phi) z = cutoff_value(z, cutoff.gamma);
        leakage = refined_leakage(fine_phi, factor * d.size(), lines, cutoff.algebra.side);
        if (leakage <= kRefinedLeakageTarget || factor >= kMaxRefinement) break;
        factor *= 2;
    }

    const auto fine_f = detail::refine_lines(f, axis, factor);
    for (std::size_t i = 0; i < fine_phi.size(); ++i) fine_phi[i] *= fine_f[i];
    return {detail::restrict_lines(std::move(fine_phi), d, axis, factor), factor, leakage};
}

}  // namespace kclose
