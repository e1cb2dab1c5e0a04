#include <kclose/decompose.hpp>

#include <kclose/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace kclose {

namespace {

double max_abs(const GridFunction& f) {
    double m = 0.0;
    for (cplx z : f.samples()) m = std::max(m, std::abs(z));
    return m;
}

double identity_residual(const GridFunction& g1, const GridFunction& h1, const GridFunction& f) {
    const double scale = max_abs(f);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(g1[i] + h1[i] - f[i]));
    return scale == 0.0 ? worst : worst / scale;
}

DecompositionReport degenerate_report(const DualDecompositionInput& in, double r, double s, bool r_zero) {
    const auto& d = in.f.domain();
    DecompositionReport rep{.g1 = r_zero ? GridFunction(d) : in.f, .h1 = r_zero ? in.f : GridFunction(d)};
    rep.p = in.p;
    rep.r = r;
    rep.s = s;
    rep.degenerate = r_zero ? "r=0" : "s=0";
    rep.Cg = r == 0.0 ? 0.0 : lp_norm(rep.g1, 1.0) / r;
    rep.Ch = s == 0.0 ? 0.0 : lp_norm(rep.h1, in.q()) / s;
    rep.residuals.identity = identity_residual(rep.g1, rep.h1, in.f);
    return rep;
}

}  // namespace

double membership_tolerance(const Setting& s) {
    if (s.theta() && s.theta()->kind() == InnerFunction::Kind::blaschke) return 1e-5;
    return 1e-8;
}

DecompositionReport decompose(const DualDecompositionInput& in, const CutoffParams& params, bool keep_intermediates) {
    const auto& d = in.f.domain();
    if (!(in.g.domain() == d) || !(in.h.domain() == d) || !(in.setting.domain() == d))
        throw DomainError("decompose: inputs live on different grids");
    if (!(in.p > 1.0) || std::isinf(in.p)) throw DomainError("decompose: p must lie in (1, inf)");
    if (!(params.gamma > in.p)) throw PreconditionError("decompose: gamma must exceed p");

    const double p = in.p;
    const double q = in.q();
    const double r = lp_norm(in.g, 1.0);
    const double s = lp_norm(in.h, q);
    if (r == 0.0) return degenerate_report(in, r, s, true);
    if (s == 0.0) return degenerate_report(in, r, s, false);

    const Setting& setting = in.setting;
    const double lambda = std::pow(r, 1.0 / (1.0 - q)) * std::pow(s, p);

    CutoffParams cp = params;
    cp.p = p;

    // Level split of Pg in C^perp over conj(A).
    auto Pg = project_P(in.g, setting);
    auto sp = split(Pg, lambda, setting, Space::C_perp, cp);
    const GridFunction& a = sp.a;
    const GridFunction& b = sp.b;

    auto Ph = project_P(in.h, setting);
    auto u = in.g + in.h - a - b - Ph;

    const double gamma = cp.gamma;
    std::vector<cplx> phi_samples(d.point_count());
    for (std::size_t i = 0; i < phi_samples.size(); ++i) {
        const double level = (std::abs(in.g[i]) + std::abs(b[i])) / lambda;
        phi_samples[i] = std::max(1.0, std::pow(level, 1.0 / gamma));
    }
    GridFunction phi(d, std::move(phi_samples));

    const AlgebraSide algebra = setting.module_algebra(Space::D_perp);
    cp.side = algebra.side;
    cp.axis = algebra.axis;
    auto cut = build_cutoff(phi, cp);
    auto product = apply_cutoff(cut, u);
    const GridFunction& Phi = cut.phi_cut;
    const GridFunction& Phi_u = product.value;

    auto psi = Phi_u - in.h + Ph + a;
    DecompositionReport rep{.g1 = in.g - psi, .h1 = in.h + psi};
    rep.p = p;
    rep.gamma = cp.gamma;
    rep.r = r;
    rep.s = s;
    rep.lambda = lambda;
    rep.Cg = lp_norm(rep.g1, 1.0) / r;
    rep.Ch = lp_norm(rep.h1, q) / s;
    rep.split_ratios = sp.measured;
    rep.first_cutoff_slack = sp.cutoff.pointwise_slack;
    rep.second_cutoff_slack = cut.pointwise_slack;
    rep.second_cutoff_o1 = cut.o1_ratio;
    rep.first_cutoff_degree = sp.cutoff.degree;
    rep.second_cutoff_degree = cut.degree;
    rep.first_refinement = sp.refinement;
    rep.second_refinement = product.refinement;
    if (!sp.cutoff.converged) rep.warnings.push_back("first cut-off: " + sp.cutoff.warning);
    if (!cut.converged) rep.warnings.push_back("second cut-off: " + cut.warning);

    rep.residuals.identity = identity_residual(rep.g1, rep.h1, in.f);
    rep.residuals.Phi_u = membership_residual(Phi_u, Space::D_perp, setting);
    rep.residuals.Ph = membership_residual(Ph, Space::C_perp, setting);
    rep.residuals.a = sp.membership_residual_a;

    // Estimate pieces, each against the pointwise Phi.
    const GridFunction one = GridFunction::constant(d, 1.0);
    const GridFunction one_minus = one - Phi;
    const double w = d.measure_weight();
    const double mu_e = exceed_measure(sp.exceed, d);
    double b_outside = 0.0;
    double tail_outside = 0.0;
    for (std::size_t i = 0; i < d.point_count(); ++i) {
        if (sp.exceed[i]) continue;
        b_outside += std::abs(b[i]);
        tail_outside += std::pow(lambda, q - 1.0) * (std::abs(in.g[i]) + std::abs(b[i]));
    }
    b_outside *= w;
    tail_outside *= w;

    auto& t = rep.terms;
    t.g_term = lp_norm(multiply(one_minus, in.g), 1.0) / r;
    t.h_term = lp_norm(multiply(one_minus, Ph - in.h), 1.0) / r;
    t.a_term = lp_norm(multiply(one_minus, a), 1.0) / r;
    t.b_term = lp_norm(multiply(Phi, b), 1.0) / r;
    t.b_term_bound = (mu_e * lambda + b_outside) / r;
    t.dealias_defect = lp_norm(multiply(Phi, u) - Phi_u, 1.0) / r;
    t.one_minus_Phi = lp_norm(one_minus, p) * s / r;
    t.h1_tail = lp_norm(multiply(Phi, in.g - b), q) / s;
    t.h1_tail_bound = (lambda * std::pow(mu_e, 1.0 / q) + std::pow(tail_outside, 1.0 / q)) / s;

    if (keep_intermediates) {
        rep.intermediates = DecompositionIntermediates{
            .Pg = std::move(Pg), .a = sp.a, .b = sp.b, .exceed = sp.exceed, .u = std::move(u),
            .phi = std::move(phi), .Phi = cut.phi_cut, .witness = cut.witness, .Phi_u = product.value,
            .Ph = std::move(Ph), .psi = std::move(psi)};
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Verification. Everything below uses its own quadrature and a direct Fourier
// sum; nothing is shared with the decompose path above.

namespace {

double quad_norm(const GridFunction& f, double p) {
    double sum = 0.0;
    for (cplx z : f.samples()) sum += std::pow(std::abs(z), p);
    return std::pow(sum / static_cast<double>(f.size()), 1.0 / p);
}

// Direct separable DFT onto the symmetric window, O(M^(d+1)).
std::vector<cplx> direct_spectrum(const GridFunction& f) {
    const std::size_t m = f.domain().size();
    std::vector<cplx> twiddle(m);
    for (std::size_t j = 0; j < m; ++j)
        twiddle[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m));
    auto freq = [m](std::size_t pos) { return static_cast<long>(pos) - static_cast<long>(m / 2); };
    auto phase = [&](long k, std::size_t j) {
        const long mm = static_cast<long>(m);
        const long idx = ((k * static_cast<long>(j)) % mm + mm) % mm;
        return twiddle[static_cast<std::size_t>(idx)];
    };

    if (f.domain().dimension() == 1) {
        std::vector<cplx> c(m);
        for (std::size_t pk = 0; pk < m; ++pk) {
            cplx acc{};
            for (std::size_t j = 0; j < m; ++j) acc += f[j] * phase(freq(pk), j);
            c[pk] = acc / static_cast<double>(m);
        }
        return c;
    }
    std::vector<cplx> rows(m * m);
    for (std::size_t j1 = 0; j1 < m; ++j1)
        for (std::size_t pl = 0; pl < m; ++pl) {
            cplx acc{};
            for (std::size_t j2 = 0; j2 < m; ++j2) acc += f.at(j1, j2) * phase(freq(pl), j2);
            rows[j1 * m + pl] = acc / static_cast<double>(m);
        }
    std::vector<cplx> c(m * m);
    for (std::size_t pk = 0; pk < m; ++pk)
        for (std::size_t pl = 0; pl < m; ++pl) {
            cplx acc{};
            for (std::size_t j1 = 0; j1 < m; ++j1) acc += rows[j1 * m + pl] * phase(freq(pk), j1);
            c[pk * m + pl] = acc / static_cast<double>(m);
        }
    return c;
}

double direct_residual(const GridFunction& f, Space space, const Setting& s) {
    const auto support = s.support(space);
    GridFunction g = f;
    if (support.twisted) {
        const auto& theta = *s.theta();
        const auto& d = f.domain();
        std::vector<cplx> v(f.size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d.size()));
            v[j] = std::conj(theta.evaluate(z)) * f[j];
        }
        g = GridFunction(d, std::move(v));
    }
    const auto c = direct_spectrum(g);
    const std::size_t m = f.domain().size();
    double outside = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const std::size_t pos = f.domain().dimension() == 1 ? i : (support.axis == Axis::first ? i / m : i % m);
        const long k = static_cast<long>(pos) - static_cast<long>(m / 2);
        const double e = std::norm(c[i]);
        total += e;
        if (!support.admits(k)) outside += e;
    }
    return total == 0.0 ? 0.0 : std::sqrt(outside / total);
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

Verification verify_report(const DecompositionReport& rep, const DualDecompositionInput& in, const VerifyTolerances& tol) {
    Verification v;
    auto fail = [&v](std::string what) {
        v.ok = false;
        v.diagnostics.push_back(std::move(what));
    };
    const auto& d = in.f.domain();
    if (!(rep.g1.domain() == d) || !(rep.h1.domain() == d)) {
        fail("shape: report grid does not match input grid");
        return v;
    }
    const double q = in.q();
    const double member_tol = tol.membership.value_or(membership_tolerance(in.setting));

    // identity
    double scale = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < d.point_count(); ++i) {
        scale = std::max(scale, std::abs(in.f[i]));
        worst = std::max(worst, std::abs(rep.g1[i] + rep.h1[i] - in.f[i]));
    }
    const double identity = scale == 0.0 ? worst : worst / scale;
    if (identity > tol.identity) fail("identity residual: |g1 + h1 - f| / |f| = " + fmt(identity));

    // norms and constants
    const double r = quad_norm(in.g, 1.0);
    const double s = quad_norm(in.h, q);
    if (!close(r, rep.r, tol.consistency)) fail("norm r: report " + fmt(rep.r) + ", recomputed " + fmt(r));
    if (!close(s, rep.s, tol.consistency)) fail("norm s: report " + fmt(rep.s) + ", recomputed " + fmt(s));
    const double cg = r == 0.0 ? 0.0 : quad_norm(rep.g1, 1.0) / r;
    const double ch = s == 0.0 ? 0.0 : quad_norm(rep.h1, q) / s;
    if (!close(cg, rep.Cg, tol.consistency)) fail("constant Cg: report " + fmt(rep.Cg) + ", recomputed " + fmt(cg));
    if (!close(ch, rep.Ch, tol.consistency)) fail("constant Ch: report " + fmt(rep.Ch) + ", recomputed " + fmt(ch));
    if (!std::isfinite(cg) || !std::isfinite(ch)) fail("constants: non-finite Cg or Ch");

    if (r == 0.0 || s == 0.0) {
        const GridFunction& expect_zero = r == 0.0 ? rep.g1 : rep.h1;
        if (quad_norm(expect_zero, 2.0) != 0.0) fail("degenerate branch: expected a trivial decomposition");
        return v;
    }

    const double lambda = std::pow(r, 1.0 / (1.0 - q)) * std::pow(s, in.p);
    if (!close(lambda, rep.lambda, tol.consistency)) fail("lambda: report " + fmt(rep.lambda) + ", recomputed " + fmt(lambda));

    if (!rep.intermediates) {
        fail("intermediates: report carries no intermediates, memberships cannot be checked");
        return v;
    }
    const auto& im = *rep.intermediates;

    // h1 = Phi u + Ph + a
    double h1_gap = 0.0;
    double h1_scale = 0.0;
    for (std::size_t i = 0; i < d.point_count(); ++i) {
        h1_scale = std::max(h1_scale, std::abs(rep.h1[i]));
        h1_gap = std::max(h1_gap, std::abs(rep.h1[i] - (im.Phi_u[i] + im.Ph[i] + im.a[i])));
    }
    if (h1_gap > tol.consistency * std::max(1.0, h1_scale))
        fail("h1 decomposition: |h1 - (Phi u + Ph + a)| = " + fmt(h1_gap));

    // memberships
    const double res_phi_u = direct_residual(im.Phi_u, Space::D_perp, in.setting);
    const double res_ph = direct_residual(im.Ph, Space::C_perp, in.setting);
    const double res_a = direct_residual(im.a, Space::C_perp, in.setting);
    if (res_phi_u > member_tol) fail("membership Phi u in D_perp: residual " + fmt(res_phi_u));
    if (res_ph > member_tol) fail("membership Ph in C_perp: residual " + fmt(res_ph));
    if (res_a > member_tol) fail("membership a in C_perp: residual " + fmt(res_a));

    // pointwise cut-off bounds, 1/(1 + Re w)^gamma form
    double slack = std::numeric_limits<double>::infinity();
    double form_gap = 0.0;
    double max_mod = 0.0;
    for (std::size_t i = 0; i < d.point_count(); ++i) {
        const cplx w = im.witness[i];
        const double mod = std::abs(im.Phi[i]);
        slack = std::min(slack, std::pow(1.0 + w.real(), -rep.gamma) - mod);
        form_gap = std::max(form_gap, std::abs(im.Phi[i] * std::pow(1.0 + w, rep.gamma) - 1.0));
        max_mod = std::max(max_mod, mod);
    }
    if (slack < tol.slack) fail("cut-off bound: min of 1/(1+Re w)^gamma - |Phi| = " + fmt(slack));
    if (max_mod > 1.0 + 1e-12) fail("cut-off bound: max |Phi| = " + fmt(max_mod));
    if (form_gap > 1e-9) fail("cut-off form: Phi (1 + w)^gamma deviates from 1 by " + fmt(form_gap));

    // ||g1||_1 <= sum of the estimate summands (triangle inequality, pointwise Phi)
    double bound = 0.0;
    for (std::size_t i = 0; i < d.point_count(); ++i) {
        const cplx om = 1.0 - im.Phi[i];
        bound += std::abs(om * in.g[i]) + std::abs(om * (im.Ph[i] - in.h[i])) + std::abs(om * im.a[i]) +
                 std::abs(im.Phi[i] * im.b[i]) + std::abs(im.Phi[i] * im.u[i] - im.Phi_u[i]);
    }
    bound /= static_cast<double>(d.point_count());
    const double g1_norm = quad_norm(rep.g1, 1.0);
    if (g1_norm > bound * (1.0 + 1e-9) + 1e-12 * r)
        fail("g1 summand bound: ||g1||_1 = " + fmt(g1_norm) + " exceeds summands " + fmt(bound));
    return v;
}

}  // namespace kclose
