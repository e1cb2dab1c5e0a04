#include <kclose/splitter.hpp>

#include <kclose/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace kclose {

namespace {

constexpr double kInputMembershipTolerance = 1e-8;

}  // namespace

Truncation truncate(const GridFunction& f, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("truncation level must be positive");
    auto alpha = map(f, [lambda](cplx z) {
        const double r = std::abs(z);
        return r <= lambda ? z : z * (lambda / r);
    });
    auto beta = f - alpha;
    return {std::move(alpha), std::move(beta)};
}

double exceed_measure(const std::vector<std::uint8_t>& exceed, const GridDomain& domain) {
    return static_cast<double>(std::count(exceed.begin(), exceed.end(), std::uint8_t{1})) * domain.measure_weight();
}

SplitResult split(const GridFunction& f, double lambda, const Setting& s, Space target, const CutoffParams& params) {
    if (!(lambda > 0.0)) throw DomainError("split level lambda must be positive");
    if (!(params.gamma > params.p)) throw PreconditionError("split needs gamma > p");
    const double input_residual = membership_residual(f, target, s);
    if (input_residual > kInputMembershipTolerance)
        throw PreconditionError("split: input is not in " + to_string(target) + " (residual " +
                                std::to_string(input_residual) + ")");

    const auto& d = f.domain();
    const double p = params.p;
    const double q = p / (p - 1.0);
    const double gamma = params.gamma;

    SplitResult out{.a = GridFunction(d), .b = GridFunction(d), .phi = GridFunction(d),
                    .cutoff = {.phi_cut = GridFunction(d), .witness = GridFunction(d)}};
    out.lambda = lambda;
    out.phi = map(f, [lambda, gamma](cplx z) {
        return cplx(std::max(1.0, std::pow(std::abs(z) / lambda, 1.0 / gamma)), 0.0);
    });

    CutoffParams cp = params;
    const AlgebraSide algebra = s.module_algebra(target);
    cp.side = algebra.side;
    cp.axis = algebra.axis;
    out.cutoff = build_cutoff(out.phi, cp);

    auto product = apply_cutoff(out.cutoff, f);
    out.a = std::move(product.value);
    out.refinement = product.refinement;
    out.b = f - out.a;

    out.exceed.resize(d.point_count());
    for (std::size_t i = 0; i < f.size(); ++i) out.exceed[i] = std::abs(f[i]) > lambda ? 1 : 0;

    out.membership_residual_a = membership_residual(out.a, target, s);
    out.weak_norm = weak_l1(f);

    const double w = out.weak_norm;
    if (w > 0.0) {
        double outside = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!out.exceed[i]) outside += std::abs(out.b[i]);
        outside *= d.measure_weight();

        out.measured.u1 = lp_norm(out.a, q) / (std::pow(lambda, 1.0 / p) * std::pow(w, 1.0 / q));
        out.measured.u2 = outside / w;
        out.measured.u3 = exceed_measure(out.exceed, d) * lambda / w;
        out.measured.u4 = weak_l1(out.b) / w;
        const GridFunction one = GridFunction::constant(d, 1.0);
        out.phi_ratio = lp_norm(out.phi - one, p) / (std::pow(w, 1.0 / p) * std::pow(lambda, -1.0 / p));
    }
    return out;
}

}  // namespace kclose
