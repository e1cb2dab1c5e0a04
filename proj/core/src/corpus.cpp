#include <kclose/corpus.hpp>

#include <kclose/metrics.hpp>

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <numbers>

namespace kclose {

namespace {

constexpr int kDegree = 8;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::array<double, 3> kTwoScaleTargets = {0.01, 1.0, 100.0};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Fixed-width conversions so that corpora agree across standard libraries.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

cplx gaussian(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform(rng);
    const double u2 = uniform(rng);
    return std::polar(std::sqrt(-std::log(u1)), kTwoPi * u2);
}

void require_window(const GridDomain& d, long highest) {
    if (highest >= static_cast<long>(d.size() / 2))
        throw DomainError("grid M = " + std::to_string(d.size()) + " too small for corpus frequency " +
                          std::to_string(highest));
}

struct Coefficient {
    long k;
    long l;
    cplx c;
};

GridFunction from_coefficients(const GridDomain& d, const std::vector<Coefficient>& cs) {
    Spectrum sp(d);
    double energy = 0.0;
    for (const auto& c : cs) energy += std::norm(c.c);
    const double scale = energy > 0.0 ? 1.0 / std::sqrt(energy) : 0.0;
    for (const auto& c : cs) {
        require_window(d, std::max(std::abs(c.k), std::abs(c.l)));
        if (d.dimension() == 1)
            sp.coeff(c.k) += c.c * scale;
        else
            sp.coeff(c.k, c.l) += c.c * scale;
    }
    return from_spectrum(sp);
}

double weight(long k) { return 1.0 / (1.0 + static_cast<double>(std::abs(k))); }

// Random polynomial with frequencies k in [k0, k0 + K] (1D) or the given box (2D),
// normalized to unit L2 norm.
GridFunction random_polynomial_1d(const GridDomain& d, long k0, std::mt19937_64& rng) {
    std::vector<Coefficient> cs;
    for (long j = 0; j <= kDegree; ++j) cs.push_back({k0 + j, 0, gaussian(rng) * weight(j)});
    return from_coefficients(d, cs);
}

GridFunction random_polynomial_2d(const GridDomain& d, long k_lo, long k_hi, long l_lo, long l_hi, std::mt19937_64& rng) {
    std::vector<Coefficient> cs;
    for (long k = k_lo; k <= k_hi; ++k)
        for (long l = l_lo; l <= l_hi; ++l) cs.push_back({k, l, gaussian(rng) * weight(k) * weight(l)});
    return from_coefficients(d, cs);
}

// Fejer kernel of order n centered at t, unit mean, continuum-defined.
GridFunction fejer_kernel(const GridDomain& d, int n, double t1, double t2) {
    const int order = std::min(n, static_cast<int>(d.size() / 2) - 1);
    Spectrum sp(d);
    auto weight_at = [order](long k) { return 1.0 - static_cast<double>(std::abs(k)) / (order + 1.0); };
    for (long k = -order; k <= order; ++k) {
        const cplx e1 = std::polar(weight_at(k), -static_cast<double>(k) * t1);
        if (d.dimension() == 1) {
            sp.coeff(k) = e1;
            continue;
        }
        for (long l = -order; l <= order; ++l) sp.coeff(k, l) = e1 * std::polar(weight_at(l), -static_cast<double>(l) * t2);
    }
    return from_spectrum(sp);
}

struct SpikeDraw {
    int order;
    double t1;
    double t2;
};

SpikeDraw draw_spike(std::mt19937_64& rng) {
    const int order = 8 + static_cast<int>(std::floor(57.0 * uniform(rng)));
    const double t1 = kTwoPi * uniform(rng);
    const double t2 = kTwoPi * uniform(rng);
    return {order, t1, t2};
}

struct SetDraw {
    double t1, rho1, t2, rho2;
};

SetDraw draw_set(std::mt19937_64& rng, int dimension) {
    SetDraw s{};
    s.t1 = kTwoPi * uniform(rng);
    s.t2 = kTwoPi * uniform(rng);
    if (dimension == 1) {
        s.rho1 = 0.03 + 0.09 * uniform(rng);
        s.rho2 = 1.0;
    } else {
        s.rho1 = 0.15 + 0.2 * uniform(rng);
        s.rho2 = 0.15 + 0.2 * uniform(rng);
    }
    return s;
}

bool in_arc(double x, double t, double rho) {
    const double offset = std::fmod(x - t + 2.0 * kTwoPi, kTwoPi);
    return offset < kTwoPi * rho;
}

GridFunction indicator(const GridDomain& d, const SetDraw& s) {
    if (d.dimension() == 1)
        return GridFunction::sample(d, [&](double x) { return cplx(in_arc(x, s.t1, s.rho1) ? 1.0 : 0.0); });
    return GridFunction::sample(d, [&](double x1, double x2) {
        return cplx(in_arc(x1, s.t1, s.rho1) && in_arc(x2, s.t2, s.rho2) ? 1.0 : 0.0);
    });
}

GridFunction random_poly_any(const GridDomain& d, std::mt19937_64& rng) {
    if (d.dimension() == 1) return random_polynomial_1d(d, -kDegree / 2, rng);
    return random_polynomial_2d(d, -kDegree / 2, kDegree / 2, -kDegree / 2, kDegree / 2, rng);
}

// Solves for kappa on a log scale so that r/s hits the target, assuming the
// ratio is monotone in kappa (increasing when `increasing`).
double bisect_kappa(const std::function<double(double)>& ratio, double target, bool increasing, double lo, double hi) {
    double a = std::log(lo);
    double b = std::log(hi);
    for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
        const double mid = 0.5 * (a + b);
        const bool below = ratio(std::exp(mid)) < target;
        if (below == increasing)
            a = mid;
        else
            b = mid;
    }
    return std::exp(0.5 * (a + b));
}

}  // namespace

std::string to_string(CorpusLaw law) {
    switch (law) {
        case CorpusLaw::random_polynomial: return "random_polynomial";
        case CorpusLaw::spike: return "spike";
        case CorpusLaw::two_scale: return "two_scale";
    }
    return "unknown";
}

CorpusLaw parse_corpus_law(std::string_view name) {
    if (name == "random_polynomial") return CorpusLaw::random_polynomial;
    if (name == "spike") return CorpusLaw::spike;
    if (name == "two_scale") return CorpusLaw::two_scale;
    throw ConfigError("unknown corpus law '" + std::string(name) + "' (expected random_polynomial, spike or two_scale)");
}

std::mt19937_64 case_engine(std::uint64_t seed, std::uint64_t id) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(id + 0x632be59bd9b4e019ULL)));
}

GridFunction random_member(const Setting& s, Space target, std::mt19937_64& rng) {
    if (target != Space::C_perp && target != Space::D_perp)
        throw ConfigError("random_member: only C_perp and D_perp are sampled");
    const auto& d = s.domain();
    if (s.kind() == SettingKind::bitorus) {
        if (target == Space::C_perp) return random_polynomial_2d(d, -kDegree - 1, -1, -kDegree, kDegree, rng);
        return random_polynomial_2d(d, -kDegree, kDegree, -kDegree - 1, -1, rng);
    }
    if (target == Space::C_perp) return random_polynomial_1d(d, -kDegree - 1, rng);
    const auto& theta = *s.theta();
    if (theta.kind() == InnerFunction::Kind::monomial) return random_polynomial_1d(d, theta.power() + 1, rng);
    // theta * z * (analytic polynomial)
    return multiply(s.theta_samples(), random_polynomial_1d(d, 1, rng));
}

CorpusCase generate_case(const CorpusSpec& spec, const Setting& s, std::size_t id, double p) {
    if (!(p > 1.0) || std::isinf(p)) throw ConfigError("corpus: p must lie in (1, inf)");
    const auto& d = s.domain();
    auto rng = case_engine(spec.seed, id);
    const GridFunction c = random_member(s, Space::C_perp, rng);
    const GridFunction dd = random_member(s, Space::D_perp, rng);
    const GridFunction f = spec.amplitude * (c + dd);
    const SetDraw set = draw_set(rng, d.dimension());
    const SpikeDraw spike = draw_spike(rng);
    const double kappa_draw = 0.5 + 1.5 * uniform(rng);

    nlohmann::json cert;
    cert["law"] = to_string(spec.law);
    cert["seed"] = spec.seed;
    cert["id"] = id;
    cert["p"] = p;
    cert["degree"] = kDegree;
    cert["f"] = "amplitude * (C_perp member + D_perp member)";
    cert["amplitude"] = spec.amplitude;

    CorpusCase out{.id = id, .f = f, .g = GridFunction(d), .h = GridFunction(d)};
    const GridFunction chi = indicator(d, set);
    const GridFunction fchi = multiply(f, chi);
    cert["set"] = {{"t1", set.t1}, {"rho1", set.rho1}, {"t2", set.t2}, {"rho2", set.rho2}};

    switch (spec.law) {
        case CorpusLaw::random_polynomial: {
            out.g = kappa_draw * fchi;
            cert["g"] = "kappa * f * chi_S";
            cert["kappa"] = kappa_draw;
            break;
        }
        case CorpusLaw::spike: {
            const double scale = kappa_draw * spec.amplitude;
            out.g = scale * fejer_kernel(d, spike.order, spike.t1, spike.t2);
            cert["g"] = "kappa * amplitude * Fejer kernel";
            cert["kappa"] = kappa_draw;
            cert["spike"] = {{"order", spike.order}, {"t1", spike.t1}, {"t2", spike.t2}};
            break;
        }
        case CorpusLaw::two_scale: {
            const double target = kTwoScaleTargets[id % kTwoScaleTargets.size()];
            const double q = p / (p - 1.0);
            if (target < 1.0) {
                auto ratio = [&](double k) { return lp_norm(k * fchi, 1.0) / lp_norm(f - k * fchi, q); };
                const double kappa = bisect_kappa(ratio, target, true, 1e-8, 1.0);
                out.g = kappa * fchi;
                cert["g"] = "kappa * f * chi_S";
                cert["kappa"] = kappa;
                cert["achieved_ratio"] = ratio(kappa);
            } else {
                auto ratio = [&](double k) { return lp_norm(f - k * fchi, 1.0) / lp_norm(k * fchi, q); };
                const double kappa = bisect_kappa(ratio, target, false, 1e-8, 1e8);
                out.g = f - kappa * fchi;
                cert["g"] = "f - kappa * f * chi_S";
                cert["kappa"] = kappa;
                cert["achieved_ratio"] = ratio(kappa);
            }
            cert["target_ratio"] = target;
            break;
        }
    }
    out.h = f - out.g;
    out.certificate = cert.dump();
    return out;
}

std::vector<CorpusCase> generate_corpus(const CorpusSpec& spec, const Setting& s, double p) {
    if (spec.count == 0) throw ConfigError("corpus count must be >= 1");
    std::vector<CorpusCase> cases;
    cases.reserve(spec.count);
    for (std::size_t id = 0; id < spec.count; ++id) cases.push_back(generate_case(spec, s, id, p));
    return cases;
}

GridFunction generate_phi(const CorpusSpec& spec, const GridDomain& d, std::size_t id) {
    auto rng = case_engine(spec.seed, id);
    const GridFunction poly = random_poly_any(d, rng);
    const SpikeDraw spike = draw_spike(rng);
    const double height = spec.amplitude * (1.0 + 3.0 * uniform(rng));
    const double norm = d.dimension() == 1 ? spike.order + 1.0 : (spike.order + 1.0) * (spike.order + 1.0);

    switch (spec.law) {
        case CorpusLaw::random_polynomial:
            return map(poly, [height](cplx z) { return cplx(std::max(1.0, height * std::abs(z))); });
        case CorpusLaw::spike: {
            const GridFunction k = fejer_kernel(d, spike.order, spike.t1, spike.t2);
            return map(k, [height, norm](cplx z) { return cplx(1.0 + height * std::max(0.0, z.real()) / norm); });
        }
        case CorpusLaw::two_scale: {
            const GridFunction k = fejer_kernel(d, spike.order, spike.t1, spike.t2);
            std::vector<cplx> v(d.point_count());
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] = std::max(1.0, height * std::abs(poly[i])) + 10.0 * height * std::max(0.0, k[i].real()) / norm;
            return GridFunction(d, std::move(v));
        }
    }
    throw ConfigError("unknown corpus law");
}

GridFunction generate_split_input(const CorpusSpec& spec, const Setting& s, std::size_t id) {
    auto rng = case_engine(spec.seed, id);
    const GridFunction member = random_member(s, Space::C_perp, rng);
    const SpikeDraw spike = draw_spike(rng);
    const auto& d = s.domain();
    switch (spec.law) {
        case CorpusLaw::random_polynomial: return spec.amplitude * member;
        case CorpusLaw::spike: return spec.amplitude * project_P(fejer_kernel(d, spike.order, spike.t1, spike.t2), s);
        case CorpusLaw::two_scale:
            return spec.amplitude * (member + 10.0 * project_P(fejer_kernel(d, spike.order, spike.t1, spike.t2), s));
    }
    throw ConfigError("unknown corpus law");
}

GridFunction generate_weak_input(const CorpusSpec& spec, const GridDomain& d, std::size_t id) {
    auto rng = case_engine(spec.seed, id);
    const GridFunction poly = random_poly_any(d, rng);
    const SpikeDraw spike = draw_spike(rng);
    switch (spec.law) {
        case CorpusLaw::random_polynomial: return spec.amplitude * poly;
        case CorpusLaw::spike: return spec.amplitude * fejer_kernel(d, spike.order, spike.t1, spike.t2);
        case CorpusLaw::two_scale: return spec.amplitude * (poly + 5.0 * fejer_kernel(d, spike.order, spike.t1, spike.t2));
    }
    throw ConfigError("unknown corpus law");
}

}  // namespace kclose
