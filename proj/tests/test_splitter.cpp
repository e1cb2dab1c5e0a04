#include <doctest.h>

#include "oracle.hpp"

#include <kclose/corpus.hpp>
#include <kclose/metrics.hpp>
#include <kclose/splitter.hpp>

using namespace kclose;

namespace {

CutoffParams params_for(double p) {
    CutoffParams c;
    c.p = p;
    c.gamma = admissible_gamma(p);
    return c;
}

Setting model(std::size_t m) { return Setting::model_space(GridDomain(1, m), InnerFunction::monomial(2)); }

double median_modulus(const GridFunction& f) {
    std::vector<double> m;
    for (cplx z : f.samples()) m.push_back(std::abs(z));
    std::sort(m.begin(), m.end());
    return m[m.size() / 2];
}

}  // namespace

TEST_CASE("truncation examples") {
    GridDomain d(1, 32);
    std::mt19937_64 rng(61);
    const auto small = oracle::random_function(d, rng, 0.1);
    const auto t0 = truncate(small, 10.0);
    CHECK(oracle::max_abs_diff(t0.alpha, small) == 0.0);
    CHECK(oracle::max_abs(t0.beta) == 0.0);

    const auto t1 = truncate(GridFunction::constant(d, 3.0), 1.0);
    CHECK(oracle::max_abs_diff(t1.alpha, GridFunction::constant(d, 1.0)) < 1e-15);
    CHECK(oracle::max_abs_diff(t1.beta, GridFunction::constant(d, 2.0)) < 1e-15);

    CHECK_THROWS_AS(truncate(small, 0.0), DomainError);
    CHECK_THROWS_AS(truncate(small, -1.0), DomainError);
}

TEST_CASE("truncation: support of beta, sup bound and the distribution-function estimate") {
    std::mt19937_64 rng(62);
    GridDomain d(1, 256);
    for (double p : {4.0 / 3.0, 2.0, 4.0}) {
        const double q = p / (p - 1.0);
        for (int rep = 0; rep < 10; ++rep) {
            const auto f = oracle::random_function(d, rng, 1.0 + rep);
            const double lambda = median_modulus(f) * (0.25 + 0.5 * rep);
            const auto t = truncate(f, lambda);
            for (std::size_t i = 0; i < f.size(); ++i) {
                CHECK(std::abs(t.alpha[i]) <= lambda * (1.0 + 1e-15));
                if (std::abs(f[i]) <= lambda) CHECK(t.beta[i] == cplx{});
                CHECK(std::abs(t.alpha[i] + t.beta[i] - f[i]) <= 1e-15 * std::abs(f[i]));
            }
            // ||alpha||_q^q = q int_0^lambda t^(q-1) sigma(t) dt <= (q/(q-1)) lambda^(q-1) W
            const double w = oracle::weak_l1(f);
            DistributionFunction sigma(t.alpha);
            const double direct = std::pow(oracle::lp(t.alpha, q), q);
            CHECK(std::abs(sigma.power_integral(q) - direct) <= 1e-10 * direct);
            const double c = std::pow(p, 1.0 / q);
            CHECK(oracle::lp(t.alpha, q) <= c * std::pow(lambda, 1.0 / p) * std::pow(w, 1.0 / q) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("split without truncation") {
    const auto s = model(256);
    std::mt19937_64 rng(63);
    const auto f = oracle::trig_poly(s.domain(), -8, -1, rng);
    const double lambda = 2.0 * oracle::max_abs(f);
    const auto r = split(f, lambda, s, Space::C_perp, params_for(2.0));
    CHECK(oracle::max_abs_diff(r.cutoff.phi_cut, GridFunction::constant(s.domain(), 1.0)) < 1e-15);
    CHECK(oracle::max_abs_diff(r.a, f) < 1e-13 * oracle::max_abs(f));
    CHECK(oracle::max_abs(r.b) < 1e-13 * oracle::max_abs(f));
    CHECK(exceed_measure(r.exceed, s.domain()) == 0.0);
    CHECK(r.measured.u1 <= 1.0);
    CHECK(r.measured.u2 <= 1.0);
    CHECK(r.measured.u3 <= 1.0);
    CHECK(r.measured.u4 <= 1.0);
}

TEST_CASE("split of 10 zbar at level 1") {
    const auto s = model(128);
    const auto& d = s.domain();
    const auto f = 10.0 * oracle::mode(d, -1);
    const auto r = split(f, 1.0, s, Space::C_perp, params_for(2.0));  // gamma = 3
    CHECK(exceed_measure(r.exceed, d) == 1.0);
    CHECK(r.weak_norm == doctest::Approx(10.0));
    CHECK(exceed_measure(r.exceed, d) <= r.weak_norm / r.lambda);
    // phi = 10^(1/3), w = phi - 1, Phi = 1/phi^3 = 1/10
    const double phi = std::cbrt(10.0);
    CHECK(oracle::max_abs_diff(r.phi, GridFunction::constant(d, phi)) < 1e-14);
    CHECK(oracle::max_abs_diff(r.cutoff.phi_cut, GridFunction::constant(d, 0.1)) < 1e-14);
    CHECK(oracle::max_abs_diff(r.a, oracle::mode(d, -1)) < 1e-13);
    CHECK(oracle::max_abs_diff(r.b, 9.0 * oracle::mode(d, -1)) < 1e-13);
    CHECK(r.measured.u3 == doctest::Approx(0.1));
}

TEST_CASE("split of random C_perp members at the median level") {
    const auto s = model(1024);
    const CorpusSpec spec{.seed = 64, .count = 10};
    for (std::size_t id = 0; id < spec.count; ++id) {
        const auto f = generate_split_input(spec, s, id);
        const auto r = split(f, median_modulus(f), s, Space::C_perp, params_for(2.0));
        double gap = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) gap = std::max(gap, std::abs(f[i] - r.a[i] - r.b[i]));
        CHECK(gap <= 1e-12 * oracle::max_abs(f));
        CHECK(r.membership_residual_a <= 1e-8);
        CHECK(oracle::mass_outside(r.a, 1, [](long k) { return k <= -1; }) <= 1e-8);
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(r.exceed[i] == (std::abs(f[i]) > r.lambda ? 1 : 0));
    }
}

TEST_CASE("split ratios agree with a direct quadrature oracle") {
    const auto s = model(512);
    const CorpusSpec spec{.seed = 65, .count = 10, .law = CorpusLaw::two_scale};
    const double p = 2.0, q = 2.0;
    for (std::size_t id = 0; id < spec.count; ++id) {
        const auto f = generate_split_input(spec, s, id);
        const double lambda = median_modulus(f) * std::pow(2.0, static_cast<double>(id % 5) - 2.0);
        const auto r = split(f, lambda, s, Space::C_perp, params_for(p));
        const double w = oracle::weak_l1(f);
        double outside = 0.0, mu = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (std::abs(f[i]) > lambda)
                mu += 1.0;
            else
                outside += std::abs(r.b[i]);
        }
        outside /= static_cast<double>(f.size());
        mu /= static_cast<double>(f.size());
        CHECK(r.measured.u1 == doctest::Approx(oracle::lp(r.a, q) / (std::pow(lambda, 1.0 / p) * std::pow(w, 1.0 / q))).epsilon(1e-12));
        CHECK(r.measured.u2 == doctest::Approx(outside / w).epsilon(1e-12));
        CHECK(r.measured.u3 == doctest::Approx(mu * lambda / w).epsilon(1e-12));
        CHECK(r.measured.u4 == doctest::Approx(oracle::weak_l1(r.b) / w).epsilon(1e-12));
        // b inherits the weak bound: |b| <= |1 - Phi||f| <= 2|f|
        CHECK(oracle::weak_l1(r.b) <= 2.0 * w * (1.0 + 1e-12));
        for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(r.b[i]) <= 2.0 * std::abs(f[i]) + 1e-12);
    }
}

TEST_CASE("split ratios over a lambda sweep are bounded and stable under grid doubling") {
    const CorpusSpec spec{.seed = 66, .count = 8, .law = CorpusLaw::random_polynomial};
    std::array<std::array<double, 5>, 2> sup{};
    int gi = 0;
    for (std::size_t m : {512u, 1024u}) {
        const auto s = model(m);
        for (std::size_t id = 0; id < spec.count; ++id) {
            const auto f = generate_split_input(spec, s, id);
            const double med = median_modulus(f);
            for (int e = -4; e <= 4; ++e) {
                const auto r = split(f, med * std::pow(2.0, e), s, Space::C_perp, params_for(2.0));
                const std::array<double, 5> v = {r.measured.u1, r.measured.u2, r.measured.u3, r.measured.u4, r.phi_ratio};
                for (std::size_t k = 0; k < 5; ++k) {
                    CHECK(std::isfinite(v[k]));
                    sup[gi][k] = std::max(sup[gi][k], v[k]);
                }
            }
        }
        ++gi;
    }
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(sup[1][k] - sup[0][k]) < 0.2 * sup[0][k]);
}

TEST_CASE("split preconditions") {
    const auto s = model(64);
    const auto& d = s.domain();
    const auto member = oracle::mode(d, -2);
    CHECK_THROWS_AS(split(oracle::mode(d, 1), 1.0, s, Space::C_perp, params_for(2.0)), PreconditionError);
    CHECK_THROWS_AS(split(member, 0.0, s, Space::C_perp, params_for(2.0)), DomainError);
    CutoffParams bad = params_for(2.0);
    bad.gamma = 2;
    CHECK_THROWS_AS(split(member, 1.0, s, Space::C_perp, bad), PreconditionError);

    // D_perp splits use the conj(B) cut-off, which is analytic in the model space
    const auto dm = 10.0 * oracle::mode(d, 3);
    const auto r = split(dm, 1.0, s, Space::D_perp, params_for(2.0));
    CHECK(r.cutoff.algebra.side == Side::analytic);
    CHECK(r.membership_residual_a < 1e-12);
}
