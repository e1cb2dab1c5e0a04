#include <doctest.h>

#include "oracle.hpp"

#include <kclose/metrics.hpp>
#include <kclose/operators.hpp>

using namespace kclose;

namespace {

GridFunction levels(const GridDomain& d, std::size_t n1, double c1, std::size_t n2, double c2) {
    std::vector<cplx> v(d.point_count());
    for (std::size_t i = 0; i < n1; ++i) v[i] = c1;
    for (std::size_t i = n1; i < n1 + n2; ++i) v[i] = cplx(0, c2);
    return GridFunction(d, std::move(v));
}

}  // namespace

TEST_CASE("lp_norm examples") {
    GridDomain d(1, 64);
    const auto one = GridFunction::constant(d, 1.0);
    for (double p : {1.0, 2.0, 3.5, kInfinity}) CHECK(std::abs(lp_norm(one, p) - 1.0) < 1e-15);
    CHECK(std::abs(lp_norm(oracle::mode(d, 1), 2.0) - 1.0) < 1e-15);
    CHECK_THROWS_AS(lp_norm(one, 0.5), DomainError);

    std::mt19937_64 rng(41);
    for (int dim : {1, 2}) {
        GridDomain dd(dim, 32);
        const auto f = oracle::random_function(dd, rng);
        for (double p : {1.0, 3.0, 7.25}) {
            const double ref = oracle::lp(f, p);
            CHECK(std::abs(lp_norm(f, p) - ref) <= 1e-12 * ref);
        }
        CHECK(lp_norm(f, kInfinity) == oracle::max_abs(f));
    }
}

TEST_CASE("lp norms increase with p on a probability space") {
    std::mt19937_64 rng(42);
    GridDomain d(1, 256);
    for (int rep = 0; rep < 20; ++rep) {
        const auto f = oracle::random_function(d, rng);
        double prev = 0.0;
        for (double p : {1.0, 1.5, 2.0, 3.0, 8.0, kInfinity}) {
            const double v = lp_norm(f, p);
            CHECK(v >= prev * (1.0 - 1e-14));
            prev = v;
        }
    }
}

TEST_CASE("weak L1 examples") {
    GridDomain d(1, 64);
    const auto ind = levels(d, 16, 3.0, 0, 0.0);
    CHECK(std::abs(weak_l1(ind) - 3.0 * 0.25) < 1e-15);
    CHECK(std::abs(weak_l1(GridFunction::constant(d, 2.5)) - 2.5) < 1e-15);

    // c1 = 4 on mass 8/64, c2 = 1 on mass 40/64
    const auto two = levels(d, 8, 4.0, 40, 1.0);
    const double expected = std::max(4.0 * 8.0 / 64.0, 1.0 * 48.0 / 64.0);
    CHECK(std::abs(weak_l1(two) - expected) < 1e-15);
    const auto two_b = levels(d, 8, 10.0, 40, 1.0);
    CHECK(std::abs(weak_l1(two_b) - std::max(10.0 * 8.0 / 64.0, 48.0 / 64.0)) < 1e-15);
}

TEST_CASE("weak L1 matches the threshold-scan oracle and Chebyshev") {
    std::mt19937_64 rng(43);
    for (int dim : {1, 2}) {
        GridDomain d(dim, 16);
        for (int rep = 0; rep < 10; ++rep) {
            const auto f = oracle::random_function(d, rng);
            const double w = weak_l1(f);
            CHECK(std::abs(w - oracle::weak_l1(f)) < 1e-14);
            CHECK(w <= lp_norm(f, 1.0) * (1.0 + 1e-14));
        }
    }
    GridDomain d(1, 32);
    const auto single = levels(d, 5, 2.0, 0, 0.0);
    CHECK(std::abs(weak_l1(single) - lp_norm(single, 1.0)) < 1e-15);
}

TEST_CASE("distribution function") {
    GridDomain d(1, 64);
    const auto two = levels(d, 8, 4.0, 40, 1.0);
    DistributionFunction sigma(two);
    CHECK(sigma(0.5) == doctest::Approx(48.0 / 64.0));
    CHECK(sigma(1.0) == doctest::Approx(8.0 / 64.0));
    CHECK(sigma(3.9) == doctest::Approx(8.0 / 64.0));
    CHECK(sigma(4.0) == 0.0);

    std::mt19937_64 rng(44);
    for (int rep = 0; rep < 10; ++rep) {
        const auto f = oracle::random_function(GridDomain(1, 128), rng);
        DistributionFunction s(f);
        const auto& m = s.masses();
        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(m[i] >= 0.0);
            CHECK(m[i] <= 1.0);
            const double count = m[i] * 128.0;
            CHECK(std::abs(count - std::round(count)) < 1e-9);
            if (i > 0) CHECK(m[i] <= m[i - 1]);
        }
        for (double q : {1.0, 2.0, 3.0, 4.5}) {
            const double direct = std::pow(lp_norm(f, q), q);
            CHECK(std::abs(s.power_integral(q) - direct) <= 1e-10 * direct);
        }
    }
}

TEST_CASE("estimate_constant examples") {
    GridDomain d(1, 64);
    std::mt19937_64 rng(45);
    std::vector<GridFunction> corpus;
    for (int i = 0; i < 5; ++i) corpus.push_back(oracle::random_function(d, rng));

    const auto id = estimate_constant([](const GridFunction& f) { return f; }, corpus, lq_ratio(2.0));
    CHECK(std::abs(id.sup_ratio - 1.0) < 1e-14);

    const auto zero = estimate_constant([&](const GridFunction&) { return GridFunction(d); }, corpus, lq_ratio(2.0));
    CHECK(zero.sup_ratio == 0.0);

    const auto z = oracle::mode(d, 1);
    const auto zbar = oracle::mode(d, -1);
    const std::vector<GridFunction> modes = {zbar, oracle::mode(d, -2), z + zbar};
    const auto r = estimate_constant([](const GridFunction& f) { return riesz_neg(f); }, modes, lq_ratio(2.0));
    REQUIRE(r.ratios.size() == 3);
    CHECK(std::abs(r.ratios[0] - 1.0) < 1e-14);
    CHECK(std::abs(r.ratios[1] - 1.0) < 1e-14);
    CHECK(std::abs(r.ratios[2] - 1.0 / std::sqrt(2.0)) < 1e-14);  // ||zbar||_2 / ||z + zbar||_2
    CHECK(std::abs(r.sup_ratio - 1.0) < 1e-14);
    REQUIRE(r.argmax_case);
    CHECK(*r.argmax_case <= 1);

    const std::vector<GridFunction> with_zero = {GridFunction(d), zbar};
    const auto s = estimate_constant([](const GridFunction& f) { return riesz_neg(f); }, with_zero, lq_ratio(2.0));
    REQUIRE(s.skipped.size() == 1);
    CHECK(s.skipped[0] == 0);
    CHECK(std::isnan(s.ratios[0]));
    CHECK(*s.argmax_case == 1);

    CHECK_THROWS(estimate_constant([](const GridFunction& f) { return f; }, std::vector<GridFunction>{}, lq_ratio(2.0)));
}

TEST_CASE("weak type ratio is the weak norm of the image over the L1 norm") {
    std::mt19937_64 rng(46);
    GridDomain d(1, 32);
    for (int rep = 0; rep < 5; ++rep) {
        const auto f = oracle::random_function(d, rng);
        const auto pf = riesz_neg(f);
        const auto ratio = weak_type_ratio()(f, pf);
        CHECK(std::abs(ratio.numerator / ratio.denominator - oracle::weak_l1(pf) / oracle::lp(f, 1.0)) < 1e-13);
    }
}
