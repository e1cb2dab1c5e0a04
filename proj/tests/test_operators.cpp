#include <doctest.h>

#include "oracle.hpp"

#include <kclose/metrics.hpp>
#include <kclose/operators.hpp>

using namespace kclose;

namespace {

GridFunction cosine(const GridDomain& d, double k, double amp = 1.0) {
    return GridFunction::sample(d, [=](double t) { return cplx(amp * std::cos(k * t)); });
}

GridFunction sine(const GridDomain& d, double k, double amp = 1.0) {
    return GridFunction::sample(d, [=](double t) { return cplx(amp * std::sin(k * t)); });
}

cplx conj_multiplier(long k, long m) {
    if (k == -m / 2 || k == 0) return 0.0;
    return k > 0 ? cplx(0, -1) : cplx(0, 1);
}

}  // namespace

TEST_CASE("harmonic conjugate examples") {
    GridDomain d(1, 64);
    CHECK(oracle::max_abs_diff(harmonic_conjugate(cosine(d, 1)), sine(d, 1)) < 1e-13);
    CHECK(oracle::max_abs(harmonic_conjugate(GridFunction::constant(d, 1.0))) < 1e-15);
    const auto u = cosine(d, 2) + sine(d, 5, 3.0);
    const auto expected = sine(d, 2) - cosine(d, 5, 3.0);
    CHECK(oracle::max_abs_diff(harmonic_conjugate(u), expected) < 1e-13);
}

TEST_CASE("harmonic conjugate rejects complex input and returns real, mean-zero output") {
    GridDomain d(1, 32);
    CHECK_THROWS_AS(harmonic_conjugate(oracle::mode(d, 1)), PreconditionError);
    std::mt19937_64 rng(21);
    const auto u = oracle::random_real(d, rng);
    const auto h = harmonic_conjugate(u);
    CHECK(h.is_real(0.0));
    CHECK(std::abs(to_spectrum(h).coeff(0)) < 1e-15);
}

TEST_CASE("operators match the direct-summation oracle for M <= 16") {
    std::mt19937_64 rng(22);
    for (std::size_t m : {8u, 16u}) {
        const long mm = static_cast<long>(m);
        GridDomain d1(1, m);
        GridDomain d2(2, m);
        for (int rep = 0; rep < 4; ++rep) {
            const auto f = oracle::random_function(d1, rng);
            CHECK(oracle::max_abs_diff(riesz_neg(f), oracle::multiplier(f, [](long k, long) { return k <= -1 ? 1.0 : 0.0; })) < 1e-12);
            CHECK(oracle::max_abs_diff(riesz_pos(f), oracle::multiplier(f, [](long k, long) { return k >= 0 ? 1.0 : 0.0; })) < 1e-12);
            const auto u = oracle::random_real(d1, rng);
            CHECK(oracle::max_abs_diff(harmonic_conjugate(u),
                                       oracle::multiplier(u, [mm](long k, long) { return conj_multiplier(k, mm); })) < 1e-12);

            const auto g = oracle::random_function(d2, rng);
            CHECK(oracle::max_abs_diff(riesz_neg(g, Axis::first),
                                       oracle::multiplier(g, [](long k, long) { return k <= -1 ? 1.0 : 0.0; })) < 1e-12);
            CHECK(oracle::max_abs_diff(riesz_neg(g, Axis::second),
                                       oracle::multiplier(g, [](long, long l) { return l <= -1 ? 1.0 : 0.0; })) < 1e-12);
            CHECK(oracle::max_abs_diff(riesz_pos(g, Axis::second),
                                       oracle::multiplier(g, [](long, long l) { return l >= 0 ? 1.0 : 0.0; })) < 1e-12);
            const auto v = oracle::random_real(d2, rng);
            CHECK(oracle::max_abs_diff(harmonic_conjugate(v, Axis::second),
                                       oracle::multiplier(v, [mm](long, long l) { return conj_multiplier(l, mm); })) < 1e-12);
        }
    }
}

TEST_CASE("Riesz projection examples and mask algebra") {
    GridDomain d(1, 32);
    const auto z = oracle::mode(d, 1);
    const auto zbar = oracle::mode(d, -1);
    const auto one = GridFunction::constant(d, 1.0);
    const auto f = z + one + zbar;
    CHECK(oracle::max_abs_diff(riesz_neg(f), zbar) < 1e-14);
    CHECK(oracle::max_abs_diff(riesz_pos(f), z + one) < 1e-14);

    std::mt19937_64 rng(23);
    for (int dim : {1, 2}) {
        GridDomain dd(dim, 16);
        const auto g = oracle::random_function(dd, rng);
        for (Axis a : {Axis::first, Axis::second}) {
            if (dim == 1 && a == Axis::second) continue;
            const auto n1 = riesz_neg(g, a);
            CHECK(oracle::max_abs_diff(riesz_neg(n1, a), n1) < 1e-14);
            CHECK(oracle::max_abs(riesz_neg(riesz_pos(g, a), a)) < 1e-14);
            CHECK(oracle::max_abs_diff(riesz_pos(g, a) + riesz_neg(g, a), g) < 1e-13);
        }
    }
    // a negative-spectrum function is fixed
    const auto neg = oracle::trig_poly(d, -9, -1, rng);
    CHECK(oracle::max_abs_diff(riesz_neg(neg), neg) < 1e-13);
}

TEST_CASE("double conjugation on band-limited real functions") {
    std::mt19937_64 rng(24);
    for (std::size_t m : {32u, 256u}) {
        GridDomain d(1, m);
        const long top = static_cast<long>(m / 2) - 1;
        for (int rep = 0; rep < 5; ++rep) {
            const auto p = oracle::trig_poly(d, 0, top, rng);
            const auto u = (p + p.conj()).real_part();
            const double mean = to_spectrum(u).coeff(0).real();
            const auto hh = harmonic_conjugate(harmonic_conjugate(u));
            const auto expect = -(u - GridFunction::constant(d, mean));
            CHECK(oracle::max_abs_diff(hh, expect) < 1e-10);
        }
    }
}

TEST_CASE("Fejer smoothing examples and properties") {
    GridDomain d(1, 64);
    const auto c = GridFunction::constant(d, 2.5);
    CHECK(oracle::max_abs_diff(fejer_smooth(c, 7), c) < 1e-14);
    CHECK(oracle::max_abs_diff(fejer_smooth(cosine(d, 1), 1), cosine(d, 1, 0.5)) < 1e-14);
    CHECK_THROWS_AS(fejer_smooth(c, 32), DomainError);
    CHECK_THROWS_AS(fejer_smooth(c, 0), DomainError);
    CHECK_NOTHROW(fejer_smooth(c, 31));

    std::mt19937_64 rng(25);
    GridDomain big(1, 256);
    for (int rep = 0; rep < 20; ++rep) {
        const auto u = oracle::random_nonnegative(big, rng);
        const auto v = fejer_smooth(u, 32);
        CHECK(v.is_real(1e-12));
        double lo = 1e300;
        for (cplx z : v.samples()) lo = std::min(lo, z.real());
        CHECK(lo >= -1e-12);
        CHECK(std::abs(to_spectrum(v).coeff(0) - to_spectrum(u).coeff(0)) < 1e-13);
    }
    GridDomain sq(2, 32);
    const auto w = oracle::random_nonnegative(sq, rng);
    const auto ws = fejer_smooth(w, 5, Axis::second);
    CHECK(oracle::max_abs_diff(ws, oracle::multiplier(w, [](long, long l) {
              return std::max(0.0, 1.0 - std::abs(static_cast<double>(l)) / 6.0);
          })) < 1e-12);
}

TEST_CASE("alpha witness examples") {
    GridDomain d(1, 128);
    const auto c = GridFunction::constant(d, 0.75);
    CHECK(oracle::max_abs_diff(alpha_witness(c, 10, Side::analytic), c) < 1e-14);
    CHECK(oracle::max_abs_diff(alpha_witness(c, 10, Side::anti_analytic), c) < 1e-14);

    const auto u = GridFunction::constant(d, 1.0) + cosine(d, 1);
    for (int n : {1, 4, 16, 63}) {
        const double weight = 1.0 - 1.0 / (n + 1.0);
        const auto expected = GridFunction::constant(d, 1.0) + weight * oracle::mode(d, 1);
        CHECK(oracle::max_abs_diff(alpha_witness(u, n, Side::analytic), expected) < 1e-13);
        const auto expected_anti = GridFunction::constant(d, 1.0) + weight * oracle::mode(d, -1);
        CHECK(oracle::max_abs_diff(alpha_witness(u, n, Side::anti_analytic), expected_anti) < 1e-13);
    }
    CHECK_THROWS_AS(alpha_witness(u - GridFunction::constant(d, 1.5), 4, Side::analytic), PreconditionError);
    CHECK_THROWS_AS(alpha_witness(oracle::mode(d, 1), 4, Side::analytic), PreconditionError);
}

TEST_CASE("alpha witness support, positivity and 2D axis") {
    std::mt19937_64 rng(26);
    GridDomain d(1, 256);
    for (int rep = 0; rep < 20; ++rep) {
        const auto u = oracle::random_nonnegative(d, rng);
        const auto w = alpha_witness(u, 32, Side::analytic);
        const auto wa = alpha_witness(u, 32, Side::anti_analytic);
        CHECK(oracle::mass_outside(w, 1, [](long k) { return k >= 0; }) < 1e-12);
        CHECK(oracle::mass_outside(wa, 1, [](long k) { return k <= 0; }) < 1e-12);
        for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i].real() >= -1e-12);
    }
    GridDomain sq(2, 16);
    const auto v = oracle::random_nonnegative(sq, rng);
    const auto w2 = alpha_witness(v, 5, Side::anti_analytic, Axis::second);
    CHECK(oracle::mass_outside(w2, 2, [](long l) { return l <= 0; }) < 1e-12);
    CHECK(oracle::max_abs_diff(w2.real_part(), fejer_smooth(v, 5, Axis::second)) < 1e-14);
}

TEST_CASE("alpha witness converges at the Fejer rate") {
    // For a trigonometric polynomial, u - Re w_n = sum_k |k|/(n+1) c_k e^{ik}, so
    // (n+1) * ||Re w_n - u||_p is independent of n once n exceeds the degree.
    GridDomain d(1, 1024);
    std::mt19937_64 rng(27);
    const auto p = oracle::trig_poly(d, 0, 6, rng);
    const auto u = ((p + p.conj()).real_part() + GridFunction::constant(d, 40.0));
    const double p_exp = 3.0;
    double previous = kInfinity;
    double scaled0 = -1.0;
    int last = 0;
    for (int n = 8; n <= 511; n = 2 * n + 1) {
        last = n;
        const auto w = alpha_witness(u, n, Side::analytic);
        const double err = lp_norm(w.real_part() - u, p_exp);
        CHECK(err < previous);
        previous = err;
        const double scaled = err * (n + 1.0);
        if (scaled0 < 0) scaled0 = scaled;
        CHECK(std::abs(scaled - scaled0) <= 1e-10 * scaled0);
    }
    CHECK(last == 287);
    CHECK(previous <= scaled0 / (last + 1.0) * (1.0 + 1e-10));
}
