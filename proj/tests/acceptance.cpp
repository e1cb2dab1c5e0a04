// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "oracle.hpp"

#include <kclose/corpus.hpp>
#include <kclose/decompose.hpp>
#include <kclose/experiment.hpp>
#include <kclose/operators.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>

using namespace kclose;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

CutoffParams params_for(double p) {
    CutoffParams c;
    c.p = p;
    c.gamma = admissible_gamma(p);
    return c;
}

ExperimentConfig base_config(Pipeline pl, std::vector<std::size_t> grids, CorpusSpec corpus) {
    ExperimentConfig cfg;
    cfg.pipeline = pl;
    cfg.grids = std::move(grids);
    cfg.corpus = corpus;
    cfg.write_files = false;
    return cfg;
}

// Fails the outcome when the run broke an invariant or a listed constant drifts too far.
void check_run(Outcome& o, const std::string& label, const ExperimentResult& res, const std::vector<std::string>& constants,
               double limit_pct) {
    if (!res.ok()) {
        o.pass = false;
        o.detail += label + ": " + std::to_string(res.failures.size()) + " invariant failures (" + res.failures.front().what + "); ";
    }
    std::string part;
    for (const auto& c : constants) {
        double worst_drift = 0.0;
        double top = 0.0;
        for (const auto& r : res.rows) {
            if (r.constant != c) continue;
            if (!std::isfinite(r.value)) o.pass = false;
            top = std::max(top, r.value);
            if (r.drift_pct) {
                worst_drift = std::max(worst_drift, *r.drift_pct);
                if (!(*r.drift_pct < limit_pct)) o.pass = false;
            }
        }
        part += c + "=" + fmt(top) + " drift " + fmt(worst_drift) + "%, ";
    }
    o.detail += label + ": " + part;
}

Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    auto track = [&](double e) { worst = std::max(worst, e); };
    for (std::size_t m : {8u, 16u}) {
        const long mm = static_cast<long>(m);
        auto conj_mult = [mm](long k) -> cplx {
            if (k == -mm / 2 || k == 0) return 0.0;
            return k > 0 ? cplx(0, -1) : cplx(0, 1);
        };
        for (int dim : {1, 2}) {
            GridDomain d(dim, m);
            for (int rep = 0; rep < 5; ++rep) {
                const auto f = oracle::random_function(d, rng);
                const auto spec = to_spectrum(f);
                const auto ref = oracle::dft(f);
                for (std::size_t i = 0; i < ref.size(); ++i) track(std::abs(spec.coeffs()[i] - ref[i]));
                std::vector<cplx> c(ref.size());
                for (auto& z : c) z = cplx(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
                track(oracle::max_abs_diff(from_spectrum(Spectrum(d, c)), oracle::idft(d, c)));

                const auto u = oracle::random_real(d, rng);
                for (Axis a : {Axis::first, Axis::second}) {
                    if (dim == 1 && a == Axis::second) continue;
                    const bool first = a == Axis::first;
                    auto pick = [first](long k, long l) { return first ? k : l; };
                    track(oracle::max_abs_diff(riesz_neg(f, a),
                                               oracle::multiplier(f, [&](long k, long l) { return pick(k, l) <= -1 ? 1.0 : 0.0; })));
                    track(oracle::max_abs_diff(riesz_pos(f, a),
                                               oracle::multiplier(f, [&](long k, long l) { return pick(k, l) >= 0 ? 1.0 : 0.0; })));
                    track(oracle::max_abs_diff(harmonic_conjugate(u, a),
                                               oracle::multiplier(u, [&](long k, long l) { return conj_mult(pick(k, l)); })));
                }
            }
        }
    }
    o.pass = worst <= 1e-12;
    o.detail = "max abs error " + fmt(worst);
    return o;
}

Outcome pointwise_cutoff_bound() {
    Outcome o;
    auto cfg = base_config(Pipeline::cutoff, {1024}, CorpusSpec{.seed = 2002, .count = 1000, .law = CorpusLaw::two_scale});
    cfg.p = 2.0;
    cfg.gamma = 3;
    const auto res = run_experiment(cfg);
    const double slack = res.row("min_slack", 1024).value;
    o.pass = res.ok() && slack >= -1e-12;
    o.detail = "min slack " + fmt(slack) + " over 1000 cases, max |Phi| " + fmt(res.row("max_modulus", 1024).value);
    return o;
}

Outcome o1_stability() {
    Outcome o;
    auto cfg = base_config(Pipeline::cutoff, {1024, 2048}, CorpusSpec{.seed = 3003, .count = 200, .law = CorpusLaw::two_scale});
    const auto res = run_experiment(cfg);
    check_run(o, "200 cases", res, {"O1"}, 10.0);
    return o;
}

Outcome split_suite() {
    Outcome o;
    auto cfg = base_config(Pipeline::split, {512, 1024}, CorpusSpec{.seed = 4004, .count = 40, .law = CorpusLaw::two_scale});
    const auto res = run_experiment(cfg);
    check_run(o, "lambda sweep 2^-4..2^4", res, {"U1", "U2", "U3", "U4"}, 20.0);
    for (std::size_t m : cfg.grids) {
        const double id = res.row("identity_residual", m).value;
        const double mem = res.row("membership_a", m).value;
        if (!(id <= 1e-12) || !(mem <= 1e-8)) o.pass = false;
        o.detail += "M=" + std::to_string(m) + " identity " + fmt(id) + " membership " + fmt(mem) + "; ";
    }
    return o;
}

Outcome end_to_end() {
    Outcome o;
    struct Run {
        std::string setting;
        double p;
        std::vector<std::size_t> grids;
    };
    const std::array runs = {Run{"model_space", 4.0 / 3.0, {512, 1024}}, Run{"model_space", 2.0, {512, 1024}},
                             Run{"model_space", 4.0, {512, 1024}}, Run{"bitorus", 2.0, {64, 128}}};
    for (const auto& r : runs) {
        auto cfg = base_config(Pipeline::decompose, r.grids, CorpusSpec{.seed = 5005, .count = 50, .law = CorpusLaw::two_scale});
        cfg.setting = r.setting;
        cfg.p = r.p;
        const auto res = run_experiment(cfg);
        check_run(o, r.setting + " p=" + fmt(r.p), res, {"Cg", "Ch"}, 20.0);
        for (std::size_t m : r.grids) {
            const double id = res.row("identity_residual", m).value;
            const double mem = std::max({res.row("membership_Phi_u", m).value, res.row("membership_Ph", m).value,
                                         res.row("membership_a", m).value});
            if (!(id <= 1e-9) || !(mem <= 1e-8)) o.pass = false;
            o.detail += "[M=" + std::to_string(m) + " identity " + fmt(id) + " membership " + fmt(mem) + "] ";
        }
        o.detail += "; ";
    }
    return o;
}

Outcome weak_type() {
    Outcome o;
    auto cfg = base_config(Pipeline::weaktype, {1024, 2048}, CorpusSpec{.seed = 6006, .count = 100, .law = CorpusLaw::spike});
    check_run(o, "spike corpus", run_experiment(cfg), {"weak_type"}, 20.0);
    return o;
}

Outcome degenerate_and_scale() {
    Outcome o;
    double worst_scale = 0.0;
    bool trivial = true;
    for (const char* name : {"model_space", "bitorus"}) {
        const auto s = make_setting(name, std::string(name) == "bitorus" ? 32 : 256);
        const auto cases = generate_corpus(CorpusSpec{.seed = 7007, .count = 6, .law = CorpusLaw::two_scale}, s);
        for (const auto& c : cases) {
            const GridFunction zero(s.domain());
            const auto only_h = decompose({.f = c.f, .g = zero, .h = c.f, .setting = s}, params_for(2.0));
            const auto only_g = decompose({.f = c.f, .g = c.f, .h = zero, .setting = s}, params_for(2.0));
            trivial = trivial && oracle::max_abs(only_h.g1) == 0.0 && oracle::max_abs_diff(only_h.h1, c.f) == 0.0 &&
                      oracle::max_abs_diff(only_g.g1, c.f) == 0.0 && oracle::max_abs(only_g.h1) == 0.0;

            const auto base = decompose({.f = c.f, .g = c.g, .h = c.h, .setting = s}, params_for(2.0));
            for (double k : {1e-3, 0.5, 3.0, 1e3}) {
                const auto rep = decompose({.f = k * c.f, .g = k * c.g, .h = k * c.h, .setting = s}, params_for(2.0));
                const double scale = k * oracle::max_abs(c.f);
                worst_scale = std::max({worst_scale, oracle::max_abs_diff(rep.g1, k * base.g1) / scale,
                                        oracle::max_abs_diff(rep.h1, k * base.h1) / scale});
            }
        }
    }
    o.pass = trivial && worst_scale <= 1e-12;
    o.detail = std::string("trivial branches ") + (trivial ? "exact" : "WRONG") + ", max relative scale defect " + fmt(worst_scale);
    return o;
}

Outcome blaschke() {
    Outcome o;
    const auto theta = InnerFunction::blaschke({cplx(0.99, 0.0), cplx(0.0, 0.9), cplx(-0.7, 0.0), cplx(0.5, 0.3)});
    const std::array<std::string, 3> names = {"Phi_u", "Ph", "a"};
    std::array<std::vector<double>, 3> series;
    for (std::size_t m : {1024u, 2048u, 4096u}) {
        const auto s = Setting::model_space(GridDomain(1, m), theta);
        const auto cases = generate_corpus(CorpusSpec{.seed = 8008, .count = 5, .law = CorpusLaw::two_scale}, s);
        std::array<double, 3> worst{};
        for (const auto& c : cases) {
            const auto rep = decompose({.f = c.f, .g = c.g, .h = c.h, .setting = s}, params_for(2.0));
            worst[0] = std::max(worst[0], rep.residuals.Phi_u);
            worst[1] = std::max(worst[1], rep.residuals.Ph);
            worst[2] = std::max(worst[2], rep.residuals.a);
        }
        for (std::size_t k = 0; k < 3; ++k) series[k].push_back(worst[k]);
    }
    // A step counts as decreasing when the residual drops, or when both values
    // already sit at double-precision rounding level, where nothing is left to resolve.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon();
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& v = series[k];
        const bool small = v.back() <= 1e-5;
        bool monotone = true;
        bool at_floor = true;
        for (std::size_t i = 1; i < v.size(); ++i) {
            const bool floored = v[i - 1] <= floor && v[i] <= floor;
            monotone = monotone && (v[i] < v[i - 1] || floored);
            at_floor = at_floor && floored;
        }
        if (!small || !monotone) o.pass = false;
        o.detail += names[k] + " " + fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]) +
                    (!monotone ? " (not decreasing)" : at_floor ? " (rounding level at every M)" : " (decreasing)") + "; ";
    }
    return o;
}

Outcome certificate_checker() {
    Outcome o;
    std::size_t accepted = 0, reports = 0, tampered = 0, rejected = 0, named = 0;
    for (const char* name : {"model_space", "bitorus"}) {
        const auto s = make_setting(name, std::string(name) == "bitorus" ? 32 : 128);
        const auto cases = generate_corpus(CorpusSpec{.seed = 9009, .count = 6, .law = CorpusLaw::two_scale}, s);
        for (const auto& c : cases) {
            const DualDecompositionInput in{.f = c.f, .g = c.g, .h = c.h, .setting = s};
            const auto rep = decompose(in, params_for(2.0));
            ++reports;
            if (verify_report(rep, in).ok) ++accepted;
            for (std::size_t i = 0; i < rep.g1.size(); ++i) {
                for (cplx delta : {cplx(1e-3, 0.0), cplx(0.0, -1e-3)}) {
                    auto bad = rep;
                    bad.g1[i] += delta;
                    const auto v = verify_report(bad, in);
                    ++tampered;
                    if (!v.ok) ++rejected;
                    for (const auto& d : v.diagnostics)
                        if (d.rfind("identity residual", 0) == 0) {
                            ++named;
                            break;
                        }
                }
            }
        }
    }
    o.pass = accepted == reports && rejected == tampered && named == tampered;
    o.detail = std::to_string(accepted) + "/" + std::to_string(reports) + " reports accepted, " + std::to_string(rejected) + "/" +
               std::to_string(tampered) + " perturbations rejected, " + std::to_string(named) + " naming the identity clause";
    return o;
}

}  // namespace

int main() {
    const std::array<std::pair<const char*, std::function<Outcome()>>, 9> criteria = {{
        {"oracle equivalence of transforms and projections (M <= 16)", oracle_equivalence},
        {"pointwise cut-off bound over 1000 cases", pointwise_cutoff_bound},
        {"cut-off constant stable under grid doubling", o1_stability},
        {"split identity, membership and ratio stability", split_suite},
        {"end-to-end decomposition in both settings", end_to_end},
        {"weak-type surrogate on the spike corpus", weak_type},
        {"degenerate branches and scale covariance", degenerate_and_scale},
        {"Blaschke inner function memberships", blaschke},
        {"certificate checker accepts and rejects", certificate_checker},
    }};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = Outcome{false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
