#include <kclose/experiment.hpp>

#include <kclose/cutoff.hpp>
#include <kclose/decompose.hpp>
#include <kclose/io.hpp>
#include <kclose/metrics.hpp>
#include <kclose/report.hpp>
#include <kclose/splitter.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <thread>

namespace kclose {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kSlackFloor = -1e-12;

enum class Aggregate { max, min };

struct ConstantSpec {
    const char* name;
    Aggregate aggregate;
};

// Constants reported per pipeline, in CSV order.
std::vector<ConstantSpec> constant_specs(Pipeline p) {
    switch (p) {
        case Pipeline::cutoff:
            return {{"O1", Aggregate::max},
                    {"min_slack", Aggregate::min},
                    {"max_modulus", Aggregate::max},
                    {"algebra_residual", Aggregate::max},
                    {"witness_error", Aggregate::max},
                    {"degree", Aggregate::max}};
        case Pipeline::split:
            return {{"U1", Aggregate::max},
                    {"U2", Aggregate::max},
                    {"U3", Aggregate::max},
                    {"U4", Aggregate::max},
                    {"phi_ratio", Aggregate::max},
                    {"identity_residual", Aggregate::max},
                    {"membership_a", Aggregate::max},
                    {"min_slack", Aggregate::min}};
        case Pipeline::decompose:
            return {{"Cg", Aggregate::max},
                    {"Ch", Aggregate::max},
                    {"one_minus_Phi", Aggregate::max},
                    {"b_term", Aggregate::max},
                    {"h1_tail", Aggregate::max},
                    {"identity_residual", Aggregate::max},
                    {"membership_Phi_u", Aggregate::max},
                    {"membership_Ph", Aggregate::max},
                    {"membership_a", Aggregate::max},
                    {"min_slack", Aggregate::min}};
        case Pipeline::weaktype:
            return {{"weak_type", Aggregate::max}, {"lq_bound", Aggregate::max}};
    }
    return {};
}

struct CaseOutcome {
    std::map<std::string, double> values;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    bool dump = false;  // write a certificate even without violations
};

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string setting_label(const ExperimentConfig& cfg) {
    return cfg.setting == "model_space" ? "model_space[" + cfg.theta + "]" : cfg.setting;
}

void check_finite(CaseOutcome& out) {
    for (const auto& [name, v] : out.values)
        if (!std::isfinite(v)) out.violations.push_back(name + " is not finite");
}

CutoffParams base_params(const ExperimentConfig& cfg) {
    CutoffParams params;
    params.gamma = cfg.effective_gamma();
    params.p = cfg.p;
    params.smoothing_degree = cfg.smoothing_degree;
    return params;
}

struct CaseContext {
    const ExperimentConfig& cfg;
    const Setting& setting;
    const std::string& hash;
    fs::path certificate_dir;
};

void write_input_certificate(const CaseContext& ctx, std::size_t id, const GridFunction& input,
                             const CaseOutcome& outcome, std::vector<fs::path>& written) {
    const auto m = ctx.setting.domain().size();
    const auto stem = to_string(ctx.cfg.pipeline) + "_M" + std::to_string(m) + "_case" + std::to_string(id);
    fs::create_directories(ctx.certificate_dir);
    write_binary(ctx.certificate_dir / (stem + ".input.bin"), input);
    json j;
    j["schema"] = "kclose-case/1";
    j["version"] = library_version();
    j["config_hash"] = ctx.hash;
    j["pipeline"] = to_string(ctx.cfg.pipeline);
    j["setting"] = json::parse(setting_to_json(ctx.setting));
    j["case_id"] = id;
    j["seed"] = ctx.cfg.corpus.seed;
    j["law"] = to_string(ctx.cfg.corpus.law);
    j["input"] = stem + ".input.bin";
    j["violations"] = outcome.violations;
    json values;
    for (const auto& [k, v] : outcome.values) values[k] = v;
    j["values"] = values;
    const auto path = ctx.certificate_dir / (stem + ".json");
    std::ofstream(path) << j.dump(2) << '\n';
    written.push_back(path);
}

CaseOutcome run_cutoff_case(const CaseContext& ctx, std::size_t id, std::vector<fs::path>& written) {
    CaseOutcome out;
    const auto& d = ctx.setting.domain();
    const GridFunction phi = generate_phi(ctx.cfg.corpus, d, id);
    const auto params = base_params(ctx.cfg);
    const auto res = build_cutoff(phi, params);
    out.values = {{"O1", res.o1_ratio},
                  {"min_slack", res.pointwise_slack},
                  {"max_modulus", res.max_modulus},
                  {"algebra_residual", res.algebra_residual},
                  {"witness_error", res.witness_error},
                  {"degree", static_cast<double>(res.degree)}};
    check_finite(out);
    if (res.pointwise_slack < kSlackFloor) out.violations.push_back("pointwise bound slack " + format_double(res.pointwise_slack));
    if (res.max_modulus > 1.0 + 1e-12) out.violations.push_back("|Phi| exceeds 1: " + format_double(res.max_modulus));
    if (!res.converged) out.warnings.push_back(res.warning);
    if (ctx.cfg.write_files && !out.violations.empty()) write_input_certificate(ctx, id, phi, out, written);
    return out;
}

double median_modulus(const GridFunction& f) {
    std::vector<double> m(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) m[i] = std::abs(f[i]);
    auto mid = m.begin() + static_cast<std::ptrdiff_t>(m.size() / 2);
    std::nth_element(m.begin(), mid, m.end());
    return *mid;
}

CaseOutcome run_split_case(const CaseContext& ctx, std::size_t id, std::vector<fs::path>& written) {
    CaseOutcome out;
    const GridFunction f = generate_split_input(ctx.cfg.corpus, ctx.setting, id);
    const double median = median_modulus(f);
    const auto params = base_params(ctx.cfg);
    double scale = 0.0;
    for (cplx z : f.samples()) scale = std::max(scale, std::abs(z));
    out.values = {{"U1", 0.0}, {"U2", 0.0}, {"U3", 0.0}, {"U4", 0.0}, {"phi_ratio", 0.0},
                  {"identity_residual", 0.0}, {"membership_a", 0.0}, {"min_slack", kInfinity}};
    if (median == 0.0) {
        out.violations.push_back("median |f| is zero, lambda sweep undefined");
        return out;
    }
    for (double mult : ctx.cfg.lambda_sweep) {
        const auto sr = split(f, mult * median, ctx.setting, Space::C_perp, params);
        double gap = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) gap = std::max(gap, std::abs(f[i] - sr.a[i] - sr.b[i]));
        auto bump = [&out](const char* k, double v) { out.values[k] = std::max(out.values[k], v); };
        bump("U1", sr.measured.u1);
        bump("U2", sr.measured.u2);
        bump("U3", sr.measured.u3);
        bump("U4", sr.measured.u4);
        bump("phi_ratio", sr.phi_ratio);
        bump("identity_residual", scale > 0.0 ? gap / scale : gap);
        bump("membership_a", sr.membership_residual_a);
        out.values["min_slack"] = std::min(out.values["min_slack"], sr.cutoff.pointwise_slack);
        if (!sr.cutoff.converged) out.warnings.push_back(sr.cutoff.warning);
    }
    check_finite(out);
    if (out.values["identity_residual"] > 1e-12)
        out.violations.push_back("f = a + b residual " + format_double(out.values["identity_residual"]));
    if (out.values["membership_a"] > 1e-8)
        out.violations.push_back("a leaves C_perp: residual " + format_double(out.values["membership_a"]));
    if (out.values["min_slack"] < kSlackFloor)
        out.violations.push_back("pointwise bound slack " + format_double(out.values["min_slack"]));
    if (ctx.cfg.write_files && !out.violations.empty()) write_input_certificate(ctx, id, f, out, written);
    return out;
}

CaseOutcome run_decompose_case(const CaseContext& ctx, std::size_t id, std::vector<fs::path>& written) {
    CaseOutcome out;
    const auto cc = generate_case(ctx.cfg.corpus, ctx.setting, id, ctx.cfg.p);
    DualDecompositionInput input{cc.f, cc.g, cc.h, ctx.setting, ctx.cfg.p};
    const auto params = base_params(ctx.cfg);
    const auto rep = decompose(input, params, true);
    const auto ver = verify_report(rep, input);
    out.values = {{"Cg", rep.Cg},
                  {"Ch", rep.Ch},
                  {"one_minus_Phi", rep.terms.one_minus_Phi},
                  {"b_term", rep.terms.b_term},
                  {"h1_tail", rep.terms.h1_tail},
                  {"identity_residual", rep.residuals.identity},
                  {"membership_Phi_u", rep.residuals.Phi_u},
                  {"membership_Ph", rep.residuals.Ph},
                  {"membership_a", rep.residuals.a},
                  {"min_slack", std::min(rep.first_cutoff_slack, rep.second_cutoff_slack)}};
    check_finite(out);
    const double tol = membership_tolerance(ctx.setting);
    if (rep.residuals.identity > 1e-9) out.violations.push_back("identity residual " + format_double(rep.residuals.identity));
    if (rep.residuals.Phi_u > tol) out.violations.push_back("Phi u leaves D_perp: " + format_double(rep.residuals.Phi_u));
    if (rep.residuals.Ph > tol) out.violations.push_back("Ph leaves C_perp: " + format_double(rep.residuals.Ph));
    if (rep.residuals.a > tol) out.violations.push_back("a leaves C_perp: " + format_double(rep.residuals.a));
    if (out.values["min_slack"] < kSlackFloor)
        out.violations.push_back("pointwise bound slack " + format_double(out.values["min_slack"]));
    for (const auto& diag : ver.diagnostics) out.violations.push_back("verify: " + diag);
    out.warnings = rep.warnings;

    if (ctx.cfg.write_files && (id == 0 || !out.violations.empty())) {
        const auto m = ctx.setting.domain().size();
        const auto path = ctx.certificate_dir / ("decompose_M" + std::to_string(m) + "_case" + std::to_string(id) + ".json");
        write_report(path, rep, input, {ctx.hash, id, cc.certificate});
        written.push_back(path);
    }
    return out;
}

CaseOutcome run_weak_case(const CaseContext& ctx, std::size_t id, std::vector<fs::path>& written) {
    CaseOutcome out;
    const GridFunction f = generate_weak_input(ctx.cfg.corpus, ctx.setting.domain(), id);
    const GridFunction pf = project_P(f, ctx.setting);
    const double q = ctx.cfg.p / (ctx.cfg.p - 1.0);
    const Ratio weak = weak_type_ratio()(f, pf);
    const Ratio lq = lq_ratio(q)(f, pf);
    out.values = {{"weak_type", weak.denominator > 0.0 ? weak.numerator / weak.denominator : 0.0},
                  {"lq_bound", lq.denominator > 0.0 ? lq.numerator / lq.denominator : 0.0}};
    check_finite(out);
    if (ctx.cfg.write_files && !out.violations.empty()) write_input_certificate(ctx, id, f, out, written);
    return out;
}

CaseOutcome run_case(const CaseContext& ctx, std::size_t id, std::vector<fs::path>& written) {
    try {
        switch (ctx.cfg.pipeline) {
            case Pipeline::cutoff: return run_cutoff_case(ctx, id, written);
            case Pipeline::split: return run_split_case(ctx, id, written);
            case Pipeline::decompose: return run_decompose_case(ctx, id, written);
            case Pipeline::weaktype: return run_weak_case(ctx, id, written);
        }
    } catch (const std::exception& e) {
        CaseOutcome out;
        out.violations.push_back(std::string("exception: ") + e.what());
        return out;
    }
    return {};
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json canonical_json(const ExperimentConfig& cfg) {
    json j;
    j["pipeline"] = to_string(cfg.pipeline);
    j["setting"] = cfg.setting;
    if (cfg.setting == "model_space") j["theta"] = cfg.theta;
    j["p"] = cfg.p;
    j["gamma"] = cfg.effective_gamma();
    if (cfg.smoothing_degree) j["smoothing_degree"] = *cfg.smoothing_degree;
    j["grids"] = cfg.grids;
    j["corpus"] = {{"seed", cfg.corpus.seed},
                   {"count", cfg.corpus.count},
                   {"law", to_string(cfg.corpus.law)},
                   {"amplitude", cfg.corpus.amplitude}};
    j["lambda_sweep"] = cfg.lambda_sweep;
    return j;
}

}  // namespace

std::string to_string(Pipeline pipeline) {
    switch (pipeline) {
        case Pipeline::cutoff: return "cutoff";
        case Pipeline::split: return "split";
        case Pipeline::decompose: return "decompose";
        case Pipeline::weaktype: return "weaktype";
    }
    return "unknown";
}

Pipeline parse_pipeline(std::string_view name) {
    if (name == "cutoff") return Pipeline::cutoff;
    if (name == "split") return Pipeline::split;
    if (name == "decompose" || name == "kclose") return Pipeline::decompose;
    if (name == "weaktype" || name == "weak-type") return Pipeline::weaktype;
    throw ConfigError("unknown pipeline '" + std::string(name) + "'");
}

int ExperimentConfig::effective_gamma() const { return gamma ? *gamma : admissible_gamma(p); }

void ExperimentConfig::validate() const {
    if (!(p > 1.0) || std::isinf(p)) throw ConfigError("p must lie in (1, inf)");
    if (gamma && (*gamma < 2 || !(*gamma > p))) throw ConfigError("gamma must be an integer >= 2 and > p");
    if (grids.empty()) throw ConfigError("at least one grid size is required");
    for (auto m : grids) {
        if (m < 8 || (m & (m - 1)) != 0) throw ConfigError("grid size " + std::to_string(m) + " is not a power of two >= 8");
    }
    if (corpus.count == 0) throw ConfigError("corpus count must be >= 1");
    if (!(corpus.amplitude >= 0.0) || std::isinf(corpus.amplitude)) throw ConfigError("corpus amplitude must be finite and >= 0");
    if (pipeline == Pipeline::split) {
        if (lambda_sweep.empty()) throw ConfigError("split experiments need a nonempty lambda_sweep");
        for (double l : lambda_sweep)
            if (!(l > 0.0) || std::isinf(l)) throw ConfigError("lambda_sweep multipliers must be positive and finite");
    }
    if (setting != "model_space" && setting != "bitorus") throw ConfigError("unknown setting '" + setting + "'");
    if (setting == "model_space") (void)InnerFunction::parse(theta);
}

ExperimentConfig config_from_json(std::string_view text) {
    ExperimentConfig cfg;
    try {
        const auto j = json::parse(text);
        if (j.contains("pipeline")) cfg.pipeline = parse_pipeline(j.at("pipeline").get<std::string>());
        if (j.contains("setting")) {
            const auto& s = j.at("setting");
            if (s.is_string()) {
                cfg.setting = s.get<std::string>();
            } else {
                cfg.setting = s.at("setting").get<std::string>();
                if (s.contains("theta")) {
                    json copy = s;
                    copy["M"] = 64;
                    cfg.theta = setting_from_json(copy.dump()).theta()->describe();
                }
            }
        }
        if (j.contains("theta")) cfg.theta = j.at("theta").get<std::string>();
        if (j.contains("p")) cfg.p = j.at("p").get<double>();
        if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<int>();
        if (j.contains("smoothing_degree")) cfg.smoothing_degree = j.at("smoothing_degree").get<int>();
        if (j.contains("grids")) cfg.grids = j.at("grids").get<std::vector<std::size_t>>();
        if (j.contains("corpus")) {
            const auto& c = j.at("corpus");
            cfg.corpus.seed = c.value("seed", cfg.corpus.seed);
            cfg.corpus.count = c.value("count", cfg.corpus.count);
            if (c.contains("law")) cfg.corpus.law = parse_corpus_law(c.at("law").get<std::string>());
            cfg.corpus.amplitude = c.value("amplitude", cfg.corpus.amplitude);
        }
        if (j.contains("lambda_sweep")) cfg.lambda_sweep = j.at("lambda_sweep").get<std::vector<double>>();
        if (j.contains("outputs")) cfg.out_dir = j.at("outputs").value("dir", cfg.out_dir.string());
        if (j.contains("threads")) cfg.threads = j.at("threads").get<std::size_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j = canonical_json(cfg);
    j["outputs"] = {{"dir", cfg.out_dir.string()}};
    if (cfg.threads) j["threads"] = *cfg.threads;
    return j.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(canonical_json(cfg).dump()); }

const ConstantRow& ExperimentResult::row(std::string_view constant, std::size_t m) const {
    for (const auto& r : rows)
        if (r.constant == constant && r.M == m) return r;
    throw std::out_of_range("no row for constant " + std::string(constant) + " at M = " + std::to_string(m));
}

std::optional<double> drift_threshold_pct(Pipeline pipeline, std::string_view c) {
    switch (pipeline) {
        case Pipeline::cutoff:
            if (c == "O1") return 10.0;
            break;
        case Pipeline::split:
            if (c == "U1" || c == "U2" || c == "U3" || c == "U4") return 20.0;
            break;
        case Pipeline::decompose:
            if (c == "Cg" || c == "Ch") return 20.0;
            break;
        case Pipeline::weaktype:
            if (c == "weak_type") return 20.0;
            break;
    }
    return std::nullopt;
}

std::size_t worker_count(std::optional<std::size_t> requested) {
    if (const char* env = std::getenv("KCLOSE_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && n >= 1) return static_cast<std::size_t>(n);
    }
    if (requested && *requested >= 1) return *requested;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

std::string constants_csv(const std::vector<ConstantRow>& rows) {
    std::string out = "experiment,setting,M,p,constant,value,argmax_case,drift_pct\n";
    for (const auto& r : rows) {
        out += r.experiment + ',' + r.setting + ',' + std::to_string(r.M) + ',' + format_double(r.p) + ',' + r.constant +
               ',' + format_double(r.value) + ',' + (r.argmax_case ? std::to_string(*r.argmax_case) : std::string()) +
               ',' + (r.drift_pct ? format_double(*r.drift_pct) : std::string()) + '\n';
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    const std::string hash = config_hash(cfg);
    const auto specs = constant_specs(cfg.pipeline);
    const std::size_t workers = std::min(worker_count(cfg.threads), cfg.corpus.count);
    const fs::path cert_dir = cfg.out_dir / "certificates";
    std::map<std::string, std::size_t> warning_counts;

    for (std::size_t gi = 0; gi < cfg.grids.size(); ++gi) {
        const std::size_t m = cfg.grids[gi];
        const Setting setting = make_setting(cfg.setting, m, cfg.theta);
        const CaseContext ctx{cfg, setting, hash, cert_dir};

        std::vector<CaseOutcome> outcomes(cfg.corpus.count);
        std::vector<std::vector<fs::path>> written(cfg.corpus.count);
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t id = next++; id < cfg.corpus.count; id = next++) outcomes[id] = run_case(ctx, id, written[id]);
        };
        if (workers <= 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
        }

        for (std::size_t id = 0; id < outcomes.size(); ++id) {
            for (const auto& v : outcomes[id].violations) result.failures.push_back({m, id, v});
            for (const auto& w : outcomes[id].warnings) ++warning_counts["M=" + std::to_string(m) + ": " + w.substr(0, w.find(" with "))];
            for (auto& p : written[id]) result.certificates.push_back(std::move(p));
        }

        for (const auto& spec : specs) {
            ConstantRow row{to_string(cfg.pipeline), setting_label(cfg), m, cfg.p, spec.name};
            bool any = false;
            for (std::size_t id = 0; id < outcomes.size(); ++id) {
                const auto it = outcomes[id].values.find(spec.name);
                if (it == outcomes[id].values.end() || std::isnan(it->second)) continue;
                const bool better = spec.aggregate == Aggregate::max ? it->second > row.value : it->second < row.value;
                if (!any || better) {
                    row.value = it->second;
                    row.argmax_case = id;
                    any = true;
                }
            }
            if (!any) row.value = std::nan("");
            if (gi > 0) {
                const auto& prev = result.row(spec.name, cfg.grids[gi - 1]);
                const double base = std::abs(prev.value);
                const double diff = std::abs(row.value - prev.value);
                row.drift_pct = base == 0.0 ? (diff == 0.0 ? 0.0 : kInfinity) : 100.0 * diff / base;
                if (const auto limit = drift_threshold_pct(cfg.pipeline, spec.name); limit && !(*row.drift_pct < *limit)) {
                    result.failures.push_back({m, std::nullopt,
                                               "drift of " + std::string(spec.name) + " from M = " +
                                                   std::to_string(cfg.grids[gi - 1]) + " is " +
                                                   format_double(*row.drift_pct) + "% (limit " +
                                                   format_double(*limit) + "%)"});
                }
            }
            result.rows.push_back(std::move(row));
        }
    }
    for (const auto& [w, n] : warning_counts) result.warnings.push_back(w + " (" + std::to_string(n) + " cases)");

    result.csv = constants_csv(result.rows);
    json rep;
    rep["schema"] = "kclose-experiment/1";
    rep["version"] = library_version();
    rep["config_hash"] = hash;
    rep["config"] = json::parse(config_to_json(cfg));
    auto rows = json::array();
    for (const auto& r : result.rows) {
        json jr = {{"experiment", r.experiment}, {"setting", r.setting}, {"M", r.M},
                   {"p", r.p},                   {"constant", r.constant}, {"value", r.value}};
        jr["argmax_case"] = r.argmax_case ? json(*r.argmax_case) : json(nullptr);
        jr["drift_pct"] = r.drift_pct ? json(*r.drift_pct) : json(nullptr);
        rows.push_back(jr);
    }
    rep["constants"] = rows;
    auto fails = json::array();
    for (const auto& f : result.failures)
        fails.push_back({{"M", f.M}, {"case_id", f.case_id ? json(*f.case_id) : json(nullptr)}, {"what", f.what}});
    rep["failures"] = fails;
    rep["warnings"] = result.warnings;
    auto certs = json::array();
    for (const auto& c : result.certificates) certs.push_back(fs::relative(c, cfg.out_dir).string());
    rep["certificates"] = certs;
    rep["ok"] = result.ok();
    result.report_json = rep.dump(2);

    if (cfg.write_files) {
        fs::create_directories(cfg.out_dir);
        std::ofstream(cfg.out_dir / "constants.csv") << result.csv;
        std::ofstream(cfg.out_dir / "report.json") << result.report_json << '\n';
    }
    return result;
}

}  // namespace kclose
