// kclose: run decomposition experiments, generate corpora, and check reports.

#include <kclose/corpus.hpp>
#include <kclose/decompose.hpp>
#include <kclose/experiment.hpp>
#include <kclose/io.hpp>
#include <kclose/report.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<std::size_t> grids;
    std::optional<std::size_t> cases;
    std::string setting;
    std::string theta;
    std::optional<double> p;
    std::string law;
    std::optional<int> gamma;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--seed", f.seed, "corpus seed (u64)");
    cmd->add_option("--grid", f.grids, "grid sizes M")->delimiter(',');
    cmd->add_option("--cases", f.cases, "corpus size");
    cmd->add_option("--setting", f.setting, "model_space | bitorus");
    cmd->add_option("--theta", f.theta, "monomial:k | blaschke:a1,a2,...");
    cmd->add_option("--p", f.p, "exponent p in (1, inf)");
    cmd->add_option("--law", f.law, "random_polynomial | spike | two_scale");
    cmd->add_option("--gamma", f.gamma, "cut-off exponent (default: smallest integer > p)");
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw kclose::ConfigError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

kclose::ExperimentConfig build_config(const CommonFlags& f) {
    kclose::ExperimentConfig cfg = f.config.empty() ? kclose::ExperimentConfig{} : kclose::config_from_json(slurp(f.config));
    if (!f.out.empty()) cfg.out_dir = f.out;
    if (f.seed) cfg.corpus.seed = *f.seed;
    if (!f.grids.empty()) cfg.grids = f.grids;
    if (f.cases) cfg.corpus.count = *f.cases;
    if (!f.setting.empty()) cfg.setting = f.setting;
    if (!f.theta.empty()) cfg.theta = f.theta;
    if (f.p) cfg.p = *f.p;
    if (!f.law.empty()) cfg.corpus.law = kclose::parse_corpus_law(f.law);
    if (f.gamma) cfg.gamma = *f.gamma;
    cfg.validate();
    return cfg;
}

int run_pipeline(kclose::Pipeline pipeline, const CommonFlags& flags) {
    auto cfg = build_config(flags);
    cfg.pipeline = pipeline;
    const auto result = kclose::run_experiment(cfg);
    std::cout << result.csv;
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : result.failures) {
        std::cerr << "FAIL M=" << f.M;
        if (f.case_id) std::cerr << " case=" << *f.case_id;
        std::cerr << ": " << f.what << '\n';
    }
    std::cerr << (result.ok() ? "all invariants hold" : "invariant failures: " + std::to_string(result.failures.size()))
              << " (config " << kclose::config_hash(cfg) << ", output in " << cfg.out_dir.string() << ")\n";
    return result.ok() ? 0 : 1;
}

bool verify_one(const fs::path& path) {
    const auto stored = kclose::read_report(path);
    const auto v = kclose::verify_report(stored.report, stored.input);
    std::cout << (v.ok ? "ACCEPT " : "REJECT ") << path.string() << '\n';
    for (const auto& d : v.diagnostics) std::cout << "  " << d << '\n';
    return v.ok;
}

int run_verify(const fs::path& path) {
    const auto text = slurp(path);
    const auto j = nlohmann::json::parse(text);
    if (j.value("schema", "") == "kclose-experiment/1") {
        bool ok = true;
        std::size_t checked = 0;
        for (const auto& c : j.at("certificates")) {
            const fs::path cert = path.parent_path() / c.get<std::string>();
            if (cert.filename().string().rfind("decompose_", 0) != 0) continue;
            ok = verify_one(cert) && ok;
            ++checked;
        }
        std::cout << checked << " decomposition certificates checked\n";
        return ok ? 0 : 1;
    }
    return verify_one(path) ? 0 : 1;
}

int run_corpus(const CommonFlags& flags) {
    auto cfg = build_config(flags);
    const std::size_t m = cfg.grids.front();
    const auto setting = kclose::make_setting(cfg.setting, m, cfg.theta);
    const auto cases = kclose::generate_corpus(cfg.corpus, setting, cfg.p);
    fs::create_directories(cfg.out_dir);
    nlohmann::json index;
    index["schema"] = "kclose-corpus/1";
    index["version"] = kclose::library_version();
    index["config_hash"] = kclose::config_hash(cfg);
    index["setting"] = nlohmann::json::parse(kclose::setting_to_json(setting));
    auto list = nlohmann::json::array();
    for (const auto& c : cases) {
        const std::string stem = "case" + std::to_string(c.id);
        kclose::write_binary(cfg.out_dir / (stem + ".f.bin"), c.f);
        kclose::write_binary(cfg.out_dir / (stem + ".g.bin"), c.g);
        kclose::write_binary(cfg.out_dir / (stem + ".h.bin"), c.h);
        list.push_back({{"id", c.id},
                        {"f", stem + ".f.bin"},
                        {"g", stem + ".g.bin"},
                        {"h", stem + ".h.bin"},
                        {"certificate", nlohmann::json::parse(c.certificate)}});
    }
    index["cases"] = list;
    std::ofstream(cfg.out_dir / "corpus.json") << index.dump(2) << '\n';
    std::cout << cases.size() << " cases written to " << cfg.out_dir.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kclose: cut-off decompositions for Hardy-type annihilators"};
    app.require_subcommand(1);
    CommonFlags flags;

    auto* cutoff = app.add_subcommand("cutoff", "cut-off construction over a phi corpus");
    auto* split = app.add_subcommand("split", "level splitting over a lambda sweep");
    auto* decompose = app.add_subcommand("decompose", "end-to-end decompositions f = g1 + h1");
    auto* weak = app.add_subcommand("weaktype", "weak type (1,1) constant of P");
    auto* corpus = app.add_subcommand("corpus", "write a decomposition corpus to --out");
    for (auto* cmd : {cutoff, split, decompose, weak, corpus}) add_common(cmd, flags);

    std::string report_path;
    auto* verify = app.add_subcommand("verify", "check a stored report (or every decomposition certificate of an experiment)");
    verify->add_option("report", report_path, "report JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage errors share the config-error exit code; --help still exits 0
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (*cutoff) return run_pipeline(kclose::Pipeline::cutoff, flags);
        if (*split) return run_pipeline(kclose::Pipeline::split, flags);
        if (*decompose) return run_pipeline(kclose::Pipeline::decompose, flags);
        if (*weak) return run_pipeline(kclose::Pipeline::weaktype, flags);
        if (*corpus) return run_corpus(flags);
        if (*verify) return run_verify(report_path);
    } catch (const kclose::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
