#pragma once

#include <kclose/corpus.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kclose {

enum class Pipeline { cutoff, split, decompose, weaktype };

std::string to_string(Pipeline pipeline);
Pipeline parse_pipeline(std::string_view name);

/// One experiment: a pipeline run over a seeded corpus on several grid sizes.
///
/// JSON form:
///   {"pipeline": "decompose",
///    "setting": {"setting": "model_space", "theta": {"kind": "monomial", "k": 2}},
///    "p": 2, "gamma": 3, "smoothing_degree": 32,
///    "grids": [512, 1024],
///    "corpus": {"seed": 1, "count": 50, "law": "two_scale", "amplitude": 1},
///    "lambda_sweep": [0.0625, ..., 16],
///    "outputs": {"dir": "kclose-out"}, "threads": 4}
/// "setting" may also be a bare name with a separate "theta": "monomial:2".
struct ExperimentConfig {
    Pipeline pipeline = Pipeline::decompose;
    std::string setting = "model_space";
    std::string theta = "monomial:2";
    double p = 2.0;
    std::optional<int> gamma;             ///< default: smallest admissible integer > p
    std::optional<int> smoothing_degree;  ///< default: adaptive
    std::vector<std::size_t> grids = {512, 1024};
    CorpusSpec corpus;
    std::vector<double> lambda_sweep = {0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
    std::filesystem::path out_dir = "kclose-out";
    bool write_files = true;
    std::optional<std::size_t> threads;

    int effective_gamma() const;
    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& cfg);
/// FNV-1a (64 bit, hex) of the canonical JSON, excluding output paths and thread count.
std::string config_hash(const ExperimentConfig& cfg);

/// One line of the constants table.
struct ConstantRow {
    std::string experiment;
    std::string setting;
    std::size_t M = 0;
    double p = 0.0;
    std::string constant;
    double value = 0.0;
    std::optional<std::size_t> argmax_case;
    std::optional<double> drift_pct;  ///< relative change from the previous grid size
};

struct InvariantFailure {
    std::size_t M = 0;
    std::optional<std::size_t> case_id;
    std::string what;
};

struct ExperimentResult {
    std::vector<ConstantRow> rows;
    std::vector<InvariantFailure> failures;
    std::vector<std::string> warnings;
    std::vector<std::filesystem::path> certificates;
    std::string csv;
    std::string report_json;

    bool ok() const noexcept { return failures.empty(); }
    /// Row for (constant, M); throws std::out_of_range if absent.
    const ConstantRow& row(std::string_view constant, std::size_t m) const;
};

/// Drift limit in percent for a constant, or empty when drift is only recorded.
std::optional<double> drift_threshold_pct(Pipeline pipeline, std::string_view constant);

/// Worker count: KCLOSE_THREADS if set, else `requested`, else hardware concurrency.
std::size_t worker_count(std::optional<std::size_t> requested = std::nullopt);

/// Runs the pipeline over corpus x grids. Cases run in parallel and are merged
/// in case-id order, so output is byte-identical for identical configs.
/// Writes constants.csv, report.json and certificates/ under cfg.out_dir when
/// cfg.write_files is set. The case-0 decomposition of every grid and every
/// failing case are dumped as certificates.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// CSV with header experiment,setting,M,p,constant,value,argmax_case,drift_pct.
std::string constants_csv(const std::vector<ConstantRow>& rows);

}  // namespace kclose
