#pragma once

#include <kclose/decompose.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace kclose {

inline constexpr const char* kReportSchema = "kclose-report/1";

/// Version string compiled into the library.
std::string library_version();

struct ReportMeta {
    std::string config_hash;
    std::uint64_t case_id = 0;
    std::string certificate;  ///< JSON text describing how the case was built
};

/// A report read back from disk together with the input it was computed from.
struct StoredReport {
    DecompositionReport report;
    DualDecompositionInput input;
    ReportMeta meta;
    std::string version;
};

/// Writes `path` (JSON, scalars inline) plus one binary sidecar per grid
/// function, named <stem>.<field>.bin next to it.
void write_report(const std::filesystem::path& path, const DecompositionReport& report,
                  const DualDecompositionInput& input, const ReportMeta& meta);

/// Throws ConfigError for a missing file, a wrong schema, or a missing sidecar.
StoredReport read_report(const std::filesystem::path& path);

}  // namespace kclose
