#pragma once

#include <kclose/grid.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace kclose {

// Binary layout (little-endian):
//   bytes 0..3   magic "KCGF"
//   bytes 4..7   uint32 dimension (1 or 2)
//   bytes 8..15  uint64 M
//   then M^d pairs of float64 (re, im) in row-major order.
inline constexpr char kGridMagic[4] = {'K', 'C', 'G', 'F'};
inline constexpr std::size_t kGridHeaderBytes = 16;

void write_binary(std::ostream& out, const GridFunction& f);
GridFunction read_binary(std::istream& in);
void write_binary(const std::filesystem::path& path, const GridFunction& f);
GridFunction read_binary(const std::filesystem::path& path);

/// {"dimension": d, "M": m, "samples": [[re, im], ...]} for small fixtures.
std::string to_json_text(const GridFunction& f);
GridFunction from_json_text(std::string_view text);

}  // namespace kclose
