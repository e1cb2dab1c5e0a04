#include <kclose/io.hpp>

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace kclose {

namespace {

static_assert(std::endian::native == std::endian::little, "binary grid format assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    out.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    char bytes[sizeof(T)];
    if (!in.read(bytes, sizeof(T))) throw ConfigError("truncated grid file");
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

void write_binary(std::ostream& out, const GridFunction& f) {
    out.write(kGridMagic, 4);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(f.domain().dimension()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(f.domain().size()));
    for (cplx z : f.samples()) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
    }
    if (!out) throw ConfigError("failed writing grid data");
}

GridFunction read_binary(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kGridMagic, 4) != 0) throw ConfigError("bad grid file magic");
    const auto dim = get<std::uint32_t>(in);
    const auto m = get<std::uint64_t>(in);
    GridDomain domain(static_cast<int>(dim), static_cast<std::size_t>(m));
    std::vector<cplx> samples(domain.point_count());
    for (auto& z : samples) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        z = {re, im};
    }
    return GridFunction(domain, std::move(samples));
}

void write_binary(const std::filesystem::path& path, const GridFunction& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    write_binary(out, f);
}

GridFunction read_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    return read_binary(in);
}

std::string to_json_text(const GridFunction& f) {
    nlohmann::json j;
    j["dimension"] = f.domain().dimension();
    j["M"] = f.domain().size();
    auto& arr = j["samples"] = nlohmann::json::array();
    for (cplx z : f.samples()) arr.push_back({z.real(), z.imag()});
    return j.dump();
}

GridFunction from_json_text(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        GridDomain domain(j.at("dimension").get<int>(), j.at("M").get<std::size_t>());
        std::vector<cplx> samples;
        samples.reserve(domain.point_count());
        for (const auto& pair : j.at("samples")) samples.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
        return GridFunction(domain, std::move(samples));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed grid JSON: ") + e.what());
    }
}

}  // namespace kclose
