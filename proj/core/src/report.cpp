#include <kclose/report.hpp>

#include <kclose/io.hpp>

#include <nlohmann/json.hpp>

#include <fstream>

#ifndef KCLOSE_VERSION
#define KCLOSE_VERSION "0.0.0"
#endif

namespace kclose {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sidecar_name(const fs::path& path, const std::string& field) {
    return path.stem().string() + "." + field + ".bin";
}

void put_grid(json& grids, const fs::path& path, const std::string& field, const GridFunction& f) {
    const auto name = sidecar_name(path, field);
    write_binary(path.parent_path() / name, f);
    grids[field] = name;
}

GridFunction get_grid(const json& grids, const fs::path& path, const std::string& field) {
    if (!grids.contains(field)) throw ConfigError("report lacks grid '" + field + "'");
    const auto file = path.parent_path() / grids.at(field).get<std::string>();
    if (!fs::exists(file)) throw ConfigError("missing sidecar " + file.string());
    return read_binary(file);
}

GridFunction mask_to_grid(const std::vector<std::uint8_t>& mask, const GridDomain& d) {
    std::vector<cplx> v(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) v[i] = mask[i] ? 1.0 : 0.0;
    return GridFunction(d, std::move(v));
}

std::vector<std::uint8_t> grid_to_mask(const GridFunction& f) {
    std::vector<std::uint8_t> m(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) m[i] = f[i].real() > 0.5 ? 1 : 0;
    return m;
}

}  // namespace

std::string library_version() { return KCLOSE_VERSION; }

void write_report(const fs::path& path, const DecompositionReport& rep, const DualDecompositionInput& input,
                  const ReportMeta& meta) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    json j;
    j["schema"] = kReportSchema;
    j["version"] = library_version();
    j["config_hash"] = meta.config_hash;
    j["case_id"] = meta.case_id;
    j["setting"] = json::parse(setting_to_json(input.setting));
    if (!meta.certificate.empty()) j["certificate"] = json::parse(meta.certificate);
    j["p"] = rep.p;
    j["gamma"] = rep.gamma;
    j["r"] = rep.r;
    j["s"] = rep.s;
    j["lambda"] = rep.lambda;
    j["Cg"] = rep.Cg;
    j["Ch"] = rep.Ch;
    j["degenerate"] = rep.degenerate;
    j["residuals"] = {{"identity", rep.residuals.identity},
                      {"Phi_u", rep.residuals.Phi_u},
                      {"Ph", rep.residuals.Ph},
                      {"a", rep.residuals.a}};
    const auto& t = rep.terms;
    j["terms"] = {{"g_term", t.g_term},           {"h_term", t.h_term},
                  {"a_term", t.a_term},           {"b_term", t.b_term},
                  {"b_term_bound", t.b_term_bound}, {"dealias_defect", t.dealias_defect},
                  {"one_minus_Phi", t.one_minus_Phi}, {"h1_tail", t.h1_tail},
                  {"h1_tail_bound", t.h1_tail_bound}};
    j["split_ratios"] = {{"u1", rep.split_ratios.u1},
                         {"u2", rep.split_ratios.u2},
                         {"u3", rep.split_ratios.u3},
                         {"u4", rep.split_ratios.u4}};
    j["first_cutoff"] = {{"slack", rep.first_cutoff_slack},
                         {"degree", rep.first_cutoff_degree},
                         {"refinement", rep.first_refinement}};
    j["second_cutoff"] = {{"slack", rep.second_cutoff_slack},
                          {"o1_ratio", rep.second_cutoff_o1},
                          {"degree", rep.second_cutoff_degree},
                          {"refinement", rep.second_refinement}};
    j["warnings"] = rep.warnings;

    json grids;
    put_grid(grids, path, "f", input.f);
    put_grid(grids, path, "g", input.g);
    put_grid(grids, path, "h", input.h);
    put_grid(grids, path, "g1", rep.g1);
    put_grid(grids, path, "h1", rep.h1);
    if (rep.intermediates) {
        const auto& im = *rep.intermediates;
        put_grid(grids, path, "Pg", im.Pg);
        put_grid(grids, path, "a", im.a);
        put_grid(grids, path, "b", im.b);
        put_grid(grids, path, "E", mask_to_grid(im.exceed, input.f.domain()));
        put_grid(grids, path, "u", im.u);
        put_grid(grids, path, "phi", im.phi);
        put_grid(grids, path, "Phi", im.Phi);
        put_grid(grids, path, "w", im.witness);
        put_grid(grids, path, "Phi_u", im.Phi_u);
        put_grid(grids, path, "Ph", im.Ph);
        put_grid(grids, path, "psi", im.psi);
    }
    j["grids"] = grids;

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

StoredReport read_report(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open report " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("malformed report JSON: " + std::string(e.what()));
    }
    try {
        if (j.value("schema", "") != kReportSchema) throw ConfigError("unsupported report schema in " + path.string());
        const auto& grids = j.at("grids");
        Setting setting = setting_from_json(j.at("setting").dump());
        const double p = j.at("p").get<double>();
        DualDecompositionInput input{get_grid(grids, path, "f"), get_grid(grids, path, "g"),
                                     get_grid(grids, path, "h"), setting, p};
        DecompositionReport rep{.g1 = get_grid(grids, path, "g1"), .h1 = get_grid(grids, path, "h1")};
        rep.p = p;
        rep.gamma = j.at("gamma").get<int>();
        rep.r = j.at("r").get<double>();
        rep.s = j.at("s").get<double>();
        rep.lambda = j.at("lambda").get<double>();
        rep.Cg = j.at("Cg").get<double>();
        rep.Ch = j.at("Ch").get<double>();
        rep.degenerate = j.at("degenerate").get<std::string>();
        const auto& res = j.at("residuals");
        rep.residuals = {res.at("identity").get<double>(), res.at("Phi_u").get<double>(), res.at("Ph").get<double>(),
                         res.at("a").get<double>()};
        const auto& t = j.at("terms");
        rep.terms = {t.at("g_term").get<double>(),        t.at("h_term").get<double>(),
                     t.at("a_term").get<double>(),        t.at("b_term").get<double>(),
                     t.at("b_term_bound").get<double>(),  t.at("dealias_defect").get<double>(),
                     t.at("one_minus_Phi").get<double>(), t.at("h1_tail").get<double>(),
                     t.at("h1_tail_bound").get<double>()};
        const auto& sr = j.at("split_ratios");
        rep.split_ratios = {sr.at("u1").get<double>(), sr.at("u2").get<double>(), sr.at("u3").get<double>(),
                            sr.at("u4").get<double>()};
        rep.first_cutoff_slack = j.at("first_cutoff").at("slack").get<double>();
        rep.first_cutoff_degree = j.at("first_cutoff").at("degree").get<int>();
        rep.first_refinement = j.at("first_cutoff").at("refinement").get<std::size_t>();
        rep.second_cutoff_slack = j.at("second_cutoff").at("slack").get<double>();
        rep.second_cutoff_o1 = j.at("second_cutoff").at("o1_ratio").get<double>();
        rep.second_cutoff_degree = j.at("second_cutoff").at("degree").get<int>();
        rep.second_refinement = j.at("second_cutoff").at("refinement").get<std::size_t>();
        rep.warnings = j.at("warnings").get<std::vector<std::string>>();
        if (grids.contains("Phi_u")) {
            rep.intermediates = DecompositionIntermediates{
                .Pg = get_grid(grids, path, "Pg"),
                .a = get_grid(grids, path, "a"),
                .b = get_grid(grids, path, "b"),
                .exceed = grid_to_mask(get_grid(grids, path, "E")),
                .u = get_grid(grids, path, "u"),
                .phi = get_grid(grids, path, "phi"),
                .Phi = get_grid(grids, path, "Phi"),
                .witness = get_grid(grids, path, "w"),
                .Phi_u = get_grid(grids, path, "Phi_u"),
                .Ph = get_grid(grids, path, "Ph"),
                .psi = get_grid(grids, path, "psi")};
        }
        ReportMeta meta{j.value("config_hash", ""), j.value("case_id", std::uint64_t{0}),
                        j.contains("certificate") ? j.at("certificate").dump() : std::string()};
        return StoredReport{std::move(rep), std::move(input), std::move(meta), j.value("version", "")};
    } catch (const json::exception& e) {
        throw ConfigError("malformed report " + path.string() + ": " + e.what());
    }
}

}  // namespace kclose
