#include <kclose/settings.hpp>

#include "lines.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace kclose {

namespace {

constexpr long kNoBound = std::numeric_limits<long>::max();
constexpr double kModuleTolerance = 1e-8;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + s + "'");
    }
    if (used != s.size()) throw ConfigError("cannot parse number '" + s + "'");
    return v;
}

// 0.5 | 0.3i | -0.2+0.4i | i | -i
cplx parse_complex(std::string_view token) {
    std::string t = trim(token);
    if (t.empty()) throw ConfigError("empty complex literal");
    if (t.back() != 'i') return {parse_real(t), 0.0};
    t.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_of = [](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return parse_real(s);
    };
    if (split == std::string::npos) return {0.0, imag_of(t)};
    return {parse_real(t.substr(0, split)), imag_of(t.substr(split))};
}

std::string format_complex(cplx z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() >= 0 ? "+" : "") << z.imag() << "i";
    return os.str();
}

}  // namespace

InnerFunction InnerFunction::monomial(int power) {
    if (power < 0) throw DomainError("monomial inner function needs k >= 0");
    InnerFunction f;
    f.kind_ = Kind::monomial;
    f.power_ = power;
    return f;
}

InnerFunction InnerFunction::blaschke(std::vector<cplx> zeros, cplx unimodular) {
    for (cplx a : zeros)
        if (!(std::abs(a) < 1.0)) throw DomainError("Blaschke zero " + format_complex(a) + " is not inside the unit disk");
    if (std::abs(std::abs(unimodular) - 1.0) > 1e-12) throw DomainError("Blaschke constant must be unimodular");
    InnerFunction f;
    f.kind_ = Kind::blaschke;
    f.zeros_ = std::move(zeros);
    f.unimodular_ = unimodular;
    return f;
}

cplx InnerFunction::evaluate(cplx z) const {
    if (kind_ == Kind::monomial) return std::pow(z, power_);
    cplx v = unimodular_;
    for (cplx a : zeros_) v *= (z - a) / (1.0 - std::conj(a) * z);
    return v;
}

GridFunction InnerFunction::sample(const GridDomain& domain) const {
    if (domain.dimension() != 1) throw DomainError("inner functions are sampled on the circle");
    const std::size_t m = domain.size();
    std::vector<cplx> v(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (kind_ == Kind::monomial) {
            const std::size_t reduced = (static_cast<std::size_t>(power_) * j) % m;
            v[j] = std::polar(1.0, domain.angle(reduced));
        } else {
            v[j] = evaluate(std::polar(1.0, domain.angle(j)));
        }
    }
    return GridFunction(domain, std::move(v));
}

std::string InnerFunction::describe() const {
    if (kind_ == Kind::monomial) return "monomial:" + std::to_string(power_);
    std::string s = "blaschke:";
    for (std::size_t i = 0; i < zeros_.size(); ++i) s += (i ? "," : "") + format_complex(zeros_[i]);
    return s;
}

InnerFunction InnerFunction::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string kind = trim(spec.substr(0, colon));
    const std::string rest = colon == std::string_view::npos ? std::string{} : trim(spec.substr(colon + 1));
    if (kind == "monomial") {
        if (rest.empty()) throw ConfigError("monomial theta needs a power, e.g. monomial:2");
        return monomial(static_cast<int>(parse_real(rest)));
    }
    if (kind == "blaschke") {
        std::vector<cplx> zeros;
        std::size_t start = 0;
        while (start <= rest.size() && !rest.empty()) {
            const auto comma = rest.find(',', start);
            zeros.push_back(parse_complex(std::string_view(rest).substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return blaschke(std::move(zeros));
    }
    throw ConfigError("unknown theta kind '" + kind + "' (expected monomial or blaschke)");
}

std::string to_string(SettingKind kind) { return kind == SettingKind::model_space ? "model_space" : "bitorus"; }

std::string to_string(Space space) {
    switch (space) {
        case Space::C_perp: return "C_perp";
        case Space::D_perp: return "D_perp";
        case Space::A: return "A";
        case Space::B: return "B";
        case Space::C: return "C";
        case Space::D: return "D";
    }
    return "?";
}

Setting::Setting(SettingKind kind, GridDomain domain, std::optional<InnerFunction> theta)
    : kind_(kind), domain_(domain), theta_(std::move(theta)) {
    if (theta_) theta_samples_ = theta_->sample(domain_);
}

Setting Setting::model_space(GridDomain domain, InnerFunction theta) {
    if (domain.dimension() != 1) throw DomainError("model_space setting lives on the circle");
    return Setting(SettingKind::model_space, domain, std::move(theta));
}

Setting Setting::bitorus(GridDomain domain) {
    if (domain.dimension() != 2) throw DomainError("bitorus setting needs a 2D grid");
    return Setting(SettingKind::bitorus, domain, std::nullopt);
}

const GridFunction& Setting::theta_samples() const {
    if (!theta_samples_) throw DomainError("setting has no inner function");
    return *theta_samples_;
}

SpectralSupport Setting::support(Space space) const {
    if (space == Space::C) space = Space::A;
    if (kind_ == SettingKind::model_space) {
        switch (space) {
            case Space::A: return {Axis::first, 0, kNoBound, false};
            case Space::B: return {Axis::first, -kNoBound, 0, false};
            case Space::D: return {Axis::first, -kNoBound, 0, true};
            case Space::C_perp: return {Axis::first, -kNoBound, -1, false};
            case Space::D_perp: return {Axis::first, 1, kNoBound, true};
            default: break;
        }
    } else {
        if (space == Space::D) space = Space::B;
        switch (space) {
            case Space::A: return {Axis::first, 0, kNoBound, false};
            case Space::B: return {Axis::second, 0, kNoBound, false};
            case Space::C_perp: return {Axis::first, -kNoBound, -1, false};
            case Space::D_perp: return {Axis::second, -kNoBound, -1, false};
            default: break;
        }
    }
    throw DomainError("unsupported space");
}

AlgebraSide Setting::module_algebra(Space target) const {
    if (target == Space::C_perp) return {Side::anti_analytic, Axis::first};
    if (target == Space::D_perp) {
        if (kind_ == SettingKind::model_space) return {Side::analytic, Axis::first};
        return {Side::anti_analytic, Axis::second};
    }
    throw DomainError("module algebras are defined for C_perp and D_perp only");
}

Setting Setting::with_size(std::size_t m) const {
    GridDomain d(domain_.dimension(), m);
    return Setting(kind_, d, theta_);
}

std::string Setting::describe() const {
    std::string s = to_string(kind_) + " M=" + std::to_string(domain_.size());
    if (theta_) s += " theta=" + theta_->describe();
    return s;
}

double support_residual(const GridFunction& f, const SpectralSupport& support, const Setting& s) {
    if (!(f.domain() == s.domain())) throw DomainError("function and setting live on different grids");
    if (!support.twisted) return spectral_residual(f, support);
    auto plain = support;
    plain.twisted = false;
    return spectral_residual(multiply(s.theta_samples().conj(), f), plain);
}

double membership_residual(const GridFunction& f, Space space, const Setting& s) {
    return support_residual(f, s.support(space), s);
}

GridFunction project_P(const GridFunction& f, const Setting& s) {
    if (!(f.domain() == s.domain())) throw DomainError("function and setting live on different grids");
    return riesz_neg(f, s.projection_axis());
}

GridFunction multiply_into_module(const GridFunction& phi, const GridFunction& f, Space target, const Setting& s) {
    const AlgebraSide algebra = s.module_algebra(target);
    const double phi_residual = support_residual(phi, algebra_support(algebra), s);
    const double f_residual = membership_residual(f, target, s);
    if (phi_residual > kModuleTolerance || f_residual > kModuleTolerance)
        throw ModuleStructureError(phi_residual, f_residual,
                                   "inputs are not in the module: multiplier residual " + std::to_string(phi_residual) +
                                       ", " + to_string(target) + " residual " + std::to_string(f_residual));

    constexpr std::size_t factor = 2;
    auto fine_phi = detail::refine_lines(phi, algebra.axis, factor);
    const auto fine_f = detail::refine_lines(f, algebra.axis, factor);
    for (std::size_t i = 0; i < fine_phi.size(); ++i) fine_phi[i] *= fine_f[i];
    auto product = detail::restrict_lines(std::move(fine_phi), s.domain(), algebra.axis, factor);

    const double input = std::max(phi_residual, f_residual);
    const double output = membership_residual(product, target, s);
    if (output > 10.0 * input + 1e-10)
        throw ModuleStructureError(input, output,
                                   "product left " + to_string(target) + ": input residual " + std::to_string(input) +
                                       ", product residual " + std::to_string(output));
    return product;
}

Setting setting_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        const auto name = j.at("setting").get<std::string>();
        const auto m = j.at("M").get<std::size_t>();
        if (name == "bitorus") return Setting::bitorus(GridDomain(2, m));
        if (name != "model_space") throw ConfigError("unknown setting '" + name + "'");
        if (!j.contains("theta")) return Setting::model_space(GridDomain(1, m), InnerFunction::monomial(2));
        const auto& t = j.at("theta");
        const auto kind = t.at("kind").get<std::string>();
        if (kind == "monomial")
            return Setting::model_space(GridDomain(1, m), InnerFunction::monomial(t.at("k").get<int>()));
        if (kind == "blaschke") {
            std::vector<cplx> zeros;
            for (const auto& z : t.at("zeros")) zeros.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
            cplx c = 1.0;
            if (t.contains("constant")) c = {t["constant"].at(0).get<double>(), t["constant"].at(1).get<double>()};
            return Setting::model_space(GridDomain(1, m), InnerFunction::blaschke(std::move(zeros), c));
        }
        throw ConfigError("unknown theta kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed setting JSON: ") + e.what());
    }
}

std::string setting_to_json(const Setting& s) {
    nlohmann::json j;
    j["setting"] = to_string(s.kind());
    j["M"] = s.domain().size();
    if (const auto& theta = s.theta()) {
        if (theta->kind() == InnerFunction::Kind::monomial) {
            j["theta"] = {{"kind", "monomial"}, {"k", theta->power()}};
        } else {
            auto zeros = nlohmann::json::array();
            for (cplx a : theta->zeros()) zeros.push_back({a.real(), a.imag()});
            j["theta"] = {{"kind", "blaschke"},
                          {"zeros", zeros},
                          {"constant", {theta->unimodular().real(), theta->unimodular().imag()}}};
        }
    }
    return j.dump();
}

Setting make_setting(std::string_view name, std::size_t m, std::string_view theta_spec) {
    if (name == "bitorus") return Setting::bitorus(GridDomain(2, m));
    if (name == "model_space") return Setting::model_space(GridDomain(1, m), InnerFunction::parse(theta_spec));
    throw ConfigError("unknown setting '" + std::string(name) + "' (expected model_space or bitorus)");
}

}  // namespace kclose
