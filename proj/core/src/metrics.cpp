#include <kclose/metrics.hpp>

#include <algorithm>
#include <cmath>

namespace kclose {

namespace {

std::vector<double> moduli(const GridFunction& f) {
    std::vector<double> m(f.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(f[i]);
    return m;
}

}  // namespace

double lp_norm(const GridFunction& f, double p) {
    if (!(p >= 1.0)) throw DomainError("L^p norm needs p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (cplx z : f.samples()) m = std::max(m, std::abs(z));
        return m;
    }
    double sum = 0.0;
    for (cplx z : f.samples()) sum += std::pow(std::abs(z), p);
    return std::pow(sum * f.domain().measure_weight(), 1.0 / p);
}

double weak_l1(const GridFunction& f) {
    auto m = moduli(f);
    std::sort(m.begin(), m.end(), std::greater<>());
    const double w = f.domain().measure_weight();
    double best = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) best = std::max(best, m[k] * static_cast<double>(k + 1) * w);
    return best;
}

DistributionFunction::DistributionFunction(const GridFunction& f) {
    auto m = moduli(f);
    std::sort(m.begin(), m.end());
    const double w = f.domain().measure_weight();
    const std::size_t total = m.size();
    for (std::size_t i = 0; i < total;) {
        std::size_t j = i;
        while (j < total && m[j] == m[i]) ++j;
        if (m[i] > 0.0) {
            thresholds_.push_back(m[i]);
            masses_.push_back(static_cast<double>(total - i) * w);
        }
        i = j;
    }
}

double DistributionFunction::operator()(double t) const {
    auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), t);
    if (it == thresholds_.end()) return 0.0;
    return masses_[static_cast<std::size_t>(it - thresholds_.begin())];
}

double DistributionFunction::power_integral(double q) const {
    double sum = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
        const double cur = std::pow(thresholds_[i], q);
        sum += masses_[i] * (cur - prev);
        prev = cur;
    }
    return sum;
}

ConstantEstimate estimate_constant(const Operator& op, std::span<const GridFunction> corpus,
                                   const RatioFunctional& functional) {
    if (corpus.empty()) throw DomainError("estimate_constant needs a nonempty corpus");
    ConstantEstimate est;
    est.ratios.resize(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto r = functional(corpus[i], op(corpus[i]));
        if (r.numerator == 0.0 && r.denominator == 0.0) {
            est.ratios[i] = std::nan("");
            est.skipped.push_back(i);
            continue;
        }
        const double value = r.denominator == 0.0 ? kInfinity : r.numerator / r.denominator;
        est.ratios[i] = value;
        if (!est.argmax_case || value > est.sup_ratio) {
            est.sup_ratio = value;
            est.argmax_case = i;
        }
    }
    return est;
}

RatioFunctional lq_ratio(double q) {
    return [q](const GridFunction& in, const GridFunction& out) {
        return Ratio{lp_norm(out, q), lp_norm(in, q)};
    };
}

RatioFunctional weak_type_ratio() {
    return [](const GridFunction& in, const GridFunction& out) {
        return Ratio{weak_l1(out), lp_norm(in, 1.0)};
    };
}

}  // namespace kclose
