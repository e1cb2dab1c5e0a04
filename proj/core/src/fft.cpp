#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace kclose::detail {

namespace {

struct PlanKey {
    std::size_t n, howmany, stride, dist;
    int sign;
    auto operator<=>(const PlanKey&) const = default;
};

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are made in-place and unaligned so any buffer can reuse them.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(const PlanKey& key) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        const std::size_t extent = (key.howmany - 1) * key.dist + (key.n - 1) * key.stride + 1;
        std::vector<cplx> scratch(extent);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        int n = static_cast<int>(key.n);
        fftw_plan plan = fftw_plan_many_dft(1, &n, static_cast<int>(key.howmany),
                                            buf, nullptr, static_cast<int>(key.stride), static_cast<int>(key.dist),
                                            buf, nullptr, static_cast<int>(key.stride), static_cast<int>(key.dist),
                                            key.sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw Error("FFTW failed to create a plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

}  // namespace

void fft_lines(cplx* data, std::size_t n, std::size_t howmany, std::size_t stride,
               std::size_t dist, FftSign sign) {
    if (n == 0 || howmany == 0) return;
    fftw_plan plan = cache().get({n, howmany, stride, dist, static_cast<int>(sign)});
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, buf, buf);
}

void fft_axis(std::span<cplx> data, const GridDomain& domain, Axis axis, FftSign sign) {
    const std::size_t m = domain.size();
    if (domain.dimension() == 1) {
        fft_lines(data.data(), m, 1, 1, m, sign);
    } else if (axis == Axis::first) {
        // columns: stride M between elements, consecutive lines adjacent
        fft_lines(data.data(), m, m, m, 1, sign);
    } else {
        fft_lines(data.data(), m, m, 1, m, sign);
    }
}

void fft_grid(std::span<cplx> data, const GridDomain& domain, FftSign sign) {
    fft_axis(data, domain, Axis::first, sign);
    if (domain.dimension() == 2) fft_axis(data, domain, Axis::second, sign);
}

}  // namespace kclose::detail
