#include "lines.hpp"

#include "fft.hpp"

namespace kclose::detail {

std::vector<cplx> refine_lines(const GridFunction& f, Axis axis, std::size_t factor) {
    const auto& d = f.domain();
    d.check_axis(axis);
    const std::size_t m = d.size();
    const std::size_t fine_m = factor * m;
    const std::size_t lines = line_count(d);

    std::vector<cplx> coarse(m);
    std::vector<cplx> fine(lines * fine_m, cplx{});
    for (std::size_t r = 0; r < lines; ++r) {
        for (std::size_t t = 0; t < m; ++t) coarse[t] = f[line_element(d, axis, r, t)];
        fft(coarse, FftSign::forward);
        cplx* out = fine.data() + r * fine_m;
        for (std::size_t i = 0; i < m; ++i) {
            const long k = fft_frequency(i, m);
            out[fft_index(k, fine_m)] = coarse[i] / static_cast<double>(m);
        }
    }
    fft_lines(fine.data(), fine_m, lines, 1, fine_m, FftSign::backward);
    return fine;
}

GridFunction restrict_lines(std::vector<cplx> fine, const GridDomain& d, Axis axis, std::size_t factor) {
    const std::size_t m = d.size();
    const std::size_t fine_m = factor * m;
    const std::size_t lines = line_count(d);
    fft_lines(fine.data(), fine_m, lines, 1, fine_m, FftSign::forward);

    std::vector<cplx> out(d.point_count());
    std::vector<cplx> coarse(m);
    for (std::size_t r = 0; r < lines; ++r) {
        const cplx* in = fine.data() + r * fine_m;
        for (std::size_t i = 0; i < m; ++i) {
            const long k = fft_frequency(i, m);
            coarse[i] = in[fft_index(k, fine_m)] / static_cast<double>(fine_m);
        }
        fft(coarse, FftSign::backward);
        for (std::size_t t = 0; t < m; ++t) out[line_element(d, axis, r, t)] = coarse[t];
    }
    return GridFunction(d, std::move(out));
}

}  // namespace kclose::detail
