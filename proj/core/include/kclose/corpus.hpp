#pragma once

#include <kclose/grid.hpp>
#include <kclose/settings.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace kclose {

/// How corpus functions are drawn.
///   random_polynomial: random trigonometric polynomials of fixed degree.
///   spike: Fejer kernels of random order (8..64) at random centers, i.e.
///          approximate point masses of unit L1 norm.
///   two_scale: an L1-heavy and an Lq-heavy part whose ratio r/s cycles
///              through 0.01, 1 and 100.
enum class CorpusLaw { random_polynomial, spike, two_scale };

std::string to_string(CorpusLaw law);
/// Throws ConfigError for an unknown name.
CorpusLaw parse_corpus_law(std::string_view name);

struct CorpusSpec {
    std::uint64_t seed = 1;
    std::size_t count = 10;
    CorpusLaw law = CorpusLaw::random_polynomial;
    double amplitude = 1.0;  ///< overall scale; 0 gives phi = 1 for cut-off corpora
};

/// One case of a decomposition corpus: f = g + h with f built as an explicit
/// sum of a C_perp and a D_perp member.
struct CorpusCase {
    std::size_t id = 0;
    GridFunction f;
    GridFunction g;
    GridFunction h;
    std::string certificate;  ///< JSON text: law, seed, masks, sets and scales used
};

/// Counter-based seeding: each (seed, id) pair gets its own engine, so single
/// cases can be regenerated without the rest of the corpus. Draws never depend
/// on the grid size.
std::mt19937_64 case_engine(std::uint64_t seed, std::uint64_t id);

/// Trigonometric polynomial of fixed degree with random coefficients, lying in
/// the given annihilator of the setting (C_perp or D_perp).
GridFunction random_member(const Setting& s, Space target, std::mt19937_64& rng);

/// Decomposition cases f = g + h. p fixes q = p/(p-1), used by the two_scale
/// law to hit r/s = ||g||_1 / ||h||_q exactly.
CorpusCase generate_case(const CorpusSpec& spec, const Setting& s, std::size_t id, double p = 2.0);
std::vector<CorpusCase> generate_corpus(const CorpusSpec& spec, const Setting& s, double p = 2.0);

/// phi >= 1 for cut-off experiments.
GridFunction generate_phi(const CorpusSpec& spec, const GridDomain& d, std::size_t id);

/// A member of C_perp for split experiments.
GridFunction generate_split_input(const CorpusSpec& spec, const Setting& s, std::size_t id);

/// An L1 input for the weak-type estimate of P.
GridFunction generate_weak_input(const CorpusSpec& spec, const GridDomain& d, std::size_t id);

}  // namespace kclose
