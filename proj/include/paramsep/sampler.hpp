#pragma once

#include <cstdint>
#include <vector>

#include "paramsep/bitvec.hpp"
#include "paramsep/stat.hpp"

namespace paramsep {

/// Seeded choice of t distinct indices from {0, ..., universe-1}: a partial Fisher-Yates shuffle
/// driven by prg_expand(seed), keeping the first t positions. Indices are 0-based.
struct SubsetSampler {
    unsigned r = 0;  ///< seed bits, 1..64
    std::uint32_t universe = 0;
    std::uint32_t t = 0;
    std::uint32_t kernel = 0;  ///< PRG kernel tag
};

/// ceil(sqrt(universe)) rounded up to a whole byte, capped at 64.
unsigned default_seed_bits(std::uint32_t universe);
SubsetSampler make_sampler(std::uint32_t universe, std::uint32_t t, std::uint32_t kernel);

/// Ascending list of t indices. Throws std::invalid_argument if |seed| != r.
std::vector<std::uint32_t> samp(const BitVector& seed, const SubsetSampler& s);
std::vector<std::uint32_t> samp(std::uint64_t seed, const SubsetSampler& s);

inline constexpr std::uint32_t kMaxExhaustiveUniverse = 20;

struct SamplerReport {
    Real floor_bits = 0;           ///< (mu - kappa1) t
    std::vector<Real> restricted_entropy;  ///< H(X restricted to samp(seed)), one per seed
    Real joint_deficiency = 0;     ///< SD of (U_r, X_samp(U_r)) from the nearest (U_r, Y) meeting the floor
    Real max_deficiency = 0;       ///< worst single seed
    Real deficient_seed_fraction = 0;
    Real tolerance = 0;
    bool pass = false;             ///< joint_deficiency <= tolerance
};

/// Exact check over every seed (requires universe <= 20 and r <= 16) for a source X over
/// {0,1}^universe with H(X) >= mu * universe.
SamplerReport validate_entropy_preservation(const SubsetSampler& s, const Dist& source, Real mu, Real kappa1,
                                            Real tolerance);

}  // namespace paramsep
