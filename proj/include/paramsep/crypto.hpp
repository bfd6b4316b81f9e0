#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "paramsep/bitvec.hpp"
#include "paramsep/rng.hpp"

namespace paramsep {

/// Seed expander: AES-128 under a fixed key, run in counter mode over (seed, kernel tag).
/// Distinct kernel tags give independent generators (f1, f2, sampler, ...).
struct ToyPrg {
    unsigned seed_bits = 0;  ///< at most 64
    std::size_t out_bits = 0;
    std::uint32_t kernel = 0;
};

/// Throws std::invalid_argument if the seed length differs from g.seed_bits.
BitVector prg_expand(const BitVector& seed, const ToyPrg& g);
BitVector prg_expand(std::uint64_t seed, const ToyPrg& g);

/// Smallest seed whose expansion equals `target`, by exhaustive search. Requires
/// seed_bits <= 24. The answer does not depend on `workers`.
std::optional<std::uint64_t> prg_invert(const BitVector& target, const ToyPrg& g, unsigned workers = 1);

inline constexpr unsigned kMaxInvertibleSeedBits = 24;

/// Lamport one-time signature on a single bit, over SHA-256 truncated to hash_bits.
/// Signing keys (and so signatures) are preimage_bits wide.
struct OtsParams {
    unsigned hash_bits = 0;      ///< 1..64
    unsigned preimage_bits = 0;  ///< 1..64
};

struct OtsKeys {
    OtsParams params;
    std::array<std::uint64_t, 2> vk{};
    std::array<std::uint64_t, 2> sk{};
};

using Signature = std::uint64_t;

std::uint64_t ots_hash(std::uint64_t preimage, const OtsParams& p);

OtsKeys ots_gen(const OtsParams& p, CounterRng& rng);
Signature ots_sign(const OtsKeys& keys, bool bit);
bool ots_verify(const std::array<std::uint64_t, 2>& vk, const OtsParams& p, bool bit, Signature sig);

/// Exhaustive preimage search for vk[target_bit] over the first `effort` candidate
/// signatures (0, 1, 2, ...). With effort >= 2^preimage_bits it always succeeds.
std::optional<Signature> ots_forge(const std::array<std::uint64_t, 2>& vk, const OtsParams& p, bool target_bit,
                                   std::uint64_t effort, unsigned workers = 1);

}  // namespace paramsep
