#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "paramsep/bitvec.hpp"
#include "paramsep/coding.hpp"
#include "paramsep/crypto.hpp"
#include "paramsep/field.hpp"
#include "paramsep/rng.hpp"
#include "paramsep/sampler.hpp"

namespace paramsep {

/// A wrapped segment could not be decoded (corruption beyond the wrapper radius).
struct DecodeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// PRG kernel tags. Each role gets its own generator.
inline constexpr std::uint32_t kKernelF1 = 0x0F1;
inline constexpr std::uint32_t kKernelF2 = 0x0F2;
inline constexpr std::uint32_t kKernelSamp1 = 0x5A1;
inline constexpr std::uint32_t kKernelSamp2 = 0x5A2;
inline constexpr std::uint32_t kKernelSampC2 = 0x5C2;

struct Segment {
    std::string name;
    std::size_t offset = 0;
    std::size_t length = 0;
};

/// Index of the segment containing flat position `pos`. Throws std::out_of_range past the end.
std::size_t segment_of(std::span<const Segment> manifest, std::size_t pos);

// ---------------------------------------------------------------------------
// Construction 1: ([u1], [u2], m, Enc(m) + f2(s)|samp2(u2)), label <m, f1(s)|samp1(u1)>.

struct TaskParams1 {
    std::string name;
    unsigned lambda = 0;
    unsigned ell = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t alpha = 0;
    std::size_t beta = 0;
    RsCode enc;
    SubsetSampler samp1;  ///< k*ell indices out of alpha
    SubsetSampler samp2;  ///< n*ell indices out of beta
    ToyPrg f1;
    ToyPrg f2;
    WrapCode wrap_u1;
    WrapCode wrap_u2;
    std::size_t budget = 0;  ///< floor((1 - R) n / 2) = floor((n - k) / 2)

    const Field& field() const noexcept { return enc.field(); }
    double rate() const noexcept { return enc.rate(); }
    std::size_t length() const noexcept { return wrap_u1.length() + wrap_u2.length() + k + n; }
};

/// Validates lambda < alpha <= beta and 3k < n, and sizes both wrappers to the budget.
TaskParams1 make_task1(std::string name, unsigned lambda, unsigned ell, std::size_t n, std::size_t k,
                       std::size_t alpha, std::size_t beta);

struct Instance1 {
    Codeword u1_enc;
    Codeword u2_enc;
    SymbolVector m;
    Codeword masked;

    friend bool operator==(const Instance1&, const Instance1&) = default;
};

/// Ground-truth strings: P (alpha bits) drives the label, Q (beta bits) the mask.
struct Secret1 {
    BitVector p;
    BitVector q;
};

/// P = f1(s), Q = f2(s). Throws if s does not fit in lambda bits.
Secret1 expand_secret1(std::uint64_t s, const TaskParams1& params);

struct Sample1 {
    Instance1 x;
    bool label = false;
};

/// Restriction of `bits` to the sampled indices, packed ell bits per symbol.
SymbolVector restricted_symbols(const BitVector& bits, std::span<const std::uint32_t> idx, unsigned ell);

Sample1 sample_c1(const Secret1& secret, const TaskParams1& params, CounterRng& rng);
Sample1 sample_c1(std::uint64_t s, const TaskParams1& params, CounterRng& rng);

/// Wrapper payload as an integer seed. Throws DecodeFailure.
std::uint64_t decode_seed(const WrapCode& wrap, std::span<const Symbol> word);

/// h_P(x) = <m, P|samp1(u1)> with u1 recovered from its wrapper. Throws DecodeFailure.
bool label_c1(const Instance1& x, const TaskParams1& params, const BitVector& p);
bool label_c1(const Instance1& x, const TaskParams1& params, std::uint64_t s);

std::vector<Segment> manifest(const TaskParams1& params);
SymbolVector flatten(const Instance1& x);
/// Throws std::invalid_argument on length mismatch.
Instance1 unflatten1(std::span<const Symbol> flat, const TaskParams1& params);

// ---------------------------------------------------------------------------
// Construction 2: ([u], [v], [vk], LEnc(b, Sign(sk, b)), [b + <v, s|samp(u)>]), label b.

struct TaskParams2 {
    std::string name;
    unsigned lambda = 0;
    unsigned ell = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t alpha = 0;
    RsCode lenc;
    SubsetSampler samp;  ///< n indices out of alpha
    OtsParams ots;
    WrapCode wrap_u;
    WrapCode wrap_v;
    WrapCode wrap_vk;
    WrapCode wrap_bit;
    std::size_t budget = 0;  ///< floor((1 - sqrt R) n)

    const Field& field() const noexcept { return lenc.field(); }
    double rate() const noexcept { return lenc.rate(); }
    std::size_t length() const noexcept {
        return wrap_u.length() + wrap_v.length() + wrap_vk.length() + n + wrap_bit.length();
    }
};

/// Validates R < 1/4, budget <= list radius, and 1 + preimage_bits <= k*ell. Wrappers correct budget + 1.
TaskParams2 make_task2(std::string name, unsigned lambda, unsigned ell, std::size_t n, std::size_t k,
                       std::size_t alpha, unsigned hash_bits, unsigned preimage_bits);

struct Instance2 {
    Codeword u_enc;
    Codeword v_enc;
    Codeword vk_enc;
    Codeword sig_block;
    Codeword bit_enc;
    /// Signing keys kept beside the instance for the key-oracle forging mode; never flattened.
    OtsKeys keys;

    friend bool operator==(const Instance2& a, const Instance2& b) {
        return a.u_enc == b.u_enc && a.v_enc == b.v_enc && a.vk_enc == b.vk_enc && a.sig_block == b.sig_block &&
               a.bit_enc == b.bit_enc;
    }
};

struct Sample2 {
    Instance2 x;
    bool label = false;
};

Sample2 sample_c2(const BitVector& s, const TaskParams2& params, CounterRng& rng);

/// (b, sigma) as k symbols: bit 0 is b, bits 1.. hold sigma.
SymbolVector pack_signed_bit(bool b, Signature sig, const TaskParams2& params);
struct SignedBit {
    bool b = false;
    Signature sig = 0;
};
/// Inverse of pack_signed_bit; nullopt when the bits above the signature are not zero.
std::optional<SignedBit> unpack_signed_bit(std::span<const Symbol> msg, const TaskParams2& params);

std::array<std::uint64_t, 2> decode_vk(const Instance2& x, const TaskParams2& params);

std::vector<Segment> manifest(const TaskParams2& params);
SymbolVector flatten(const Instance2& x);
Instance2 unflatten2(std::span<const Symbol> flat, const TaskParams2& params);

// ---------------------------------------------------------------------------
// Presets: C1-tiny, C1-small, C2-small, C2-small-40.

std::vector<std::string> preset_names();
bool is_c1_preset(std::string_view name);
TaskParams1 preset_c1(std::string_view name);
TaskParams2 preset_c2(std::string_view name);

}  // namespace paramsep
