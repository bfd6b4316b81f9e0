#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "paramsep/bitvec.hpp"
#include "paramsep/rng.hpp"
#include "paramsep/tasks.hpp"

namespace paramsep {

struct InconsistentSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConsistentSeed : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EffortExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Linear system over GF(2) kept in echelon form as rows arrive. Each stored row's pivot is
/// its lowest set column.
class Gf2System {
public:
    explicit Gf2System(std::size_t vars) : vars_(vars), pivot_of_(vars, npos) {}

    std::size_t vars() const noexcept { return vars_; }
    std::size_t rank() const noexcept { return rows_.size(); }

    /// Adds <row, x> = rhs. Returns false (and leaves the system unchanged) if it contradicts
    /// the rows already present.
    bool add(BitVector row, bool rhs);

    /// A solution with every free variable set to zero.
    BitVector solve() const;

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t vars_;
    std::vector<BitVector> rows_;
    std::vector<std::uint8_t> rhs_;
    std::vector<std::size_t> pivot_of_;  // column -> row index
};

namespace model_kind {
inline constexpr std::string_view kPQ = "PQ";                 // P' || Q', alpha + beta bits
inline constexpr std::string_view kSeed = "SEED";             // s || s', 2 lambda bits
inline constexpr std::string_view kTruncated = "TRUNC";       // prefix of the full model
inline constexpr std::string_view kSketch = "SKETCH";         // A (P' || Q') for a fixed random A
inline constexpr std::string_view kDictionary = "DICT";       // index of the best fixed candidate
inline constexpr std::string_view kSecret = "S";              // s', alpha bits (Construction 2)
inline constexpr std::string_view kListDecode = "LISTDECODE";  // no parameters
}  // namespace model_kind

struct Model {
    std::string kind;
    std::size_t param_bits = 0;
    BitVector params;

    friend bool operator==(const Model&, const Model&) = default;
};

/// Checks param_bits == |params|. Throws std::invalid_argument otherwise.
void audit(const Model& m);

/// {"kind", "param_bits", "params" (hex)}.
std::string model_to_json(const Model& m);
Model model_from_json(std::string_view text);

/// Prefix of the model's parameter string, tagged TRUNC.
Model truncate_model(const Model& m, std::size_t bits);

struct Prediction {
    bool bit = false;
    bool abstain = false;  ///< a wrapper failed to decode; scored as an error
};

// ---------------------------------------------------------------------------
// Construction 1.

/// Per-side coupon-collector sample count: every coordinate of P gets a constraint with a
/// nonzero coefficient, and every coordinate of Q is revealed, except with probability delta.
std::size_t c1_sample_size(const TaskParams1& params, double delta = 0.01);

/// Linear learner: Q' from masked - Enc(m), P' by elimination; free coordinates are zero.
/// Throws InconsistentSamples, or DecodeFailure on an undecodable wrapper.
Model learn_efficient_c1(std::span<const Sample1> samples, const TaskParams1& params);

/// Two independent 2^lambda searches (for f1 and for f2); lambda <= 24. Each search examines
/// at most effort_cap seeds. Throws EffortExceeded or NoConsistentSeed.
Model learn_it_c1(std::span<const Sample1> samples, const TaskParams1& params, std::uint64_t effort_cap);

enum class Compression { Truncation, Sketch, Dictionary };
std::string_view compression_name(Compression c);
Compression parse_compression(std::string_view name);
inline constexpr Compression kAllCompressions[] = {Compression::Truncation, Compression::Sketch,
                                                   Compression::Dictionary};

/// A budget_bits-parameter model computed deterministically from the samples.
Model learn_compressed(std::span<const Sample1> samples, const TaskParams1& params, std::size_t budget_bits,
                       Compression strategy);

/// The (P', Q') pair a Construction 1 model stands for.
struct Hypothesis1 {
    BitVector p;
    BitVector q;
};
Hypothesis1 realize_c1(const Model& m, const TaskParams1& params);

/// Decode u1, u2; unmask with Q'; unique-decode to m (falling back to the cleartext m when
/// the unmasked word is undecodable); output <m, P'|samp1(u1)>.
Prediction eval_hypothesis_c1(const Hypothesis1& h, const Instance1& x, const TaskParams1& params);
Prediction eval_model_c1(const Model& m, const Instance1& x, const TaskParams1& params);

// ---------------------------------------------------------------------------
// Construction 2.

/// Every verifying (b, sigma) in the radius-budget list of the sig block, in list order.
std::vector<SignedBit> verifying_pairs(const Instance2& x, const TaskParams2& params);

/// The zero-parameter classifier: first verifying pair in list order, else a random bit.
bool classify_listdecode_c2(const Instance2& x, const TaskParams2& params, CounterRng& rng);

std::size_t c2_sample_size(const TaskParams2& params, double delta = 0.01);

/// alpha-bit model s' fitted to <v, s|samp(u)> = payload xor label by elimination.
Model learn_it_c2(std::span<const Sample2> samples, const TaskParams2& params);

Model listdecode_model();

/// Dispatches on kind: LISTDECODE, S, or TRUNC (a zero-padded prefix of s').
Prediction eval_model_c2(const Model& m, const Instance2& x, const TaskParams2& params, CounterRng& rng);

}  // namespace paramsep
