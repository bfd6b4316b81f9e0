#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "paramsep/coding.hpp"
#include "paramsep/field.hpp"

namespace paramsep {

using Real = long double;

/// Absolute tolerances used by every exact check in this module.
struct Tolerances {
    Real normalization = 0x1p-40L;  ///< |sum of probabilities - 1|
    Real identity = 0x1p-30L;       ///< slack on bounds and identities
};

inline constexpr Tolerances kTol{};

/// Neumaier-compensated running sum.
class KahanSum {
public:
    void add(Real x) noexcept;
    Real value() const noexcept { return sum_ + comp_; }

private:
    Real sum_ = 0;
    Real comp_ = 0;
};

/// Distribution over the outcomes 0..size()-1. Vectors over GF(2^ell)^n use the index
/// sum_i x_i << (i * ell); bit strings use bit i of the index for coordinate i.
class Dist {
public:
    Dist() = default;
    /// Normalizes nonnegative weights. Throws std::invalid_argument on negative or all-zero input.
    static Dist from_weights(std::vector<Real> weights);
    static Dist from_counts(std::span<const std::uint64_t> counts);
    /// Takes probabilities as given after checking they are a distribution within
    /// kTol.normalization; entries in (-tolerance, 0) are clamped to zero.
    static Dist from_probs(std::vector<Real> probs);
    static Dist uniform(std::size_t size);
    static Dist point(std::size_t size, std::size_t at);
    /// Uniform over the listed outcomes (duplicates count once).
    static Dist flat(std::size_t size, std::span<const std::uint64_t> support);

    std::size_t size() const noexcept { return p_.size(); }
    Real operator[](std::size_t i) const noexcept { return p_[i]; }
    const std::vector<Real>& probs() const noexcept { return p_; }
    std::size_t support_size() const noexcept;

private:
    std::vector<Real> p_;
};

/// Joint distribution of (X, Z), stored row-major as p[x * nz + z].
class JointDist {
public:
    static JointDist from_weights(std::size_t nx, std::size_t nz, std::vector<Real> weights);

    std::size_t nx() const noexcept { return nx_; }
    std::size_t nz() const noexcept { return nz_; }
    Real operator()(std::size_t x, std::size_t z) const noexcept { return p_[x * nz_ + z]; }
    Dist marginal_x() const;
    Dist marginal_z() const;
    /// X conditioned on Z = z; z must have positive probability.
    Dist conditional_x(std::size_t z) const;

private:
    std::size_t nx_ = 0;
    std::size_t nz_ = 0;
    std::vector<Real> p_;
};

/// Half the L1 distance. Throws std::invalid_argument if the universes differ.
Real stat_dist(const Dist& a, const Dist& b);

/// -log2 of the largest probability. Throws std::invalid_argument on an empty distribution.
Real min_entropy(const Dist& a);
/// -log2 E_z[max_x Pr[X = x | Z = z]].
Real avg_min_entropy(const JointDist& j);

/// Probability weight above the cap 2^-floor_bits, i.e. the statistical distance to the
/// nearest distribution with min-entropy at least floor_bits (when such a distribution exists).
Real deficiency_mass(const Dist& a, Real floor_bits);

struct EntropyReport {
    Real h_min = 0;
    Real h_avg_min = 0;
    Real deficiency_mass = 0;
};

/// Both bullets of the chain rule for average min-entropy, evaluated exactly:
///  (1) H~(X|Z) >= H(X) - m whenever |Supp(Z)| <= 2^m, with m = log2 |Supp(Z)|;
///  (2) Pr_z[H(X|Z=z) >= H~(X|Z) - log2(1/eps)] >= 1 - eps.
struct MinEntropyLemmaReport {
    Real h_x = 0;
    Real h_avg = 0;
    Real m = 0;
    bool chain_holds = false;
    Real eps = 0;
    Real good_z_mass = 0;
    bool tail_holds = false;
};
MinEntropyLemmaReport min_entropy_lemma_check(const JointDist& j, Real eps);

/// Inner-product extractor over {0,1}^n (n <= 14): exact SD of (Y, <X,Y>) from uniform on
/// n+1 bits, against three bounds: the stated eps = 2^(-H(X)/2), the closed form of the
/// usual proof 1/2 sqrt(2^(-H(X)-1)), and the Cauchy-Schwarz value 1/2 sqrt(sum p^2).
struct IpReport {
    unsigned n = 0;
    Real h_min = 0;
    Real sd = 0;
    Real stated_bound = 0;
    Real proof_bound = 0;
    Real collision_bound = 0;
    bool pass = false;          ///< sd <= stated_bound
    bool proof_bound_holds = false;
    bool collision_bound_holds = false;
};
IpReport ip_extractor_check(const Dist& x, unsigned n);

inline constexpr unsigned kMaxIpBits = 14;
inline constexpr unsigned kMaxEnumBits = 24;

/// Signed Fourier coefficients E[(-1)^Tr<x, alpha>] for every alpha, indexed like the outcomes.
std::vector<Real> fourier(const Dist& x, const Field& f, std::size_t n);

Real signed_bias(const Dist& x, const Field& f, std::span<const Symbol> alpha);
Real bias(const Dist& x, const Field& f, std::span<const Symbol> alpha);
/// Maximum bias over nonzero alpha.
Real max_bias(const Dist& x, const Field& f, std::size_t n);

/// Distribution of X + Y (coordinatewise field addition).
Dist convolve(const Dist& x, const Dist& y);

struct MaskingReport {
    Real sd = 0;
    Real k = 0;    ///< H(X)
    Real eps = 0;  ///< max_bias(Y)
    Real bound = 0;
    bool pass = false;
};
MaskingReport masking_check(const Dist& x, const Dist& y, const Field& f, std::size_t n);

struct IdentityReport {
    Real lhs = 0;
    Real rhs = 0;
    bool pass = false;
};
/// Signed coefficient of X+Y at alpha against the product of the two signed coefficients.
IdentityReport convolution_bias_identity_check(const Dist& x, const Dist& y, const Field& f,
                                               std::span<const Symbol> alpha);
/// sum_alpha bias(X, alpha)^2 against |F|^n sum_w Pr[X = w]^2.
IdentityReport parseval_check(const Dist& x, const Field& f, std::size_t n);

/// Exact law of: uniform codeword, uniform s-subset of positions, each replaced by a uniform symbol.
Dist noisy_rs_distribution(const RsCode& code, std::size_t s);

struct NoisyCodeReport {
    std::size_t s = 0;
    Real max_bias = 0;
    Real bound = 0;  ///< (1 - R)^s
    bool pass = false;
};
NoisyCodeReport noisy_code_check(const RsCode& code, std::size_t s);

/// Outcome index of a symbol vector, and back.
std::uint64_t pack_index(std::span<const Symbol> v, unsigned ell);
SymbolVector unpack_index(std::uint64_t idx, std::size_t n, unsigned ell);

}  // namespace paramsep
