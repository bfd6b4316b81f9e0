#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "paramsep/bitvec.hpp"
#include "paramsep/field.hpp"

namespace paramsep {

using Codeword = SymbolVector;

/// Evaluation-style Reed-Solomon code: message (m_1..m_k) is the polynomial
/// m_1 + m_2 x + ... + m_k x^(k-1), evaluated at n distinct points.
class RsCode {
public:
    /// Evaluation points default to 1, 2, ..., 2^ell - 1 in value order, then 0 when n = 2^ell.
    RsCode(Field field, std::size_t n, std::size_t k);
    RsCode(Field field, std::size_t n, std::size_t k, SymbolVector eval_points);

    const Field& field() const noexcept { return field_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    const SymbolVector& eval_points() const noexcept { return points_; }
    double rate() const noexcept { return static_cast<double>(k_) / static_cast<double>(n_); }
    std::size_t distance() const noexcept { return n_ - k_ + 1; }
    std::size_t unique_radius() const noexcept { return (n_ - k_) / 2; }
    /// Largest radius accepted by list decoding: n - ceil(sqrt(k n)).
    std::size_t max_list_radius() const noexcept;

    Codeword encode(std::span<const Symbol> message) const;

    /// Berlekamp-Welch. Returns the unique message within unique_radius(), if any.
    std::optional<SymbolVector> decode_unique(std::span<const Symbol> word) const;

    /// Guruswami-Sudan. Returns every message whose codeword lies within `radius`,
    /// sorted lexicographically (m_1 most significant).
    std::vector<SymbolVector> decode_list(std::span<const Symbol> word, std::size_t radius) const;

    friend bool operator==(const RsCode& a, const RsCode& b) {
        return a.field_ == b.field_ && a.n_ == b.n_ && a.k_ == b.k_ && a.points_ == b.points_;
    }

private:
    Field field_;
    std::size_t n_;
    std::size_t k_;
    SymbolVector points_;
};

/// Interpolation parameters Guruswami-Sudan uses for a given radius.
struct GsParams {
    unsigned multiplicity = 0;
    std::size_t weighted_degree = 0;
    std::size_t monomials = 0;
    std::size_t constraints = 0;
};

/// Smallest multiplicity (and matching (1, k-1)-weighted degree) that guarantees every
/// codeword within `radius` is a root of the interpolation polynomial. Requires k >= 2.
GsParams choose_gs_params(std::size_t n, std::size_t k, std::size_t radius);

/// Binary payload carried in Reed-Solomon blocks over the instance field.
///
/// The payload is packed ell bits per symbol (zero-padded), split into equal blocks of
/// `inner().k()` symbols, and each block's codeword is sent `repeat()` times. A block decodes
/// correctly whenever it receives at most correct_radius() corrupted symbols, so the whole
/// wrapper survives any corruption pattern of that total weight.
class WrapCode {
public:
    /// Shortest layout whose correct_radius() is at least `min_radius`.
    static WrapCode for_radius(const Field& field, std::size_t payload_bits, std::size_t min_radius);

    WrapCode(RsCode inner, std::size_t payload_bits, std::size_t blocks, unsigned repeat);

    const RsCode& inner() const noexcept { return inner_; }
    std::size_t payload_bits() const noexcept { return payload_bits_; }
    std::size_t blocks() const noexcept { return blocks_; }
    unsigned repeat() const noexcept { return repeat_; }
    std::size_t length() const noexcept { return blocks_ * inner_.n() * repeat_; }
    std::size_t correct_radius() const noexcept;
    /// Tail bits of zero padding in the last symbol/block.
    std::size_t padding_bits() const noexcept;

    Codeword encode(const BitVector& payload) const;
    std::optional<BitVector> decode(std::span<const Symbol> word) const;

private:
    RsCode inner_;
    std::size_t payload_bits_;
    std::size_t blocks_;
    unsigned repeat_;
};

}  // namespace paramsep
