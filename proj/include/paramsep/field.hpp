#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "paramsep/bitvec.hpp"

namespace paramsep {

/// A GF(2^ell) element, stored as the ell-bit coefficient vector of its residue polynomial.
using Symbol = std::uint16_t;
using SymbolVector = std::vector<Symbol>;

inline constexpr unsigned kMaxFieldBits = 16;

struct FieldParams {
    unsigned ell = 0;
    /// Degree-ell irreducible polynomial; bit i is the coefficient of x^i.
    std::uint32_t modulus = 0;

    friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

/// Conventional primitive modulus for each width, except ell=8 which uses x^8+x^4+x^3+x+1.
std::uint32_t default_modulus(unsigned ell);

/// Exhaustive factor search; valid for degrees up to 16.
bool is_irreducible(std::uint32_t poly);

/// Carry-less multiply followed by reduction. Reference path, independent of the tables.
Symbol clmul_reduce(Symbol a, Symbol b, const FieldParams& p) noexcept;

/// GF(2^ell) arithmetic. Copies share the same immutable log/exp tables.
class Field {
public:
    explicit Field(unsigned ell);
    explicit Field(FieldParams params);

    const FieldParams& params() const noexcept { return params_; }
    unsigned ell() const noexcept { return params_.ell; }
    std::uint32_t size() const noexcept { return std::uint32_t{1} << params_.ell; }
    bool valid(Symbol a) const noexcept { return a < size(); }

    static Symbol add(Symbol a, Symbol b) noexcept { return a ^ b; }

    Symbol mul(Symbol a, Symbol b) const noexcept {
        if (a == 0 || b == 0) return 0;
        return t_->exp[t_->log[a] + t_->log[b]];
    }
    /// Throws std::domain_error for a = 0.
    Symbol inv(Symbol a) const;
    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }
    Symbol pow(Symbol a, std::uint64_t e) const noexcept;

    /// Absolute trace to GF(2): a + a^2 + a^4 + ... + a^(2^(ell-1)).
    bool trace(Symbol a) const noexcept { return t_->trace[a]; }

    friend bool operator==(const Field& a, const Field& b) { return a.params_ == b.params_; }

private:
    struct Tables {
        std::vector<std::uint32_t> log;
        std::vector<Symbol> exp;  // doubled so log a + log b needs no reduction
        std::vector<std::uint8_t> trace;
    };

    FieldParams params_;
    std::shared_ptr<const Tables> t_;
};

/// Bits of the symbols, ell per symbol, low bit first.
BitVector symbols_to_bits(std::span<const Symbol> symbols, unsigned ell);
/// Groups bits ell at a time, zero-padding the final symbol.
SymbolVector bits_to_symbols(const BitVector& bits, unsigned ell);

std::size_t hamming_distance(std::span<const Symbol> a, std::span<const Symbol> b);

}  // namespace paramsep
