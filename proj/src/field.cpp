#include "paramsep/field.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace paramsep {

namespace {

int degree(std::uint32_t poly) { return poly == 0 ? -1 : 31 - std::countl_zero(poly); }

std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m) {
    const int dm = degree(m);
    for (int da = degree(a); da >= dm; da = degree(a)) a ^= m << (da - dm);
    return a;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

Symbol slow_pow(Symbol a, std::uint32_t e, const FieldParams& p) {
    Symbol r = 1;
    while (e) {
        if (e & 1u) r = clmul_reduce(r, a, p);
        a = clmul_reduce(a, a, p);
        e >>= 1;
    }
    return r;
}

}  // namespace

std::uint32_t default_modulus(unsigned ell) {
    static constexpr std::uint32_t table[] = {
        0,       0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x83,    0x11B,
        0x211,   0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
    };
    if (ell == 0 || ell > kMaxFieldBits)
        throw std::invalid_argument("default_modulus: ell must be in [1, 16], got " + std::to_string(ell));
    return table[ell];
}

bool is_irreducible(std::uint32_t poly) {
    const int d = degree(poly);
    if (d < 1) return false;
    // Any reducible polynomial has a factor of degree at most d/2.
    for (std::uint32_t f = 2; degree(f) <= d / 2; ++f) {
        if (poly_mod(poly, f) == 0) return false;
    }
    return true;
}

Symbol clmul_reduce(Symbol a, Symbol b, const FieldParams& p) noexcept {
    std::uint32_t acc = 0;
    std::uint32_t x = a;
    for (std::uint32_t y = b; y; y >>= 1) {
        if (y & 1u) acc ^= x;
        x <<= 1;
    }
    return static_cast<Symbol>(poly_mod(acc, p.modulus));
}

Field::Field(unsigned ell) : Field(FieldParams{ell, default_modulus(ell)}) {}

Field::Field(FieldParams params) : params_(params) {
    if (params_.ell == 0 || params_.ell > kMaxFieldBits)
        throw std::invalid_argument("Field: ell must be in [1, 16]");
    if (degree(params_.modulus) != static_cast<int>(params_.ell))
        throw std::invalid_argument("Field: modulus degree does not match ell");
    if (!is_irreducible(params_.modulus)) throw std::invalid_argument("Field: modulus is reducible");

    const std::uint32_t q = size();
    const std::uint32_t order = q - 1;
    const auto factors = prime_factors(order);

    // The modulus need not be primitive, so search for a generator of the multiplicative group.
    Symbol gen = 1;
    if (order > 1) {
        for (std::uint32_t g = 2; g < q; ++g) {
            bool ok = true;
            for (auto f : factors) {
                if (slow_pow(static_cast<Symbol>(g), order / f, params_) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                gen = static_cast<Symbol>(g);
                break;
            }
        }
    }

    auto t = std::make_shared<Tables>();
    t->log.assign(q, 0);
    t->exp.assign(2 * static_cast<std::size_t>(order) + 1, 0);
    Symbol x = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
        t->exp[i] = x;
        t->exp[i + order] = x;
        t->log[x] = i;
        x = clmul_reduce(x, gen, params_);
    }
    if (order == 1) t->exp[1] = 1;

    t->trace.assign(q, 0);
    for (std::uint32_t a = 0; a < q; ++a) {
        Symbol sum = 0;
        Symbol y = static_cast<Symbol>(a);
        for (unsigned i = 0; i < params_.ell; ++i) {
            sum ^= y;
            y = clmul_reduce(y, y, params_);
        }
        if (sum > 1) throw std::logic_error("Field: trace left GF(2)");
        t->trace[a] = static_cast<std::uint8_t>(sum);
    }
    t_ = std::move(t);
}

Symbol Field::inv(Symbol a) const {
    if (a == 0) throw std::domain_error("Field::inv: zero has no inverse");
    const std::uint32_t order = size() - 1;
    return t_->exp[(order - t_->log[a]) % order];
}

Symbol Field::pow(Symbol a, std::uint64_t e) const noexcept {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t order = size() - 1;
    return t_->exp[(static_cast<std::uint64_t>(t_->log[a]) * (e % order)) % order];
}

BitVector symbols_to_bits(std::span<const Symbol> symbols, unsigned ell) {
    BitVector out(symbols.size() * ell);
    for (std::size_t i = 0; i < symbols.size(); ++i)
        for (unsigned t = 0; t < ell; ++t)
            if ((symbols[i] >> t) & 1u) out.set(i * ell + t, true);
    return out;
}

SymbolVector bits_to_symbols(const BitVector& bits, unsigned ell) {
    SymbolVector out((bits.size() + ell - 1) / ell, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits.get(i)) out[i / ell] |= static_cast<Symbol>(1u << (i % ell));
    return out;
}

std::size_t hamming_distance(std::span<const Symbol> a, std::span<const Symbol> b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

}  // namespace paramsep
