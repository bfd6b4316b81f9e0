#include "paramsep/coding.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "field_linalg.hpp"

namespace paramsep {

using detail::Poly;

namespace {

SymbolVector default_points(const Field& f, std::size_t n) {
    SymbolVector pts;
    pts.reserve(n);
    for (std::uint32_t v = 1; v < f.size() && pts.size() < n; ++v) pts.push_back(static_cast<Symbol>(v));
    if (pts.size() < n) pts.push_back(0);
    return pts;
}

std::size_t ceil_sqrt(std::size_t x) {
    std::size_t s = 0;
    while (s * s < x) ++s;
    return s;
}

bool binom_odd(std::size_t a, std::size_t u) { return u <= a && (u & ~a) == 0; }

/// Bivariate polynomial as coefficients of y^b, each a polynomial in x.
using BiPoly = std::vector<Poly>;

std::size_t x_valuation(const BiPoly& q) {
    std::size_t v = std::numeric_limits<std::size_t>::max();
    for (const auto& c : q) {
        for (std::size_t a = 0; a < c.size() && a < v; ++a) {
            if (c[a] != 0) {
                v = a;
                break;
            }
        }
    }
    return v;
}

void divide_by_x_power(BiPoly& q, std::size_t m) {
    if (m == 0) return;
    for (auto& c : q) {
        if (c.size() <= m)
            c.clear();
        else
            c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(m));
    }
}

/// Q(x, x*y + gamma).
BiPoly shift_substitute(const Field& f, const BiPoly& q, Symbol gamma) {
    BiPoly out(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
        Poly acc;
        for (std::size_t b = j; b < q.size(); ++b) {
            if (q[b].empty() || !binom_odd(b, j)) continue;
            const Symbol g = f.pow(gamma, b - j);
            if (g == 0) continue;
            if (acc.size() < q[b].size()) acc.resize(q[b].size(), 0);
            for (std::size_t a = 0; a < q[b].size(); ++a) acc[a] ^= f.mul(g, q[b][a]);
        }
        detail::trim(acc);
        if (!acc.empty()) acc.insert(acc.begin(), j, 0);
        out[j] = std::move(acc);
    }
    return out;
}

void roth_ruckenstein(const Field& f, BiPoly q, std::size_t depth, std::size_t k, Poly& prefix,
                      std::vector<Poly>& found) {
    const std::size_t v = x_valuation(q);
    if (v == std::numeric_limits<std::size_t>::max()) return;
    divide_by_x_power(q, v);
    if (depth == k) {
        found.push_back(prefix);
        return;
    }
    // Roots of Q(0, y).
    Poly at_zero(q.size(), 0);
    for (std::size_t b = 0; b < q.size(); ++b) at_zero[b] = q[b].empty() ? 0 : q[b][0];
    detail::trim(at_zero);
    if (at_zero.size() <= 1) return;
    for (std::uint32_t g = 0; g < f.size(); ++g) {
        const auto gamma = static_cast<Symbol>(g);
        if (detail::eval(f, at_zero, gamma) != 0) continue;
        prefix.push_back(gamma);
        roth_ruckenstein(f, shift_substitute(f, q, gamma), depth + 1, k, prefix, found);
        prefix.pop_back();
    }
}

std::size_t count_monomials(std::size_t degree, std::size_t w) {
    std::size_t total = 0;
    for (std::size_t b = 0; b * w <= degree; ++b) total += degree - b * w + 1;
    return total;
}

}  // namespace

RsCode::RsCode(Field field, std::size_t n, std::size_t k) : RsCode(field, n, k, default_points(field, n)) {}

RsCode::RsCode(Field field, std::size_t n, std::size_t k, SymbolVector eval_points)
    : field_(std::move(field)), n_(n), k_(k), points_(std::move(eval_points)) {
    if (k_ == 0 || k_ > n_) throw std::invalid_argument("RsCode: need 1 <= k <= n");
    if (n_ > field_.size())
        throw std::invalid_argument("RsCode: block length " + std::to_string(n_) + " exceeds field size " +
                                    std::to_string(field_.size()));
    if (points_.size() != n_) throw std::invalid_argument("RsCode: need exactly n evaluation points");
    std::vector<bool> seen(field_.size(), false);
    for (auto p : points_) {
        if (!field_.valid(p)) throw std::invalid_argument("RsCode: evaluation point outside field");
        if (seen[p]) throw std::invalid_argument("RsCode: evaluation points must be distinct");
        seen[p] = true;
    }
}

std::size_t RsCode::max_list_radius() const noexcept { return n_ - ceil_sqrt(k_ * n_); }

Codeword RsCode::encode(std::span<const Symbol> message) const {
    if (message.size() != k_)
        throw std::invalid_argument("RsCode::encode: message has " + std::to_string(message.size()) +
                                    " symbols, expected " + std::to_string(k_));
    Codeword out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        Symbol acc = 0;
        for (std::size_t j = k_; j-- > 0;) acc = field_.mul(acc, points_[i]) ^ message[j];
        out[i] = acc;
    }
    return out;
}

std::optional<SymbolVector> RsCode::decode_unique(std::span<const Symbol> word) const {
    if (word.size() != n_) throw std::invalid_argument("RsCode::decode_unique: word length mismatch");
    const std::size_t e = unique_radius();
    // Unknowns: E_0..E_{e-1} (E monic of degree e), then Q_0..Q_{e+k-1}.
    const std::size_t nq = e + k_;
    const std::size_t ncols = e + nq;
    detail::Matrix a(n_, SymbolVector(ncols, 0));
    SymbolVector rhs(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        const Symbol x = points_[i];
        const Symbol y = word[i];
        Symbol xp = 1;
        for (std::size_t j = 0; j < std::max(e, nq); ++j) {
            if (j < e) a[i][j] = field_.mul(y, xp);
            if (j < nq) a[i][e + j] = xp;
            xp = field_.mul(xp, x);
        }
        rhs[i] = field_.mul(y, field_.pow(x, e));
    }
    auto sol = detail::solve(field_, std::move(a), rhs, ncols);
    if (!sol) return std::nullopt;

    Poly err(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(e));
    err.push_back(1);
    Poly q(sol->begin() + static_cast<std::ptrdiff_t>(e), sol->end());
    auto [msg, rem] = detail::divmod(field_, q, err);
    if (!rem.empty() || msg.size() > k_) return std::nullopt;
    msg.resize(k_, 0);
    if (hamming_distance(encode(msg), word) > e) return std::nullopt;
    return msg;
}

GsParams choose_gs_params(std::size_t n, std::size_t k, std::size_t radius) {
    if (k < 2) throw std::invalid_argument("choose_gs_params: needs k >= 2");
    if (radius >= n) throw std::invalid_argument("choose_gs_params: radius must be below n");
    const std::size_t agree = n - radius;
    for (unsigned r = 1; r <= 64; ++r) {
        const std::size_t degree = static_cast<std::size_t>(r) * agree - 1;
        const std::size_t constraints = n * r * (r + 1) / 2;
        const std::size_t monos = count_monomials(degree, k - 1);
        if (monos > constraints) return GsParams{r, degree, monos, constraints};
    }
    throw std::invalid_argument("choose_gs_params: radius outside the Guruswami-Sudan range");
}

std::vector<SymbolVector> RsCode::decode_list(std::span<const Symbol> word, std::size_t radius) const {
    if (word.size() != n_) throw std::invalid_argument("RsCode::decode_list: word length mismatch");
    if (radius > max_list_radius())
        throw std::invalid_argument("RsCode::decode_list: radius " + std::to_string(radius) +
                                    " exceeds supported maximum " + std::to_string(max_list_radius()));

    std::set<SymbolVector> out;
    auto consider = [&](SymbolVector msg) {
        if (hamming_distance(encode(msg), word) <= radius) out.insert(std::move(msg));
    };

    if (k_ == 1) {
        // Constant codewords; interpolation degenerates, so enumerate.
        for (std::uint32_t c = 0; c < field_.size(); ++c) consider(SymbolVector{static_cast<Symbol>(c)});
        return {out.begin(), out.end()};
    }

    const GsParams gp = choose_gs_params(n_, k_, radius);
    const std::size_t w = k_ - 1;
    std::vector<std::pair<std::size_t, std::size_t>> monos;  // (x-degree a, y-degree b)
    for (std::size_t b = 0; b * w <= gp.weighted_degree; ++b)
        for (std::size_t a = 0; a + b * w <= gp.weighted_degree; ++a) monos.emplace_back(a, b);

    // Vanishing of all Hasse derivatives of order < multiplicity at each (x_i, y_i).
    detail::Matrix a;
    a.reserve(gp.constraints);
    for (std::size_t i = 0; i < n_; ++i) {
        const Symbol x = points_[i];
        const Symbol y = word[i];
        for (unsigned u = 0; u < gp.multiplicity; ++u) {
            for (unsigned v = 0; u + v < gp.multiplicity; ++v) {
                SymbolVector row(monos.size(), 0);
                for (std::size_t c = 0; c < monos.size(); ++c) {
                    const auto [da, db] = monos[c];
                    if (!binom_odd(da, u) || !binom_odd(db, v)) continue;
                    row[c] = field_.mul(field_.pow(x, da - u), field_.pow(y, db - v));
                }
                a.push_back(std::move(row));
            }
        }
    }
    auto coeffs = detail::null_vector(field_, std::move(a), monos.size());
    if (!coeffs) throw std::logic_error("RsCode::decode_list: interpolation system has trivial kernel");

    BiPoly q;
    for (std::size_t c = 0; c < monos.size(); ++c) {
        const auto [da, db] = monos[c];
        if ((*coeffs)[c] == 0) continue;
        if (q.size() <= db) q.resize(db + 1);
        if (q[db].size() <= da) q[db].resize(da + 1, 0);
        q[db][da] = (*coeffs)[c];
    }

    std::vector<Poly> roots;
    Poly prefix;
    roth_ruckenstein(field_, q, 0, k_, prefix, roots);
    for (auto& r : roots) consider(std::move(r));
    return {out.begin(), out.end()};
}

WrapCode::WrapCode(RsCode inner, std::size_t payload_bits, std::size_t blocks, unsigned repeat)
    : inner_(std::move(inner)), payload_bits_(payload_bits), blocks_(blocks), repeat_(repeat) {
    if (repeat_ == 0 || repeat_ % 2 == 0) throw std::invalid_argument("WrapCode: repeat must be odd");
    const std::size_t ell = inner_.field().ell();
    if (blocks_ * inner_.k() * ell < payload_bits_) throw std::invalid_argument("WrapCode: too few blocks for payload");
}

std::size_t WrapCode::correct_radius() const noexcept {
    // A position is lost only when a strict majority of its copies is hit.
    return (inner_.unique_radius() + 1) * ((repeat_ + 1) / 2) - 1;
}

std::size_t WrapCode::padding_bits() const noexcept {
    return blocks_ * inner_.k() * inner_.field().ell() - payload_bits_;
}

WrapCode WrapCode::for_radius(const Field& field, std::size_t payload_bits, std::size_t min_radius) {
    const std::size_t q = field.size();
    const std::size_t syms = std::max<std::size_t>(1, (payload_bits + field.ell() - 1) / field.ell());
    std::size_t best_len = std::numeric_limits<std::size_t>::max();
    std::size_t best_blocks = 0, best_k = 0, best_n = 0;
    unsigned best_rep = 0;
    for (unsigned rep = 1; rep <= 2 * min_radius + 1; rep += 2) {
        const std::size_t half = (rep + 1) / 2;
        // Smallest unique radius e with (e + 1) * half - 1 >= min_radius.
        const std::size_t e = (min_radius + 1 + half - 1) / half - 1;
        for (std::size_t blocks = 1; blocks <= syms; ++blocks) {
            const std::size_t k = (syms + blocks - 1) / blocks;
            const std::size_t n = k + 2 * e;
            if (n > q) continue;
            const std::size_t len = blocks * n * rep;
            if (len < best_len) {
                best_len = len;
                best_blocks = blocks;
                best_k = k;
                best_n = n;
                best_rep = rep;
            }
        }
        if (best_rep != 0) break;
    }
    if (best_rep == 0) throw std::invalid_argument("WrapCode::for_radius: no feasible layout");
    return WrapCode(RsCode(field, best_n, best_k), payload_bits, best_blocks, best_rep);
}

Codeword WrapCode::encode(const BitVector& payload) const {
    if (payload.size() != payload_bits_)
        throw std::invalid_argument("WrapCode::encode: payload has " + std::to_string(payload.size()) +
                                    " bits, expected " + std::to_string(payload_bits_));
    BitVector padded = payload;
    padded.resize(blocks_ * inner_.k() * inner_.field().ell());
    const SymbolVector syms = bits_to_symbols(padded, inner_.field().ell());
    Codeword out;
    out.reserve(length());
    for (std::size_t b = 0; b < blocks_; ++b) {
        const auto msg = std::span<const Symbol>(syms).subspan(b * inner_.k(), inner_.k());
        const Codeword cw = inner_.encode(msg);
        for (unsigned r = 0; r < repeat_; ++r) out.insert(out.end(), cw.begin(), cw.end());
    }
    return out;
}

std::optional<BitVector> WrapCode::decode(std::span<const Symbol> word) const {
    if (word.size() != length()) throw std::invalid_argument("WrapCode::decode: word length mismatch");
    const std::size_t n = inner_.n();
    SymbolVector syms;
    syms.reserve(blocks_ * inner_.k());
    Codeword voted(n);
    for (std::size_t b = 0; b < blocks_; ++b) {
        const auto block = word.subspan(b * n * repeat_, n * repeat_);
        for (std::size_t i = 0; i < n; ++i) {
            // Boyer-Moore majority vote over the copies; ties fall to an arbitrary candidate.
            Symbol cand = block[i];
            unsigned count = 0;
            for (unsigned r = 0; r < repeat_; ++r) {
                const Symbol s = block[r * n + i];
                if (count == 0) {
                    cand = s;
                    count = 1;
                } else if (s == cand) {
                    ++count;
                } else {
                    --count;
                }
            }
            voted[i] = cand;
        }
        auto msg = inner_.decode_unique(voted);
        if (!msg) return std::nullopt;
        syms.insert(syms.end(), msg->begin(), msg->end());
    }
    BitVector bits = symbols_to_bits(syms, inner_.field().ell());
    for (std::size_t i = payload_bits_; i < bits.size(); ++i)
        if (bits.get(i)) return std::nullopt;  // nonzero padding means we decoded to a foreign codeword
    bits.resize(payload_bits_);
    return bits;
}

}  // namespace paramsep
