#include "paramsep/stat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace paramsep {

namespace {

void check_size_pow2(std::size_t size, const char* who) {
    if (size == 0 || !std::has_single_bit(size))
        throw std::invalid_argument(std::string(who) + ": universe size must be a power of two");
}

/// In-place Walsh-Hadamard transform (unnormalized).
void wht(std::vector<Real>& a) {
    for (std::size_t h = 1; h < a.size(); h <<= 1)
        for (std::size_t i = 0; i < a.size(); i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                const Real u = a[j], v = a[j + h];
                a[j] = u + v;
                a[j + h] = u - v;
            }
}

/// Bit mask m(a) with Tr(a * x) = <m(a), bits of x> over GF(2) for every x.
std::vector<std::uint32_t> trace_masks(const Field& f) {
    std::vector<std::uint32_t> out(f.size());
    for (std::uint32_t a = 0; a < f.size(); ++a) {
        std::uint32_t m = 0;
        for (unsigned j = 0; j < f.ell(); ++j)
            if (f.trace(f.mul(static_cast<Symbol>(a), static_cast<Symbol>(1u << j)))) m |= 1u << j;
        out[a] = m;
    }
    return out;
}

std::uint64_t alpha_mask(std::uint64_t alpha_idx, std::size_t n, unsigned ell, const std::vector<std::uint32_t>& tm) {
    std::uint64_t m = 0;
    const std::uint64_t sym_mask = (std::uint64_t{1} << ell) - 1;
    for (std::size_t i = 0; i < n; ++i) m |= std::uint64_t{tm[(alpha_idx >> (i * ell)) & sym_mask]} << (i * ell);
    return m;
}

void check_field_universe(const Dist& x, const Field& f, std::size_t n, const char* who) {
    const std::size_t bits = n * f.ell();
    if (bits > kMaxEnumBits) throw std::invalid_argument(std::string(who) + ": universe too large to enumerate");
    if (x.size() != (std::size_t{1} << bits))
        throw std::invalid_argument(std::string(who) + ": distribution is not over GF(2^ell)^n");
}

Real sum_of_squares(const Dist& x) {
    KahanSum s;
    for (Real p : x.probs()) s.add(p * p);
    return s.value();
}

}  // namespace

void KahanSum::add(Real x) noexcept {
    const Real t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

Dist Dist::from_weights(std::vector<Real> weights) {
    KahanSum total;
    for (Real w : weights) {
        if (!(w >= 0)) throw std::invalid_argument("Dist: weights must be nonnegative");
        total.add(w);
    }
    const Real t = total.value();
    if (!(t > 0)) throw std::invalid_argument("Dist: weights sum to zero");
    for (Real& w : weights) w /= t;
    Dist d;
    d.p_ = std::move(weights);
    return d;
}

Dist Dist::from_counts(std::span<const std::uint64_t> counts) {
    std::vector<Real> w(counts.begin(), counts.end());
    return from_weights(std::move(w));
}

Dist Dist::from_probs(std::vector<Real> probs) {
    KahanSum total;
    for (Real& p : probs) {
        if (p < 0 && p > -kTol.normalization) p = 0;
        if (!(p >= 0)) throw std::invalid_argument("Dist: negative probability");
        total.add(p);
    }
    if (std::fabs(total.value() - 1) > kTol.normalization)
        throw std::invalid_argument("Dist: probabilities do not sum to one");
    Dist d;
    d.p_ = std::move(probs);
    return d;
}

Dist Dist::uniform(std::size_t size) {
    if (size == 0) throw std::invalid_argument("Dist::uniform: empty universe");
    Dist d;
    d.p_.assign(size, Real{1} / static_cast<Real>(size));
    return d;
}

Dist Dist::point(std::size_t size, std::size_t at) {
    if (at >= size) throw std::invalid_argument("Dist::point: outcome outside universe");
    Dist d;
    d.p_.assign(size, 0);
    d.p_[at] = 1;
    return d;
}

Dist Dist::flat(std::size_t size, std::span<const std::uint64_t> support) {
    std::vector<Real> w(size, 0);
    for (auto s : support) {
        if (s >= size) throw std::invalid_argument("Dist::flat: outcome outside universe");
        w[s] = 1;
    }
    return from_weights(std::move(w));
}

std::size_t Dist::support_size() const noexcept {
    return static_cast<std::size_t>(std::count_if(p_.begin(), p_.end(), [](Real p) { return p > 0; }));
}

JointDist JointDist::from_weights(std::size_t nx, std::size_t nz, std::vector<Real> weights) {
    if (weights.size() != nx * nz) throw std::invalid_argument("JointDist: weight count must be nx * nz");
    const Dist d = Dist::from_weights(std::move(weights));
    JointDist j;
    j.nx_ = nx;
    j.nz_ = nz;
    j.p_ = d.probs();
    return j;
}

Dist JointDist::marginal_x() const {
    std::vector<Real> w(nx_, 0);
    for (std::size_t x = 0; x < nx_; ++x) {
        KahanSum s;
        for (std::size_t z = 0; z < nz_; ++z) s.add((*this)(x, z));
        w[x] = s.value();
    }
    return Dist::from_weights(std::move(w));
}

Dist JointDist::marginal_z() const {
    std::vector<Real> w(nz_, 0);
    for (std::size_t z = 0; z < nz_; ++z) {
        KahanSum s;
        for (std::size_t x = 0; x < nx_; ++x) s.add((*this)(x, z));
        w[z] = s.value();
    }
    return Dist::from_weights(std::move(w));
}

Dist JointDist::conditional_x(std::size_t z) const {
    std::vector<Real> w(nx_);
    for (std::size_t x = 0; x < nx_; ++x) w[x] = (*this)(x, z);
    return Dist::from_weights(std::move(w));
}

Real stat_dist(const Dist& a, const Dist& b) {
    if (a.size() != b.size()) throw std::invalid_argument("stat_dist: distributions over different universes");
    KahanSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(std::fabs(a[i] - b[i]));
    return s.value() / 2;
}

Real min_entropy(const Dist& a) {
    if (a.size() == 0) throw std::invalid_argument("min_entropy: empty distribution");
    const Real mx = *std::max_element(a.probs().begin(), a.probs().end());
    return -std::log2(mx);
}

Real avg_min_entropy(const JointDist& j) {
    if (j.nx() == 0 || j.nz() == 0) throw std::invalid_argument("avg_min_entropy: empty distribution");
    // E_z[max_x p(x|z)] = sum_z max_x p(x, z)
    KahanSum s;
    for (std::size_t z = 0; z < j.nz(); ++z) {
        Real mx = 0;
        for (std::size_t x = 0; x < j.nx(); ++x) mx = std::max(mx, j(x, z));
        s.add(mx);
    }
    return -std::log2(s.value());
}

Real deficiency_mass(const Dist& a, Real floor_bits) {
    const Real cap = std::exp2(-floor_bits);
    KahanSum s;
    for (Real p : a.probs())
        if (p > cap) s.add(p - cap);
    return s.value();
}

MinEntropyLemmaReport min_entropy_lemma_check(const JointDist& j, Real eps) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("min_entropy_lemma_check: eps must be in (0, 1)");
    MinEntropyLemmaReport r;
    const Dist px = j.marginal_x();
    const Dist pz = j.marginal_z();
    r.h_x = min_entropy(px);
    r.h_avg = avg_min_entropy(j);
    r.m = std::log2(static_cast<Real>(pz.support_size()));
    r.chain_holds = r.h_avg >= r.h_x - r.m - kTol.identity;

    r.eps = eps;
    const Real threshold = r.h_avg - std::log2(1 / eps);
    KahanSum good;
    for (std::size_t z = 0; z < j.nz(); ++z) {
        if (pz[z] <= 0) continue;
        if (min_entropy(j.conditional_x(z)) >= threshold - kTol.identity) good.add(pz[z]);
    }
    r.good_z_mass = good.value();
    r.tail_holds = r.good_z_mass >= 1 - eps - kTol.identity;
    return r;
}

IpReport ip_extractor_check(const Dist& x, unsigned n) {
    if (n == 0 || n > kMaxIpBits)
        throw std::invalid_argument("ip_extractor_check: n must be in [1, 14] for exhaustive evaluation");
    if (x.size() != (std::size_t{1} << n)) throw std::invalid_argument("ip_extractor_check: X is not over {0,1}^n");
    IpReport r;
    r.n = n;
    r.h_min = min_entropy(x);

    // Coefficient at y is Pr[<X,y>=0] - Pr[<X,y>=1]; SD = 1/2 * 2^-n * sum_y |coef_y|.
    std::vector<Real> coef = x.probs();
    wht(coef);
    KahanSum s;
    for (Real c : coef) s.add(std::fabs(c));
    r.sd = s.value() / 2 / std::exp2(static_cast<Real>(n));

    r.stated_bound = std::exp2(-r.h_min / 2);
    r.proof_bound = std::sqrt(std::exp2(-r.h_min - 1)) / 2;
    r.collision_bound = std::sqrt(sum_of_squares(x)) / 2;
    r.pass = r.sd <= r.stated_bound + kTol.identity;
    r.proof_bound_holds = r.sd <= r.proof_bound + kTol.identity;
    r.collision_bound_holds = r.sd <= r.collision_bound + kTol.identity;
    return r;
}

std::vector<Real> fourier(const Dist& x, const Field& f, std::size_t n) {
    check_field_universe(x, f, n, "fourier");
    std::vector<Real> w = x.probs();
    wht(w);
    const auto tm = trace_masks(f);
    std::vector<Real> out(w.size());
    for (std::uint64_t a = 0; a < w.size(); ++a) out[a] = w[alpha_mask(a, n, f.ell(), tm)];
    return out;
}

Real signed_bias(const Dist& x, const Field& f, std::span<const Symbol> alpha) {
    check_field_universe(x, f, alpha.size(), "signed_bias");
    KahanSum s;
    for (std::uint64_t w = 0; w < x.size(); ++w) {
        if (x[w] == 0) continue;
        Symbol ip = 0;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            ip ^= f.mul(static_cast<Symbol>((w >> (i * f.ell())) & (f.size() - 1)), alpha[i]);
        s.add(f.trace(ip) ? -x[w] : x[w]);
    }
    return s.value();
}

Real bias(const Dist& x, const Field& f, std::span<const Symbol> alpha) { return std::fabs(signed_bias(x, f, alpha)); }

Real max_bias(const Dist& x, const Field& f, std::size_t n) {
    const auto c = fourier(x, f, n);
    Real mx = 0;
    for (std::size_t a = 1; a < c.size(); ++a) mx = std::max(mx, std::fabs(c[a]));
    return mx;
}

Dist convolve(const Dist& x, const Dist& y) {
    if (x.size() != y.size()) throw std::invalid_argument("convolve: distributions over different universes");
    check_size_pow2(x.size(), "convolve");
    std::vector<Real> a = x.probs(), b = y.probs();
    wht(a);
    wht(b);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    wht(a);
    const Real scale = static_cast<Real>(a.size());
    for (Real& v : a) v /= scale;
    return Dist::from_probs(std::move(a));
}

MaskingReport masking_check(const Dist& x, const Dist& y, const Field& f, std::size_t n) {
    check_field_universe(x, f, n, "masking_check");
    check_field_universe(y, f, n, "masking_check");
    MaskingReport r;
    r.sd = stat_dist(convolve(x, y), Dist::uniform(x.size()));
    r.k = min_entropy(x);
    r.eps = max_bias(y, f, n);
    r.bound = std::exp2((static_cast<Real>(n * f.ell()) - r.k) / 2 - 1) * r.eps;
    r.pass = r.sd <= r.bound + kTol.identity;
    return r;
}

IdentityReport convolution_bias_identity_check(const Dist& x, const Dist& y, const Field& f,
                                               std::span<const Symbol> alpha) {
    IdentityReport r;
    r.lhs = signed_bias(convolve(x, y), f, alpha);
    r.rhs = signed_bias(x, f, alpha) * signed_bias(y, f, alpha);
    r.pass = std::fabs(r.lhs - r.rhs) <= kTol.identity;
    return r;
}

IdentityReport parseval_check(const Dist& x, const Field& f, std::size_t n) {
    const auto c = fourier(x, f, n);
    IdentityReport r;
    KahanSum s;
    for (Real v : c) s.add(v * v);
    r.lhs = s.value();
    r.rhs = static_cast<Real>(x.size()) * sum_of_squares(x);
    r.pass = std::fabs(r.lhs - r.rhs) <= kTol.identity * std::max<Real>(1, r.rhs);
    return r;
}

Dist noisy_rs_distribution(const RsCode& code, std::size_t s) {
    const unsigned ell = code.field().ell();
    const std::size_t n = code.n(), k = code.k();
    if (s > n) throw std::invalid_argument("noisy_rs_distribution: s exceeds n");
    if (n * ell > kMaxEnumBits || (k + s) * ell > kMaxEnumBits)
        throw std::invalid_argument("noisy_rs_distribution: parameters too large to enumerate");
    std::vector<std::uint64_t> counts(std::size_t{1} << (n * ell), 0);
    const std::uint64_t q = code.field().size();
    const std::uint64_t messages = std::uint64_t{1} << (k * ell);
    const std::uint64_t fills = std::uint64_t{1} << (s * ell);

    std::vector<std::uint64_t> subsets;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
        if (static_cast<std::size_t>(std::popcount(mask)) == s) subsets.push_back(mask);

    for (std::uint64_t mi = 0; mi < messages; ++mi) {
        const Codeword c = code.encode(unpack_index(mi, k, ell));
        const std::uint64_t base = pack_index(c, ell);
        for (std::uint64_t mask : subsets) {
            std::uint64_t cleared = base;
            std::vector<std::size_t> pos;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1u) {
                    cleared &= ~(((std::uint64_t{1} << ell) - 1) << (i * ell));
                    pos.push_back(i);
                }
            for (std::uint64_t fill = 0; fill < fills; ++fill) {
                std::uint64_t w = cleared;
                for (std::size_t j = 0; j < pos.size(); ++j) w |= ((fill >> (j * ell)) & (q - 1)) << (pos[j] * ell);
                ++counts[w];
            }
        }
    }
    return Dist::from_counts(counts);
}

NoisyCodeReport noisy_code_check(const RsCode& code, std::size_t s) {
    NoisyCodeReport r;
    r.s = s;
    r.max_bias = max_bias(noisy_rs_distribution(code, s), code.field(), code.n());
    r.bound = std::pow(1 - static_cast<Real>(code.k()) / static_cast<Real>(code.n()), static_cast<Real>(s));
    r.pass = r.max_bias <= r.bound + kTol.identity;
    return r;
}

std::uint64_t pack_index(std::span<const Symbol> v, unsigned ell) {
    if (v.size() * ell > 64) throw std::invalid_argument("pack_index: vector too long");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < v.size(); ++i) idx |= std::uint64_t{v[i]} << (i * ell);
    return idx;
}

SymbolVector unpack_index(std::uint64_t idx, std::size_t n, unsigned ell) {
    SymbolVector v(n);
    const std::uint64_t mask = (std::uint64_t{1} << ell) - 1;
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Symbol>((idx >> (i * ell)) & mask);
    return v;
}

}  // namespace paramsep
