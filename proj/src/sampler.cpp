#include "paramsep/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "paramsep/crypto.hpp"

namespace paramsep {

namespace {

void check(const SubsetSampler& s) {
    if (s.r == 0 || s.r > 64) throw std::invalid_argument("SubsetSampler: r must be in [1, 64]");
    if (s.t > s.universe) throw std::invalid_argument("SubsetSampler: t exceeds the universe");
}

}  // namespace

unsigned default_seed_bits(std::uint32_t universe) {
    auto root = static_cast<unsigned>(std::ceil(std::sqrt(static_cast<double>(universe))));
    while (static_cast<std::uint64_t>(root) * root < universe) ++root;
    return std::clamp((root + 7) / 8 * 8, 8u, 64u);
}

SubsetSampler make_sampler(std::uint32_t universe, std::uint32_t t, std::uint32_t kernel) {
    SubsetSampler s{default_seed_bits(universe), universe, t, kernel};
    check(s);
    return s;
}

std::vector<std::uint32_t> samp(std::uint64_t seed, const SubsetSampler& s) {
    check(s);
    if (s.r < 64 && (seed >> s.r) != 0) throw std::invalid_argument("samp: seed wider than r bits");
    if (s.t == 0) return {};
    const BitVector stream = prg_expand(seed, ToyPrg{s.r, std::size_t{64} * s.t, s.kernel});
    const auto words = stream.words();
    std::vector<std::uint32_t> perm(s.universe);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::uint32_t i = 0; i < s.t; ++i) {
        // Multiply-shift maps a 64-bit word onto [0, universe - i); bias is below universe / 2^64.
        const std::uint64_t span = s.universe - i;
        const auto j = i + static_cast<std::uint32_t>((static_cast<unsigned __int128>(words[i]) * span) >> 64);
        std::swap(perm[i], perm[j]);
    }
    perm.resize(s.t);
    std::sort(perm.begin(), perm.end());
    return perm;
}

std::vector<std::uint32_t> samp(const BitVector& seed, const SubsetSampler& s) {
    if (seed.size() != s.r)
        throw std::invalid_argument("samp: seed has " + std::to_string(seed.size()) + " bits, expected " +
                                    std::to_string(s.r));
    return samp(seed.to_uint(), s);
}

SamplerReport validate_entropy_preservation(const SubsetSampler& s, const Dist& source, Real mu, Real kappa1,
                                            Real tolerance) {
    check(s);
    if (s.universe > kMaxExhaustiveUniverse)
        throw std::invalid_argument("validate_entropy_preservation: universe above 20 is outside the exhaustive regime");
    if (s.r > 16) throw std::invalid_argument("validate_entropy_preservation: r above 16 is not enumerable");
    if (source.size() != (std::size_t{1} << s.universe))
        throw std::invalid_argument("validate_entropy_preservation: source is not over {0,1}^universe");
    if (min_entropy(source) < mu * s.universe - kTol.identity)
        throw std::invalid_argument("validate_entropy_preservation: source min-entropy below mu * universe");

    std::vector<std::pair<std::uint32_t, Real>> support;
    for (std::uint32_t x = 0; x < source.size(); ++x)
        if (source[x] > 0) support.emplace_back(x, source[x]);

    SamplerReport rep;
    rep.floor_bits = (mu - kappa1) * s.t;
    rep.tolerance = tolerance;
    const std::uint64_t seeds = std::uint64_t{1} << s.r;
    rep.restricted_entropy.reserve(seeds);
    KahanSum total;
    std::uint64_t deficient = 0;
    std::vector<Real> marg(std::size_t{1} << s.t);
    for (std::uint64_t seed = 0; seed < seeds; ++seed) {
        const auto idx = samp(seed, s);
        std::fill(marg.begin(), marg.end(), Real{0});
        for (const auto& [x, p] : support) {
            std::uint32_t y = 0;
            for (std::uint32_t j = 0; j < s.t; ++j) y |= ((x >> idx[j]) & 1u) << j;
            marg[y] += p;
        }
        const Dist restricted = Dist::from_weights(marg);
        rep.restricted_entropy.push_back(min_entropy(restricted));
        const Real d = deficiency_mass(restricted, rep.floor_bits);
        total.add(d);
        rep.max_deficiency = std::max(rep.max_deficiency, d);
        if (d > kTol.identity) ++deficient;
    }
    rep.joint_deficiency = total.value() / static_cast<Real>(seeds);
    rep.deficient_seed_fraction = static_cast<Real>(deficient) / static_cast<Real>(seeds);
    rep.pass = rep.joint_deficiency <= tolerance;
    return rep;
}

}  // namespace paramsep
