#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "paramsep/sampler.hpp"

using namespace paramsep;

namespace {

Real binom(unsigned n, unsigned k) {
    if (k > n) return 0;
    Real r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

unsigned gf2_rank(std::vector<std::uint64_t> rows) {
    unsigned r = 0;
    for (unsigned bit = 0; bit < 64 && r < rows.size(); ++bit) {
        auto it = std::find_if(rows.begin() + r, rows.end(), [&](std::uint64_t v) { return v >> bit & 1u; });
        if (it == rows.end()) continue;
        std::swap(*it, rows[r]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && (rows[i] >> bit & 1u)) rows[i] ^= rows[r];
        ++r;
    }
    return r;
}

}  // namespace

TEST_CASE("seed length defaults") {
    CHECK(default_seed_bits(16) == 8);
    CHECK(default_seed_bits(256) == 16);
    CHECK(default_seed_bits(1024) == 32);
    CHECK(default_seed_bits(1025) == 40);
    CHECK(make_sampler(20, 8, 1).r == 8);
    CHECK_THROWS_AS(make_sampler(10, 11, 1), std::invalid_argument);
}

TEST_CASE("edge sizes") {
    const SubsetSampler all{8, 12, 12, 1};
    std::vector<std::uint32_t> full(12);
    for (std::uint32_t i = 0; i < 12; ++i) full[i] = i;
    for (std::uint64_t s = 0; s < 256; s += 17) CHECK(samp(s, all) == full);
    CHECK(samp(5, SubsetSampler{8, 12, 0, 1}).empty());
    CHECK_THROWS_AS(samp(BitVector(7), all), std::invalid_argument);
    CHECK_THROWS_AS(samp(256, all), std::invalid_argument);
}

TEST_CASE("distinct seeds give distinct subsets") {
    const SubsetSampler s{8, 16, 4, 2};
    std::vector<std::vector<std::uint32_t>> outs;
    for (std::uint64_t seed = 0; seed < 256; ++seed) outs.push_back(samp(seed, s));
    std::uint64_t pairs = 0, differ = 0;
    for (std::size_t a = 0; a < outs.size(); ++a)
        for (std::size_t b = a + 1; b < outs.size(); ++b) {
            ++pairs;
            differ += outs[a] != outs[b];
        }
    CHECK(static_cast<double>(differ) / pairs >= 0.9);
}

TEST_CASE("determinism, exact size and near-uniform coverage over all 2^16 seeds") {
    for (const SubsetSampler s : {SubsetSampler{16, 16, 4, 3}, SubsetSampler{16, 20, 7, 4}, SubsetSampler{16, 1024, 60, 5}}) {
        std::vector<std::uint64_t> hits(s.universe, 0);
        for (std::uint64_t seed = 0; seed < (1u << 16); ++seed) {
            const auto out = samp(seed, s);
            REQUIRE(out.size() == s.t);
            REQUIRE(std::adjacent_find(out.begin(), out.end(), std::greater_equal<>()) == out.end());
            REQUIRE(out.back() < s.universe);
            if (seed % 4096 == 0) REQUIRE(samp(BitVector::from_uint(seed, 16), s) == out);
            for (auto i : out) ++hits[i];
        }
        const double expect = 65536.0 * s.t / s.universe;
        for (auto h : hits) REQUIRE(std::abs(h - expect) <= 0.1 * expect);
    }
}

TEST_CASE("uniform source loses nothing") {
    const auto s = make_sampler(16, 6, 6);
    const auto rep = validate_entropy_preservation(s, Dist::uniform(1u << 16), 1, 0.1L, 0.01L);
    CHECK(rep.joint_deficiency < 1e-15L);
    CHECK(rep.max_deficiency < 1e-15L);
    CHECK(rep.pass);
    for (Real h : rep.restricted_entropy) REQUIRE(std::fabs(h - 6) < 1e-12L);
}

TEST_CASE("subspace source: restricted entropy equals projected rank") {
    std::mt19937_64 gen(1);
    const std::uint32_t N = 16;
    const auto s = make_sampler(N, 8, 7);
    std::vector<std::uint64_t> rows(8);
    for (auto& r : rows) r = gen() & 0xFFFF;
    std::vector<std::uint64_t> pts{0};
    for (auto g : rows) {
        const std::size_t sz = pts.size();
        for (std::size_t i = 0; i < sz; ++i) pts.push_back(pts[i] ^ g);
    }
    const Dist x = Dist::flat(1u << N, pts);
    const unsigned dim = gf2_rank(rows);
    const Real mu = static_cast<Real>(dim) / N;
    const auto rep = validate_entropy_preservation(s, x, mu, 0.125L, 0.05L);
    for (std::uint64_t seed = 0; seed < (1u << s.r); ++seed) {
        const auto idx = samp(seed, s);
        std::vector<std::uint64_t> proj;
        for (auto r : rows) {
            std::uint64_t p = 0;
            for (std::size_t j = 0; j < idx.size(); ++j) p |= ((r >> idx[j]) & 1u) << j;
            proj.push_back(p);
        }
        REQUIRE(std::fabs(rep.restricted_entropy[seed] - gf2_rank(proj)) < 1e-12L);
    }
}

TEST_CASE("hidden-window source matches the hypergeometric tail") {
    // X uniform on strings supported inside a fixed window W of size N/2: the restriction has
    // exactly |S cap W| bits of min-entropy, and |S cap W| is hypergeometric over seeds.
    const std::uint32_t N = 20, t = 8, w = 10;
    const Real mu = 0.5L, kappa1 = 0.125L;
    const std::uint32_t window = 0b01101001011001101001u & ((1u << N) - 1);
    REQUIRE(std::popcount(window) == static_cast<int>(w));
    std::vector<std::uint64_t> pts;
    for (std::uint64_t x = 0; x < (1u << N); ++x)
        if ((x & ~std::uint64_t{window}) == 0) pts.push_back(x);
    const Dist src = Dist::flat(1u << N, pts);
    const auto s = make_sampler(N, t, 8);
    const auto rep = validate_entropy_preservation(s, src, mu, kappa1, 0.01L);
    CHECK(rep.floor_bits == 3);

    Real tail = 0, expected_def = 0, second = 0;
    for (unsigned h = 0; h <= t; ++h) {
        const Real ph = binom(w, h) * binom(N - w, t - h) / binom(N, t);
        const Real def = std::max<Real>(0, 1 - std::exp2(static_cast<Real>(h) - rep.floor_bits));
        if (h < rep.floor_bits) tail += ph;
        expected_def += ph * def;
        second += ph * def * def;
    }
    const Real seeds = static_cast<Real>(1u << s.r);
    const Real sd_frac = std::sqrt(tail * (1 - tail) / seeds);
    const Real sd_def = std::sqrt((second - expected_def * expected_def) / seeds);
    CHECK(std::fabs(rep.deficient_seed_fraction - tail) <= 4 * sd_frac);
    CHECK(std::fabs(rep.joint_deficiency - expected_def) <= 4 * sd_def);
    Real worst = 0;
    for (Real h : rep.restricted_entropy) worst = std::max(worst, 1 - std::exp2(h - rep.floor_bits));
    CHECK(std::fabs(rep.max_deficiency - worst) < 1e-15L);
}

TEST_CASE("exhaustive regime is enforced") {
    CHECK_THROWS_AS(validate_entropy_preservation(make_sampler(21, 3, 1), Dist::uniform(1u << 21), 1, 0, 0.01L),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_entropy_preservation(make_sampler(8, 3, 1), Dist::point(256, 1), 0.5L, 0, 0.01L),
                    std::invalid_argument);
}
