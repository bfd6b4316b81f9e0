#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "paramsep/adversaries.hpp"
#include "paramsep/learners.hpp"
#include "paramsep/stat.hpp"

using namespace paramsep;

namespace {

Hypothesis1 truth_of(const Secret1& s) { return {s.p, s.q}; }

}  // namespace

TEST_CASE("budget enforcement") {
    const SymbolVector a{1, 2, 3, 4}, b{1, 0, 3, 0};
    CHECK(enforce_budget(a, b, 2) == 2);
    CHECK_THROWS_AS(enforce_budget(a, b, 1), BudgetViolation);
    CHECK_THROWS_AS(enforce_budget(a, SymbolVector{1}, 4), BudgetViolation);
}

TEST_CASE("noise-planting attack") {
    SUBCASE("budget arithmetic at C1-small") {
        const auto p = preset_c1("C1-small");
        CHECK(noise_plant_positions(p) == 1);
        CHECK(p.k + noise_plant_positions(p) == p.budget);
        const Secret1 sec = expand_secret1(3, p);
        CounterRng rng(1, 0, 0), arng(1, 0, 1);
        const Hypothesis1 h = truth_of(sec);
        int wrong = 0;
        for (int i = 0; i < 10000; ++i) {
            const auto s = sample_c1(sec, p, rng);
            const auto a = attack_noise_plant(s.x, p, arng);
            REQUIRE(a.spent <= p.budget);
            REQUIRE(a.x.u1_enc == s.x.u1_enc);
            REQUIRE(a.x.u2_enc == s.x.u2_enc);
            REQUIRE(hamming_distance(a.x.masked, s.x.masked) <= 1);
            const auto pred = eval_hypothesis_c1(h, a.x, p);
            wrong += pred.abstain || pred.bit != s.label;
        }
        // The true-parameter model decodes m from the masked block and ignores the cleartext copy.
        CHECK(wrong <= 100);
    }
    SUBCASE("T is empty when 3k + 1 >= n") {
        const auto p = preset_c1("C1-tiny");
        CHECK(noise_plant_positions(p) == 0);
        CounterRng rng(2, 0, 0);
        const Secret1 sec = expand_secret1(9, p);
        int changed_m = 0;
        for (int i = 0; i < 200; ++i) {
            const auto s = sample_c1(sec, p, rng);
            const auto a = attack_noise_plant(s.x, p, rng);
            REQUIRE(a.x.masked == s.x.masked);
            changed_m += a.x.m != s.x.m;
        }
        CHECK(changed_m > 150);
    }
    SUBCASE("replaced symbol is uniform, so it keeps its value 1/q of the time") {
        const auto p = make_task1("micro", 4, 3, 5, 1, 8, 16);
        CHECK(noise_plant_positions(p) == 1);
        const Secret1 sec{BitVector(p.alpha), BitVector(p.beta)};
        CounterRng rng(3, 0, 0);
        const int trials = 40000;
        int kept = 0;
        for (int i = 0; i < trials; ++i) {
            const auto s = sample_c1(sec, p, rng);
            kept += attack_noise_plant(s.x, p, rng).x.masked == s.x.masked;
        }
        const double sigma = std::sqrt(0.125 * 0.875 / trials);
        CHECK(std::fabs(kept / static_cast<double>(trials) - 0.125) <= 4 * sigma);
    }
}

TEST_CASE("post-attack view of a partially informed model meets the masking bound") {
    // Micro parameters: ell = 3, n = 5, k = 1, so |T| = 1. The model knows the mask on the first j
    // symbols; the rest is uniform from its point of view. The masked block it sees is
    // Enc(m) + rho + D with D uniform on the unknown coordinates.
    const Field f(3);
    const RsCode code(f, 5, 1);
    const std::size_t t = (5 - 3 * 1) / 2;
    const Dist y = noisy_rs_distribution(code, t);
    const Real eps_bound = std::pow(1.0L - static_cast<Real>(code.rate()), static_cast<Real>(t));
    const std::size_t size = std::size_t{1} << 15;
    for (std::size_t j = 0; j <= 5; ++j) {
        std::vector<std::uint64_t> support;
        for (std::uint64_t idx = 0; idx < size; ++idx)
            if ((idx & ((std::uint64_t{1} << (3 * j)) - 1)) == 0) support.push_back(idx);
        const Dist d = Dist::flat(size, support);
        const Real sd = stat_dist(convolve(y, d), Dist::uniform(size));
        const Real h = static_cast<Real>(3 * (5 - j));
        const Real bound = std::exp2((15 - h) / 2 - 1) * eps_bound;
        INFO("known symbols " << j);
        CHECK(sd <= bound + kTol.identity);
        const auto rep = masking_check(d, y, f, 5);
        CHECK(rep.pass);
        CHECK(rep.eps <= eps_bound + kTol.identity);
    }
}

TEST_CASE("forging attack") {
    const auto p = preset_c2("C2-small");
    const auto p40 = preset_c2("C2-small-40");
    const BitVector s = CounterRng(4, 0, 0).bits(p.alpha);

    SUBCASE("full effort lands, plants both pairs and confuses the classifier") {
        CounterRng rng(5, 0, 0), arng(5, 0, 1), coin(5, 0, 2);
        int correct = 0, full_split = 0;
        const int trials = 2000;
        for (int i = 0; i < trials; ++i) {
            const auto smp = sample_c2(s, p, rng);
            const auto a = attack_forge(smp.x, p, 1u << 16, ForgeMode::Search, arng);
            REQUIRE_FALSE(a.failed);
            REQUIRE(a.spent <= p.n / 2);
            REQUIRE(a.spent <= p.budget);
            const auto pairs = verifying_pairs(a.x, p);
            bool seen[2] = {false, false};
            for (const auto& pr : pairs) seen[pr.b] = true;
            REQUIRE(seen[0]);
            REQUIRE(seen[1]);

            const auto honest_msg = p.lenc.decode_unique(smp.x.sig_block);
            const auto forged = pairs[0].b == smp.label ? pairs.back() : pairs.front();
            const Codeword fc = p.lenc.encode(pack_signed_bit(forged.b, forged.sig, p));
            const std::size_t d_h = hamming_distance(a.x.sig_block, smp.x.sig_block);
            const std::size_t d_f = hamming_distance(a.x.sig_block, fc);
            const std::size_t differ = hamming_distance(smp.x.sig_block, fc);
            REQUIRE(honest_msg);
            REQUIRE(d_h + d_f == differ);
            REQUIRE(d_h <= p.n / 2);
            REQUIRE(d_f <= p.n / 2);
            if (differ == p.n) {
                ++full_split;
                REQUIRE(d_h == p.n / 2);
                REQUIRE(d_f == p.n / 2);
            }
            REQUIRE(a.x.u_enc == smp.x.u_enc);
            REQUIRE(a.x.bit_enc == smp.x.bit_enc);
            correct += classify_listdecode_c2(a.x, p, coin) == smp.label;
        }
        CHECK(full_split > 0);
        CHECK(std::fabs(correct / static_cast<double>(trials) - 0.5) <= 0.05);
    }
    SUBCASE("no effort at 40-bit hashes fails and leaves the classifier intact") {
        CounterRng rng(6, 0, 0), arng(6, 0, 1), coin(6, 0, 2);
        for (int i = 0; i < 2000; ++i) {
            const auto smp = sample_c2(s, p40, rng);
            const auto a = attack_forge(smp.x, p40, 0, ForgeMode::Search, arng);
            REQUIRE(a.failed);
            REQUIRE(a.spent == 0);
            REQUIRE(a.x == smp.x);
            REQUIRE(classify_listdecode_c2(a.x, p40, coin) == smp.label);
        }
    }
    SUBCASE("key-oracle and search modes give the same classifier error rate") {
        CounterRng rng(7, 0, 0), a1(7, 0, 1), a2(7, 0, 1), c1(7, 0, 2), c2(7, 0, 2);
        const int trials = 4000;
        int ok_search = 0, ok_oracle = 0, same_block = 0;
        for (int i = 0; i < trials; ++i) {
            const auto smp = sample_c2(s, p, rng);
            const auto x = attack_forge(smp.x, p, 1u << 16, ForgeMode::Search, a1);
            const auto y = attack_forge(smp.x, p, 0, ForgeMode::KeyOracle, a2);
            REQUIRE_FALSE(y.failed);
            same_block += x.x.sig_block == y.x.sig_block;
            ok_search += classify_listdecode_c2(x.x, p, c1) == smp.label;
            ok_oracle += classify_listdecode_c2(y.x, p, c2) == smp.label;
        }
        // Same subset stream; the forged signatures differ only when vk has a second, smaller preimage.
        CHECK(same_block >= trials * 9 / 10);
        const double sigma = std::sqrt(0.25 / trials);
        CHECK(std::fabs(ok_search - ok_oracle) / static_cast<double>(trials) <= 4 * sigma);
    }
}

TEST_CASE("random and segment-targeted attacks") {
    const auto p1 = preset_c1("C1-small");
    const auto p2 = preset_c2("C2-small");
    const Secret1 sec = expand_secret1(11, p1);
    const BitVector s2 = CounterRng(8, 0, 0).bits(p2.alpha);
    CounterRng rng(9, 0, 0), arng(9, 0, 1), coin(9, 0, 2);

    const auto base = sample_c1(sec, p1, rng);
    const auto same = attack_random(base.x, p1, 0, arng);
    CHECK(same.x == base.x);
    CHECK(same.spent == 0);
    CHECK_THROWS_AS(attack_random(base.x, p1, p1.budget + 1, arng), std::invalid_argument);
    CHECK_THROWS_AS(attack_segment_targeted(base.x, p1, 1, "nope", arng), std::invalid_argument);

    const Hypothesis1 h = truth_of(sec);
    int wrong = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto smp = sample_c1(sec, p1, rng);
        const auto a = attack_random(smp.x, p1, p1.budget, arng);
        REQUIRE(a.spent == p1.budget);
        const auto pred = eval_hypothesis_c1(h, a.x, p1);
        wrong += pred.abstain || pred.bit != smp.label;
        for (const char* seg : {"u1", "u2"}) {
            const auto t = attack_segment_targeted(smp.x, p1, p1.budget, seg, arng);
            REQUIRE(t.spent == p1.budget);
            REQUIRE(decode_seed(p1.wrap_u1, t.x.u1_enc) == decode_seed(p1.wrap_u1, smp.x.u1_enc));
            REQUIRE(decode_seed(p1.wrap_u2, t.x.u2_enc) == decode_seed(p1.wrap_u2, smp.x.u2_enc));
        }
    }
    CHECK(wrong <= 100);

    for (int i = 0; i < 1000; ++i) {
        const auto smp = sample_c2(s2, p2, rng);
        for (const char* seg : {"u", "v", "vk", "bit"}) {
            const auto t = attack_segment_targeted(smp.x, p2, p2.budget, seg, arng);
            REQUIRE(t.spent == p2.budget);
            REQUIRE(decode_vk(t.x, p2) == smp.x.keys.vk);
            REQUIRE(decode_seed(p2.wrap_bit, t.x.bit_enc) == decode_seed(p2.wrap_bit, smp.x.bit_enc));
        }
        const auto r = attack_random(smp.x, p2, p2.budget, arng);
        REQUIRE(r.spent == p2.budget);
        REQUIRE(classify_listdecode_c2(r.x, p2, coin) == smp.label);
    }
}
