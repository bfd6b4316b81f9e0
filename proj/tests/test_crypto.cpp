#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "paramsep/crypto.hpp"

using namespace paramsep;

TEST_CASE("expansion is deterministic, prefix-stable and kernel-separated") {
    const ToyPrg g{12, 256, 1};
    CHECK(prg_expand(std::uint64_t{77}, g) == prg_expand(std::uint64_t{77}, g));
    CHECK(prg_expand(BitVector::from_uint(77, 12), g) == prg_expand(std::uint64_t{77}, g));
    CHECK(prg_expand(std::uint64_t{77}, ToyPrg{12, 100, 1}) == prg_expand(std::uint64_t{77}, g).slice(0, 100));
    CHECK(prg_expand(std::uint64_t{77}, ToyPrg{12, 256, 2}) != prg_expand(std::uint64_t{77}, g));
    CHECK_THROWS_AS(prg_expand(BitVector(11), g), std::invalid_argument);
    CHECK_THROWS_AS(prg_expand(std::uint64_t{1} << 12, g), std::invalid_argument);
    CHECK_THROWS_AS(prg_expand(std::uint64_t{0}, ToyPrg{12, 12, 1}), std::invalid_argument);
}

TEST_CASE("every output position is balanced over all 2^12 seeds, no collisions") {
    const ToyPrg g{12, 256, 3};
    std::vector<int> ones(256, 0);
    std::set<std::string> seen;
    for (std::uint64_t s = 0; s < 4096; ++s) {
        const auto out = prg_expand(s, g);
        for (std::size_t i = 0; i < 256; ++i) ones[i] += out.get(i);
        seen.insert(out.to_hex());
    }
    CHECK(seen.size() == 4096);
    // One position's deviation has sigma = 1/128, so 0.02 is only 2.56 sigma and a few of 256
    // positions are expected outside it. Require the bulk inside 0.02 and every one inside 4.5 sigma.
    int inside = 0;
    for (int c : ones) {
        const double dev = std::abs(c / 4096.0 - 0.5);
        REQUIRE(dev <= 4.5 / 128);
        inside += dev <= 0.02;
    }
    CHECK(inside >= 243);
}

TEST_CASE("image size is at most 2^seed_bits") {
    const ToyPrg g{10, 11, 4};
    std::set<std::uint64_t> image;
    for (std::uint64_t s = 0; s < 1024; ++s) image.insert(prg_expand(s, g).to_uint());
    CHECK(image.size() <= 1024);
    CHECK(image.size() > 600);  // 1024 draws into 2048 slots
}

TEST_CASE("inversion") {
    const ToyPrg g{12, 64, 5};
    for (std::uint64_t s : {0ull, 1ull, 1234ull, 4095ull}) {
        const auto got = prg_invert(prg_expand(s, g), g);
        REQUIRE(got.has_value());
        CHECK(prg_expand(*got, g) == prg_expand(s, g));
        CHECK(*got == s);
    }
    CounterRng r(1, 0, 0);
    for (int t = 0; t < 20; ++t) CHECK_FALSE(prg_invert(r.bits(64), g).has_value());
    CHECK_THROWS_AS(prg_invert(BitVector(64), ToyPrg{25, 64, 5}), std::invalid_argument);
    CHECK_THROWS_AS(prg_invert(BitVector(63), g), std::invalid_argument);
}

TEST_CASE("empty seed space") {
    const ToyPrg g{0, 16, 6};
    const auto only = prg_expand(std::uint64_t{0}, g);
    CHECK(prg_invert(only, g) == std::uint64_t{0});
    auto other = only;
    other.flip(3);
    CHECK_FALSE(prg_invert(other, g).has_value());
}

TEST_CASE("inversion does not depend on worker count") {
    const ToyPrg g{16, 17, 7};
    CounterRng r(2, 0, 0);
    for (int t = 0; t < 10; ++t) {
        const auto target = t % 2 ? r.bits(17) : prg_expand(r.below(1u << 16), g);
        const auto one = prg_invert(target, g, 1);
        REQUIRE(one == prg_invert(target, g, 4));
        REQUIRE(one == prg_invert(target, g, 7));
        if (one) {
            for (std::uint64_t s = 0; s < *one; ++s) REQUIRE(prg_expand(s, g) != target);
        }
    }
}

TEST_CASE("signature correctness over 10^4 keypairs") {
    const OtsParams p{40, 40};
    int wrong_bit_accepts = 0;
    for (std::uint64_t t = 0; t < 10000; ++t) {
        CounterRng r(11, t, 0);
        const auto keys = ots_gen(p, r);
        for (bool b : {false, true}) {
            REQUIRE(keys.vk[b] == ots_hash(keys.sk[b], p));
            REQUIRE(ots_verify(keys.vk, p, b, ots_sign(keys, b)));
            wrong_bit_accepts += ots_verify(keys.vk, p, !b, ots_sign(keys, b));
        }
    }
    CHECK(wrong_bit_accepts == 0);
}

TEST_CASE("signatures wider than preimage_bits are rejected") {
    const OtsParams p{16, 11};
    CounterRng r(12, 0, 0);
    const auto keys = ots_gen(p, r);
    CHECK(keys.sk[0] < (1u << 11));
    CHECK_FALSE(ots_verify(keys.vk, p, false, keys.sk[0] | (1u << 11)));
}

TEST_CASE("exhaustive forging at 16 bits always lands") {
    const OtsParams p{16, 16};
    for (std::uint64_t t = 0; t < 40; ++t) {
        CounterRng r(13, t, 0);
        const auto keys = ots_gen(p, r);
        const auto forged = ots_forge(keys.vk, p, true, std::uint64_t{1} << 16, 2);
        REQUIRE(forged.has_value());
        REQUIRE(ots_verify(keys.vk, p, true, *forged));
        REQUIRE(*forged <= keys.sk[1]);
    }
}

TEST_CASE("forging at 40 bits with small effort fails") {
    const OtsParams p{40, 40};
    int hits = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
        CounterRng r(14, t, 0);
        const auto keys = ots_gen(p, r);
        hits += ots_forge(keys.vk, p, t % 2, 1024).has_value();
    }
    CHECK(hits == 0);
    for (std::uint64_t t = 0; t < 10; ++t) {
        CounterRng r(15, t, 0);
        const auto keys = ots_gen(p, r);
        CHECK_FALSE(ots_forge(keys.vk, p, false, 100000, 4).has_value());
    }
}

TEST_CASE("forging success tracks effort / 2^hash_bits") {
    // hash 10 bits, preimages 20 bits: a candidate hits with probability 2^-10 each.
    const OtsParams p{10, 20};
    const int trials = 400;
    for (std::uint64_t effort : {64ull, 256ull, 1024ull, 4096ull}) {
        int hits = 0;
        for (int t = 0; t < trials; ++t) {
            CounterRng r(16, static_cast<std::uint64_t>(t), static_cast<std::uint32_t>(effort));
            const auto keys = ots_gen(p, r);
            hits += ots_forge(keys.vk, p, true, effort).has_value();
        }
        const double expect = 1.0 - std::pow(1.0 - std::ldexp(1.0, -10), static_cast<double>(effort));
        const double sigma = std::sqrt(expect * (1 - expect) / trials);
        CHECK(std::abs(hits / double(trials) - expect) <= 3 * sigma + 1e-9);
    }
}

TEST_CASE("forging does not depend on worker count") {
    const OtsParams p{12, 20};
    for (std::uint64_t t = 0; t < 20; ++t) {
        CounterRng r(17, t, 0);
        const auto keys = ots_gen(p, r);
        const auto one = ots_forge(keys.vk, p, false, 1 << 20, 1);
        REQUIRE(one == ots_forge(keys.vk, p, false, 1 << 20, 3));
        REQUIRE(one == ots_forge(keys.vk, p, false, 1 << 20, 8));
    }
}
