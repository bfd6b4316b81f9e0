#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "paramsep/coding.hpp"

using namespace paramsep;

namespace {

// Straight sum of m_j * x^j using Field::pow, no Horner.
Codeword naive_encode(const RsCode& c, const SymbolVector& m) {
    Codeword out(c.n(), 0);
    for (std::size_t i = 0; i < c.n(); ++i)
        for (std::size_t j = 0; j < c.k(); ++j)
            out[i] ^= c.field().mul(m[j], c.field().pow(c.eval_points()[i], j));
    return out;
}

SymbolVector message_from_index(std::uint64_t idx, std::size_t k, unsigned ell) {
    SymbolVector m(k);
    for (std::size_t j = 0; j < k; ++j) {
        m[j] = static_cast<Symbol>(idx & ((1u << ell) - 1));
        idx >>= ell;
    }
    return m;
}

// Every message within `radius` of `word`, by enumerating all q^k messages.
std::set<SymbolVector> brute_ball(const RsCode& c, const Codeword& word, std::size_t radius) {
    std::set<SymbolVector> out;
    const std::uint64_t total = std::uint64_t{1} << (c.k() * c.field().ell());
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        auto m = message_from_index(idx, c.k(), c.field().ell());
        if (hamming_distance(naive_encode(c, m), word) <= radius) out.insert(std::move(m));
    }
    return out;
}

SymbolVector random_message(const RsCode& c, std::mt19937_64& gen) {
    SymbolVector m(c.k());
    for (auto& x : m) x = static_cast<Symbol>(gen() % c.field().size());
    return m;
}

// Changes exactly `errors` distinct positions to different values.
void corrupt(Codeword& w, std::size_t errors, std::uint32_t q, std::mt19937_64& gen) {
    std::vector<std::size_t> idx(w.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), gen);
    for (std::size_t e = 0; e < errors; ++e) w[idx[e]] ^= static_cast<Symbol>(1 + gen() % (q - 1));
}

}  // namespace

TEST_CASE("encode") {
    const RsCode c(Field(3), 7, 2);
    CHECK(c.encode(SymbolVector{0, 0}) == Codeword(7, 0));
    CHECK(c.encode(SymbolVector{5, 0}) == Codeword(7, 5));
    const auto cw = c.encode(SymbolVector{1, 2});
    for (std::size_t i = 0; i < 7; ++i) CHECK(cw[i] == (1 ^ c.field().mul(2, c.eval_points()[i])));
    CHECK(cw == naive_encode(c, SymbolVector{1, 2}));
    CHECK_THROWS_AS(c.encode(SymbolVector{1}), std::invalid_argument);
    CHECK(c.distance() == 6);
    CHECK(c.unique_radius() == 2);
}

TEST_CASE("evaluation points and validation") {
    const RsCode c(Field(4), 15, 4);
    for (std::size_t i = 0; i < 15; ++i) CHECK(c.eval_points()[i] == i + 1);
    const RsCode full(Field(4), 16, 3);
    CHECK(full.eval_points().back() == 0);
    CHECK_THROWS_AS(RsCode(Field(2), 5, 2), std::invalid_argument);
    CHECK_THROWS_AS(RsCode(Field(3), 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(RsCode(Field(3), 3, 1, SymbolVector{1, 2, 1}), std::invalid_argument);
}

TEST_CASE("Horner encoding matches naive evaluation") {
    std::mt19937_64 gen(5);
    for (unsigned ell = 2; ell <= 8; ++ell) {
        const std::size_t q = std::size_t{1} << ell;
        const std::size_t n = 1 + gen() % q;
        const std::size_t k = 1 + gen() % n;
        const RsCode c(Field(ell), n, k);
        for (int t = 0; t < 50; ++t) {
            const auto m = random_message(c, gen);
            REQUIRE(c.encode(m) == naive_encode(c, m));
        }
    }
}

TEST_CASE("codewords are k-wise independent") {
    // l = 2, n = 3, k = 2: every pair of coordinates sees each of the 16 value pairs exactly once.
    const RsCode c(Field(2), 3, 2);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            std::map<std::pair<Symbol, Symbol>, int> hist;
            std::map<Symbol, int> single;
            for (std::uint64_t idx = 0; idx < 16; ++idx) {
                const auto cw = c.encode(message_from_index(idx, 2, 2));
                ++hist[{cw[i], cw[j]}];
                ++single[cw[i]];
            }
            REQUIRE(hist.size() == 16);
            for (const auto& [key, cnt] : hist) REQUIRE(cnt == 1);
            for (const auto& [key, cnt] : single) REQUIRE(cnt == 4);
        }
}

TEST_CASE("unique decoding at the radius") {
    std::mt19937_64 gen(17);
    const RsCode c(Field(4), 15, 4);
    CHECK(c.unique_radius() == 5);
    for (int t = 0; t < 2000; ++t) {
        const auto m = random_message(c, gen);
        auto w = c.encode(m);
        REQUIRE(c.decode_unique(w) == m);
        corrupt(w, 5, 16, gen);
        REQUIRE(c.decode_unique(w) == m);
    }
}

TEST_CASE("unique decoding agrees with the nearest-codeword oracle") {
    std::mt19937_64 gen(23);
    const RsCode c(Field(3), 7, 2);
    for (int t = 0; t < 3000; ++t) {
        Codeword w(7);
        if (t % 2 == 0) {
            w = c.encode(random_message(c, gen));
            corrupt(w, gen() % 6, 8, gen);
        } else {
            for (auto& x : w) x = static_cast<Symbol>(gen() % 8);
        }
        const auto ball = brute_ball(c, w, c.unique_radius());
        const auto got = c.decode_unique(w);
        REQUIRE(ball.size() <= 1);
        if (ball.empty())
            REQUIRE_FALSE(got.has_value());
        else
            REQUIRE(got == *ball.begin());
    }
}

TEST_CASE("four errors steered toward a second codeword decode to it") {
    const RsCode c(Field(3), 7, 2);
    // m2 - m1 = x + 7 vanishes at the last evaluation point, so the codewords differ in 6 places.
    const SymbolVector m1{3, 5}, m2{3 ^ 7, 5 ^ 1};
    const auto c1 = c.encode(m1), c2 = c.encode(m2);
    REQUIRE(hamming_distance(c1, c2) == 6);
    auto w = c1;
    for (std::size_t i = 0; i < 4; ++i) w[i] = c2[i];
    REQUIRE(hamming_distance(w, c1) == 4);
    REQUIRE(brute_ball(c, w, 2) == std::set<SymbolVector>{m2});
    CHECK(c.decode_unique(w) == m2);
}

TEST_CASE("interpolation parameters") {
    const auto gp = choose_gs_params(16, 3, 9);
    CHECK(gp.monomials > gp.constraints);
    CHECK(gp.multiplicity >= 1);
    // Each codeword within the radius agrees on n - radius points, each worth `multiplicity` roots.
    CHECK(gp.multiplicity * (16 - 9) > gp.weighted_degree);
    CHECK_THROWS_AS(choose_gs_params(16, 3, 16), std::invalid_argument);
    const RsCode c(Field(4), 16, 3);
    CHECK(c.max_list_radius() == 9);
    CHECK_THROWS_AS(c.decode_list(Codeword(16, 0), 10), std::invalid_argument);
}

TEST_CASE("list decoding examples") {
    std::mt19937_64 gen(29);
    const RsCode c(Field(4), 16, 3);
    const auto m = random_message(c, gen);
    CHECK(c.decode_list(c.encode(m), 0) == std::vector<SymbolVector>{m});

    for (int t = 0; t < 30; ++t) {
        const auto mt = random_message(c, gen);
        auto w = c.encode(mt);
        corrupt(w, 9, 16, gen);
        const auto got = c.decode_list(w, 9);
        const auto ball = brute_ball(c, w, 9);
        REQUIRE(std::find(got.begin(), got.end(), mt) != got.end());
        REQUIRE(std::set<SymbolVector>(got.begin(), got.end()) == ball);
        REQUIRE(std::is_sorted(got.begin(), got.end()));
    }

    const SymbolVector a{1, 2, 3}, b{7, 0, 9};
    const auto ca = c.encode(a), cb = c.encode(b);
    Codeword mix(16);
    for (std::size_t i = 0; i < 16; ++i) mix[i] = i < 8 ? ca[i] : cb[i];
    const auto got = c.decode_list(mix, 8);
    CHECK(std::find(got.begin(), got.end(), a) != got.end());
    CHECK(std::find(got.begin(), got.end(), b) != got.end());
    CHECK(std::set<SymbolVector>(got.begin(), got.end()) == brute_ball(c, mix, 8));
}

TEST_CASE("list decoding equals the brute-force ball on micro instances") {
    std::mt19937_64 gen(31);
    struct Shape {
        unsigned ell;
        std::size_t n, k;
    };
    for (const Shape s : {Shape{3, 5, 2}, Shape{3, 5, 1}, Shape{3, 8, 2}, Shape{3, 7, 1}, Shape{4, 12, 2}}) {
        const RsCode c(Field(s.ell), s.n, s.k);
        for (int t = 0; t < 200; ++t) {
            Codeword w(s.n);
            if (t % 2 == 0) {
                w = c.encode(random_message(c, gen));
                corrupt(w, gen() % (c.max_list_radius() + 1), c.field().size(), gen);
            } else {
                for (auto& x : w) x = static_cast<Symbol>(gen() % c.field().size());
            }
            for (std::size_t r = 0; r <= c.max_list_radius(); ++r) {
                const auto got = c.decode_list(w, r);
                REQUIRE(std::set<SymbolVector>(got.begin(), got.end()) == brute_ball(c, w, r));
            }
        }
    }
}

TEST_CASE("wrapper round trip under maximal corruption") {
    std::mt19937_64 gen(37);
    const Field f(4);
    const auto wc = WrapCode::for_radius(f, 8, 6);
    CHECK(wc.correct_radius() >= 6);
    CHECK(wc.decode(wc.encode(BitVector(8))) == BitVector(8));
    for (int t = 0; t < 2000; ++t) {
        BitVector v(8);
        for (std::size_t i = 0; i < 8; ++i) v.set(i, gen() & 1u);
        auto w = wc.encode(v);
        corrupt(w, wc.correct_radius(), 16, gen);
        REQUIRE(wc.decode(w) == v);
    }
}

TEST_CASE("wrapper with repetition survives adversarial placement within its radius") {
    std::mt19937_64 gen(41);
    const Field f(3);
    const WrapCode wc(RsCode(f, 7, 2), 12, 2, 3);
    CHECK(wc.length() == 42);
    CHECK(wc.correct_radius() == 5);  // (2 + 1) * 2 - 1
    for (int t = 0; t < 2000; ++t) {
        BitVector v(12);
        for (std::size_t i = 0; i < 12; ++i) v.set(i, gen() & 1u);
        auto w = wc.encode(v);
        // Concentrate on one block: knock out two copies of two positions plus one stray.
        const std::size_t blk = gen() % 2;
        const std::size_t p1 = gen() % 7, p2 = (p1 + 1 + gen() % 6) % 7;
        for (std::size_t p : {p1, p2})
            for (unsigned r = 0; r < 2; ++r) w[blk * 21 + r * 7 + p] ^= static_cast<Symbol>(1 + gen() % 7);
        w[gen() % 42] ^= static_cast<Symbol>(1 + gen() % 7);
        REQUIRE(wc.decode(w) == v);
    }
}

TEST_CASE("wrapper corruption one past the radius is caught or misdecodes, never silently") {
    // Single block, repeat 1: radius e = 3 at n = 7, k = 1. Steer e + 1 positions toward a codeword
    // that differs everywhere.
    const Field f(3);
    const WrapCode wc(RsCode(f, 7, 1), 3, 1, 1);
    REQUIRE(wc.correct_radius() == 3);
    const auto v = BitVector::from_string("101");
    auto w = wc.encode(v);
    const auto other = wc.inner().encode(SymbolVector{0b010});
    for (std::size_t i = 0; i < 4; ++i) w[i] = other[i];
    const auto got = wc.decode(w);
    CHECK((!got.has_value() || *got != v));

    // Exhaustive placement search at n = 5: some radius + 1 pattern must break decoding.
    const WrapCode small(RsCode(f, 5, 1), 3, 1, 1);  // e = 2
    const auto cw = small.encode(v);
    bool any_break = false;
    for (unsigned mask = 0; mask < 32; ++mask) {
        if (std::popcount(mask) != 3) continue;
        for (Symbol target = 0; target < 8; ++target) {
            const auto alt = small.inner().encode(SymbolVector{target});
            auto w2 = cw;
            for (std::size_t i = 0; i < 5; ++i)
                if (mask >> i & 1u) w2[i] = alt[i];
            if (hamming_distance(w2, cw) != 3) continue;
            const auto res = small.decode(w2);
            if (!res || *res != v) any_break = true;
        }
    }
    CHECK(any_break);
}

TEST_CASE("wrapper padding must decode to zero") {
    const Field f(4);
    const WrapCode wc(RsCode(f, 7, 2), 5, 1, 1);
    CHECK(wc.padding_bits() == 3);
    const auto bad = wc.inner().encode(SymbolVector{0, 0b1000});
    CHECK_FALSE(wc.decode(bad).has_value());
    CHECK_THROWS_AS(WrapCode(RsCode(f, 7, 2), 9, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(WrapCode(RsCode(f, 7, 2), 8, 1, 2), std::invalid_argument);
}
