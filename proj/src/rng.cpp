#include "paramsep/rng.hpp"

namespace paramsep {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> CounterRng::philox(std::array<std::uint32_t, 4> c,
                                                std::array<std::uint32_t, 2> k) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

void CounterRng::refill() noexcept {
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32) ^ (role_ << 24),
        static_cast<std::uint32_t>(trial_),
        static_cast<std::uint32_t>(trial_ >> 32),
    };
    ++block_;
    const auto out = philox(ctr, key_);
    buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    pos_ = 0;
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection.
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>((*this)()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

BitVector CounterRng::bits(std::size_t n) {
    BitVector v(n);
    auto w = v.words();
    for (auto& word : w) word = (*this)();
    v.resize(n);  // clears bits past n
    return v;
}

}  // namespace paramsep
