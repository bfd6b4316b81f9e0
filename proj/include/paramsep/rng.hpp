#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "paramsep/bitvec.hpp"

namespace paramsep {

/// Philox4x32-10 driven as a stream: key = 64-bit seed, counter =
/// (block index, role, trial). Streams with different (trial, role) never overlap.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t trial, std::uint32_t role) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          trial_(trial),
          role_(role) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (pos_ == 2) refill();
        return buf_[pos_++];
    }

    /// Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) noexcept;
    bool coin() noexcept { return (*this)() & 1u; }
    BitVector bits(std::size_t n);

    /// Raw Philox block, exposed for known-answer tests.
    static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t trial_;
    std::uint32_t role_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buf_{};
    unsigned pos_ = 2;
};

}  // namespace paramsep
