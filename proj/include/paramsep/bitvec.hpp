#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace paramsep {

/// Packed vector over GF(2). Bit i lives in word i/64 at position i%64.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t nbits) : words_((nbits + 63) / 64, 0), size_(nbits) {}

    /// Low `nbits` bits of `value`, bit 0 first.
    static BitVector from_uint(std::uint64_t value, std::size_t nbits);
    /// Parses a string of '0'/'1' characters, index 0 first.
    static BitVector from_string(std::string_view bits);
    static BitVector from_hex(std::string_view hex, std::size_t nbits);

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) noexcept {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    /// First min(64, size) bits as an integer, bit 0 least significant.
    std::uint64_t to_uint() const noexcept;

    bool is_zero() const noexcept;
    std::size_t popcount() const noexcept;

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend bool operator==(const BitVector&, const BitVector&) = default;
    /// Lexicographic on packed words, most significant word first.
    friend bool operator<(const BitVector& a, const BitVector& b);

    /// Bits at the given positions, in the order given.
    BitVector restrict_to(std::span<const std::uint32_t> positions) const;
    BitVector slice(std::size_t offset, std::size_t len) const;
    void append(const BitVector& tail);
    void resize(std::size_t nbits);

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::span<std::uint64_t> words() noexcept { return words_; }

    std::string to_string() const;
    /// Little-endian nibbles: hex digit j holds bits 4j..4j+3.
    std::string to_hex() const;

private:
    void clear_tail() noexcept;

    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

/// XOR of coordinatewise ANDs. Throws std::invalid_argument on length mismatch.
bool gf2_inner(const BitVector& a, const BitVector& b);

}  // namespace paramsep
