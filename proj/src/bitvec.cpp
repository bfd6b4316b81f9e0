#include "paramsep/bitvec.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace paramsep {

BitVector BitVector::from_uint(std::uint64_t value, std::size_t nbits) {
    BitVector v(nbits);
    if (nbits == 0) return v;
    v.words_[0] = nbits >= 64 ? value : (value & ((std::uint64_t{1} << nbits) - 1));
    return v;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i, true);
        else if (bits[i] != '0')
            throw std::invalid_argument("BitVector::from_string: expected '0' or '1'");
    }
    return v;
}

BitVector BitVector::from_hex(std::string_view hex, std::size_t nbits) {
    if (hex.size() != (nbits + 3) / 4)
        throw std::invalid_argument("BitVector::from_hex: length does not match bit count");
    BitVector v(nbits);
    for (std::size_t j = 0; j < hex.size(); ++j) {
        const char c = hex[j];
        unsigned d;
        if (c >= '0' && c <= '9')
            d = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f')
            d = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F')
            d = static_cast<unsigned>(c - 'A' + 10);
        else
            throw std::invalid_argument("BitVector::from_hex: bad digit");
        for (unsigned t = 0; t < 4; ++t) {
            const std::size_t i = 4 * j + t;
            if ((d >> t) & 1u) {
                if (i >= nbits) throw std::invalid_argument("BitVector::from_hex: bits beyond length");
                v.set(i, true);
            }
        }
    }
    return v;
}

std::uint64_t BitVector::to_uint() const noexcept { return words_.empty() ? 0 : words_[0]; }

bool BitVector::is_zero() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t BitVector::popcount() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.size_ != size_) throw std::invalid_argument("BitVector xor: length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

bool operator<(const BitVector& a, const BitVector& b) {
    if (a.size_ != b.size_) return a.size_ < b.size_;
    for (std::size_t i = a.words_.size(); i-- > 0;) {
        if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
    }
    return false;
}

BitVector BitVector::restrict_to(std::span<const std::uint32_t> positions) const {
    BitVector out(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if (positions[j] >= size_) throw std::out_of_range("BitVector::restrict_to: position out of range");
        if (get(positions[j])) out.set(j, true);
    }
    return out;
}

BitVector BitVector::slice(std::size_t offset, std::size_t len) const {
    if (offset + len > size_) throw std::out_of_range("BitVector::slice");
    BitVector out(len);
    for (std::size_t j = 0; j < len; ++j)
        if (get(offset + j)) out.set(j, true);
    return out;
}

void BitVector::append(const BitVector& tail) {
    const std::size_t old = size_;
    resize(size_ + tail.size_);
    for (std::size_t j = 0; j < tail.size_; ++j)
        if (tail.get(j)) set(old + j, true);
}

void BitVector::resize(std::size_t nbits) {
    words_.resize((nbits + 63) / 64, 0);
    size_ = nbits;
    clear_tail();
}

void BitVector::clear_tail() noexcept {
    if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

std::string BitVector::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s((size_ + 3) / 4, '0');
    for (std::size_t j = 0; j < s.size(); ++j) {
        unsigned d = 0;
        for (unsigned t = 0; t < 4; ++t) {
            const std::size_t i = 4 * j + t;
            if (i < size_ && get(i)) d |= 1u << t;
        }
        s[j] = digits[d];
    }
    return s;
}

bool gf2_inner(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("gf2_inner: length mismatch");
    std::uint64_t acc = 0;
    auto wa = a.words();
    auto wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) acc ^= wa[i] & wb[i];
    return std::popcount(acc) & 1;
}

}  // namespace paramsep
