#include "paramsep/crypto.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstring>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace paramsep {

namespace {

constexpr unsigned char kPrgKey[16] = {0x70, 0x61, 0x72, 0x61, 0x6d, 0x73, 0x65, 0x70,
                                       0x2d, 0x74, 0x6f, 0x79, 0x2d, 0x70, 0x72, 0x67};

struct CipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* c) const noexcept { EVP_CIPHER_CTX_free(c); }
};
struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* c) const noexcept { EVP_MD_CTX_free(c); }
};

class AesEcb {
public:
    AesEcb() : ctx_(EVP_CIPHER_CTX_new()) {
        if (!ctx_ || EVP_EncryptInit_ex(ctx_.get(), EVP_aes_128_ecb(), nullptr, kPrgKey, nullptr) != 1)
            throw std::runtime_error("AES-128 initialisation failed");
        EVP_CIPHER_CTX_set_padding(ctx_.get(), 0);
    }

    void encrypt(const unsigned char* in, unsigned char* out, int len) {
        int outl = 0;
        if (EVP_EncryptUpdate(ctx_.get(), out, &outl, in, len) != 1 || outl != len)
            throw std::runtime_error("AES-128 encryption failed");
    }

private:
    std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter> ctx_;
};

/// Counter blocks: seed (8 bytes LE) | counter (4 bytes LE) | seed_bits | kernel tag (3 bytes LE).
void expand_into(AesEcb& aes, std::uint64_t seed, const ToyPrg& g, std::size_t nblocks, std::vector<unsigned char>& buf) {
    std::vector<unsigned char> in(16 * nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
        unsigned char* blk = in.data() + 16 * b;
        for (int i = 0; i < 8; ++i) blk[i] = static_cast<unsigned char>(seed >> (8 * i));
        for (int i = 0; i < 4; ++i) blk[8 + i] = static_cast<unsigned char>(b >> (8 * i));
        blk[12] = static_cast<unsigned char>(g.seed_bits);
        for (int i = 0; i < 3; ++i) blk[13 + i] = static_cast<unsigned char>(g.kernel >> (8 * i));
    }
    buf.resize(in.size());
    aes.encrypt(in.data(), buf.data(), static_cast<int>(in.size()));
}

void check_prg(const ToyPrg& g) {
    if (g.seed_bits > 64) throw std::invalid_argument("ToyPrg: seed_bits must be at most 64");
    if (g.out_bits <= g.seed_bits) throw std::invalid_argument("ToyPrg: out_bits must exceed seed_bits");
    if (g.out_bits > (std::size_t{1} << 32) * 128) throw std::invalid_argument("ToyPrg: out_bits too large");
    if (g.kernel >= (1u << 24)) throw std::invalid_argument("ToyPrg: kernel tag must fit in 24 bits");
}

BitVector bytes_to_bits(const std::vector<unsigned char>& buf, std::size_t nbits) {
    BitVector out(nbits);
    auto w = out.words();
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::uint64_t x = 0;
        for (int j = 0; j < 8; ++j) {
            const std::size_t idx = 8 * i + static_cast<std::size_t>(j);
            if (idx < buf.size()) x |= static_cast<std::uint64_t>(buf[idx]) << (8 * j);
        }
        w[i] = x;
    }
    out.resize(nbits);
    return out;
}

/// Smallest index in [0, count) satisfying the predicate. Each worker gets its own predicate
/// instance from `make`, scans interleaved chunks in ascending order, and stops once a
/// smaller match is known.
template <class MakePred>
std::optional<std::uint64_t> first_match(std::uint64_t count, unsigned workers, MakePred make) {
    workers = std::max(1u, workers);
    if (workers == 1 || count < 4096) {
        auto pred = make();
        for (std::uint64_t i = 0; i < count; ++i)
            if (pred(i)) return i;
        return std::nullopt;
    }
    constexpr std::uint64_t chunk = 1024;
    std::atomic<std::uint64_t> best{count};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            auto pred = make();
            for (std::uint64_t start = w * chunk; start < count; start += workers * chunk) {
                if (start >= best.load(std::memory_order_relaxed)) return;
                const std::uint64_t end = std::min(count, start + chunk);
                for (std::uint64_t i = start; i < end; ++i) {
                    if (pred(i)) {
                        std::uint64_t cur = best.load();
                        while (i < cur && !best.compare_exchange_weak(cur, i)) {
                        }
                        return;
                    }
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    const std::uint64_t b = best.load();
    if (b == count) return std::nullopt;
    return b;
}

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()), md_(EVP_sha256()) {
        if (!ctx_) throw std::runtime_error("SHA-256 context allocation failed");
    }

    std::array<unsigned char, 32> digest(const unsigned char* data, std::size_t len) {
        std::array<unsigned char, 32> out{};
        unsigned int outl = 0;
        if (EVP_DigestInit_ex(ctx_.get(), md_, nullptr) != 1 || EVP_DigestUpdate(ctx_.get(), data, len) != 1 ||
            EVP_DigestFinal_ex(ctx_.get(), out.data(), &outl) != 1)
            throw std::runtime_error("SHA-256 failed");
        return out;
    }

private:
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx_;
    const EVP_MD* md_;
};

void check_ots(const OtsParams& p) {
    if (p.hash_bits == 0 || p.hash_bits > 64) throw std::invalid_argument("OtsParams: hash_bits must be in [1, 64]");
    if (p.preimage_bits == 0 || p.preimage_bits > 64)
        throw std::invalid_argument("OtsParams: preimage_bits must be in [1, 64]");
}

std::uint64_t low_mask(unsigned bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

std::uint64_t hash_with(Sha256& h, std::uint64_t preimage, const OtsParams& p) {
    unsigned char msg[12] = {'o', 't', 's', static_cast<unsigned char>(p.preimage_bits)};
    for (int i = 0; i < 8; ++i) msg[4 + i] = static_cast<unsigned char>(preimage >> (8 * i));
    const auto d = h.digest(msg, sizeof msg);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(d[i]) << (8 * i);
    return x & low_mask(p.hash_bits);
}

}  // namespace

BitVector prg_expand(std::uint64_t seed, const ToyPrg& g) {
    check_prg(g);
    if (g.seed_bits < 64 && (seed >> g.seed_bits) != 0) throw std::invalid_argument("prg_expand: seed wider than seed_bits");
    thread_local AesEcb aes;
    std::vector<unsigned char> buf;
    expand_into(aes, seed, g, (g.out_bits + 127) / 128, buf);
    return bytes_to_bits(buf, g.out_bits);
}

BitVector prg_expand(const BitVector& seed, const ToyPrg& g) {
    if (seed.size() != g.seed_bits)
        throw std::invalid_argument("prg_expand: seed has " + std::to_string(seed.size()) + " bits, expected " +
                                    std::to_string(g.seed_bits));
    return prg_expand(seed.to_uint(), g);
}

std::optional<std::uint64_t> prg_invert(const BitVector& target, const ToyPrg& g, unsigned workers) {
    check_prg(g);
    if (g.seed_bits > kMaxInvertibleSeedBits)
        throw std::invalid_argument("prg_invert: seed_bits above the brute-force cap of 24");
    if (target.size() != g.out_bits) throw std::invalid_argument("prg_invert: target length mismatch");
    // Compare the first block before expanding fully.
    const auto first_words = target.words();
    const std::uint64_t lead_mask = g.out_bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.out_bits) - 1;
    return first_match(std::uint64_t{1} << g.seed_bits, workers, [&] {
        return [&, aes = std::make_shared<AesEcb>(), buf = std::vector<unsigned char>()](std::uint64_t s) mutable {
            expand_into(*aes, s, g, 1, buf);
            std::uint64_t lead = 0;
            for (int j = 0; j < 8; ++j) lead |= static_cast<std::uint64_t>(buf[j]) << (8 * j);
            if ((lead & lead_mask) != (first_words[0] & lead_mask)) return false;
            return prg_expand(s, g) == target;
        };
    });
}

std::uint64_t ots_hash(std::uint64_t preimage, const OtsParams& p) {
    check_ots(p);
    thread_local Sha256 h;
    return hash_with(h, preimage, p);
}

OtsKeys ots_gen(const OtsParams& p, CounterRng& rng) {
    check_ots(p);
    OtsKeys keys;
    keys.params = p;
    for (int b = 0; b < 2; ++b) {
        keys.sk[b] = rng() & low_mask(p.preimage_bits);
        keys.vk[b] = ots_hash(keys.sk[b], p);
    }
    return keys;
}

Signature ots_sign(const OtsKeys& keys, bool bit) { return keys.sk[bit ? 1 : 0]; }

bool ots_verify(const std::array<std::uint64_t, 2>& vk, const OtsParams& p, bool bit, Signature sig) {
    check_ots(p);
    if ((sig & ~low_mask(p.preimage_bits)) != 0) return false;
    return ots_hash(sig, p) == vk[bit ? 1 : 0];
}

std::optional<Signature> ots_forge(const std::array<std::uint64_t, 2>& vk, const OtsParams& p, bool target_bit,
                                   std::uint64_t effort, unsigned workers) {
    check_ots(p);
    const std::uint64_t space = p.preimage_bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p.preimage_bits);
    const std::uint64_t count = std::min(effort, space);
    const std::uint64_t want = vk[target_bit ? 1 : 0];
    return first_match(count, workers, [&] {
        return [&, h = std::make_shared<Sha256>()](std::uint64_t x) { return hash_with(*h, x, p) == want; };
    });
}

}  // namespace paramsep
