#include "paramsep/tasks.hpp"

#include <algorithm>
#include <cmath>

namespace paramsep {

namespace {

std::uint64_t low_mask(unsigned bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

std::uint64_t draw_seed(CounterRng& rng, unsigned bits) { return rng() & low_mask(bits); }

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_code_shape(unsigned ell, std::size_t n, std::size_t k, const char* who) {
    require(ell >= 1 && ell <= kMaxFieldBits, std::string(who) + ": ell out of range");
    require(k >= 1 && k < n && n <= (std::size_t{1} << ell), std::string(who) + ": need 1 <= k < n <= 2^ell");
}

Codeword take(std::span<const Symbol> flat, std::size_t& pos, std::size_t len) {
    Codeword out(flat.begin() + static_cast<std::ptrdiff_t>(pos), flat.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
    return out;
}

std::vector<Segment> layout(std::initializer_list<std::pair<const char*, std::size_t>> parts) {
    std::vector<Segment> out;
    std::size_t off = 0;
    for (const auto& [name, len] : parts) {
        out.push_back({name, off, len});
        off += len;
    }
    return out;
}

void append(SymbolVector& out, const Codeword& part) { out.insert(out.end(), part.begin(), part.end()); }

}  // namespace

std::size_t segment_of(std::span<const Segment> manifest, std::size_t pos) {
    for (std::size_t i = 0; i < manifest.size(); ++i)
        if (pos >= manifest[i].offset && pos < manifest[i].offset + manifest[i].length) return i;
    throw std::out_of_range("segment_of: position past the last segment");
}

// ---------------------------------------------------------------------------

TaskParams1 make_task1(std::string name, unsigned lambda, unsigned ell, std::size_t n, std::size_t k,
                       std::size_t alpha, std::size_t beta) {
    check_code_shape(ell, n, k, "make_task1");
    require(3 * k < n, "make_task1: rate must be below 1/3");
    require(lambda >= 1 && lambda <= 64, "make_task1: lambda must be 1..64");
    require(lambda < alpha && alpha <= beta, "make_task1: need lambda < alpha <= beta");
    require(k * ell <= alpha && n * ell <= beta, "make_task1: sampled widths exceed alpha or beta");
    require(beta <= 0xFFFFFFFFu, "make_task1: beta too large");

    const Field field(ell);
    const std::size_t budget = (n - k) / 2;
    const SubsetSampler s1 = make_sampler(static_cast<std::uint32_t>(alpha), static_cast<std::uint32_t>(k * ell), kKernelSamp1);
    const SubsetSampler s2 = make_sampler(static_cast<std::uint32_t>(beta), static_cast<std::uint32_t>(n * ell), kKernelSamp2);
    TaskParams1 p{
        .name = std::move(name),
        .lambda = lambda,
        .ell = ell,
        .n = n,
        .k = k,
        .alpha = alpha,
        .beta = beta,
        .enc = RsCode(field, n, k),
        .samp1 = s1,
        .samp2 = s2,
        .f1 = ToyPrg{lambda, alpha, kKernelF1},
        .f2 = ToyPrg{lambda, beta, kKernelF2},
        .wrap_u1 = WrapCode::for_radius(field, s1.r, budget),
        .wrap_u2 = WrapCode::for_radius(field, s2.r, budget),
        .budget = budget,
    };
    require(p.enc.unique_radius() >= budget, "make_task1: Enc cannot absorb the budget");
    return p;
}

Secret1 expand_secret1(std::uint64_t s, const TaskParams1& params) {
    require(params.lambda == 64 || s < (std::uint64_t{1} << params.lambda), "expand_secret1: seed wider than lambda");
    return {prg_expand(s, params.f1), prg_expand(s, params.f2)};
}

SymbolVector restricted_symbols(const BitVector& bits, std::span<const std::uint32_t> idx, unsigned ell) {
    return bits_to_symbols(bits.restrict_to(idx), ell);
}

Sample1 sample_c1(const Secret1& secret, const TaskParams1& params, CounterRng& rng) {
    require(secret.p.size() == params.alpha && secret.q.size() == params.beta, "sample_c1: secret length mismatch");
    const std::uint64_t u1 = draw_seed(rng, params.samp1.r);
    const std::uint64_t u2 = draw_seed(rng, params.samp2.r);
    const std::uint32_t q = params.field().size();
    SymbolVector m(params.k);
    for (auto& sym : m) sym = static_cast<Symbol>(rng.below(q));

    Sample1 out;
    out.x.u1_enc = params.wrap_u1.encode(BitVector::from_uint(u1, params.samp1.r));
    out.x.u2_enc = params.wrap_u2.encode(BitVector::from_uint(u2, params.samp2.r));
    out.x.masked = params.enc.encode(m);
    const SymbolVector mask = restricted_symbols(secret.q, samp(u2, params.samp2), params.ell);
    for (std::size_t i = 0; i < params.n; ++i) out.x.masked[i] ^= mask[i];
    out.label = gf2_inner(symbols_to_bits(m, params.ell), secret.p.restrict_to(samp(u1, params.samp1)));
    out.x.m = std::move(m);
    return out;
}

Sample1 sample_c1(std::uint64_t s, const TaskParams1& params, CounterRng& rng) {
    return sample_c1(expand_secret1(s, params), params, rng);
}

std::uint64_t decode_seed(const WrapCode& wrap, std::span<const Symbol> word) {
    const auto bits = wrap.decode(word);
    if (!bits) throw DecodeFailure("wrapped segment beyond correction radius");
    return bits->to_uint();
}

bool label_c1(const Instance1& x, const TaskParams1& params, const BitVector& p) {
    require(p.size() == params.alpha, "label_c1: P length mismatch");
    const std::uint64_t u1 = decode_seed(params.wrap_u1, x.u1_enc);
    return gf2_inner(symbols_to_bits(x.m, params.ell), p.restrict_to(samp(u1, params.samp1)));
}

bool label_c1(const Instance1& x, const TaskParams1& params, std::uint64_t s) {
    return label_c1(x, params, prg_expand(s, params.f1));
}

std::vector<Segment> manifest(const TaskParams1& params) {
    return layout({{"u1", params.wrap_u1.length()},
                   {"u2", params.wrap_u2.length()},
                   {"m", params.k},
                   {"masked", params.n}});
}

SymbolVector flatten(const Instance1& x) {
    SymbolVector out;
    out.reserve(x.u1_enc.size() + x.u2_enc.size() + x.m.size() + x.masked.size());
    append(out, x.u1_enc);
    append(out, x.u2_enc);
    append(out, x.m);
    append(out, x.masked);
    return out;
}

Instance1 unflatten1(std::span<const Symbol> flat, const TaskParams1& params) {
    if (flat.size() != params.length())
        throw std::invalid_argument("unflatten1: expected " + std::to_string(params.length()) + " symbols, got " +
                                    std::to_string(flat.size()));
    std::size_t pos = 0;
    Instance1 x;
    x.u1_enc = take(flat, pos, params.wrap_u1.length());
    x.u2_enc = take(flat, pos, params.wrap_u2.length());
    x.m = take(flat, pos, params.k);
    x.masked = take(flat, pos, params.n);
    return x;
}

// ---------------------------------------------------------------------------

TaskParams2 make_task2(std::string name, unsigned lambda, unsigned ell, std::size_t n, std::size_t k,
                       std::size_t alpha, unsigned hash_bits, unsigned preimage_bits) {
    check_code_shape(ell, n, k, "make_task2");
    require(4 * k < n, "make_task2: rate must be below 1/4");
    require(n % 2 == 0, "make_task2: n must be even");
    require(n <= alpha && alpha <= 0xFFFFFFFFu, "make_task2: need n <= alpha");
    require(hash_bits >= 1 && hash_bits <= 64, "make_task2: hash_bits must be 1..64");
    require(preimage_bits >= 1 && preimage_bits <= 64 && 1 + preimage_bits <= k * ell,
            "make_task2: (b, signature) must fit in k*ell bits");

    const Field field(ell);
    RsCode lenc(field, n, k);
    const std::size_t budget = lenc.max_list_radius();
    require(n / 2 <= budget, "make_task2: forging subset n/2 exceeds the budget");
    const SubsetSampler s = make_sampler(static_cast<std::uint32_t>(alpha), static_cast<std::uint32_t>(n), kKernelSampC2);
    return TaskParams2{
        .name = std::move(name),
        .lambda = lambda,
        .ell = ell,
        .n = n,
        .k = k,
        .alpha = alpha,
        .lenc = std::move(lenc),
        .samp = s,
        .ots = OtsParams{hash_bits, preimage_bits},
        .wrap_u = WrapCode::for_radius(field, s.r, budget + 1),
        .wrap_v = WrapCode::for_radius(field, n, budget + 1),
        .wrap_vk = WrapCode::for_radius(field, 2 * std::size_t{hash_bits}, budget + 1),
        .wrap_bit = WrapCode::for_radius(field, 1, budget + 1),
        .budget = budget,
    };
}

SymbolVector pack_signed_bit(bool b, Signature sig, const TaskParams2& params) {
    require(params.ots.preimage_bits == 64 || sig >> params.ots.preimage_bits == 0,
            "pack_signed_bit: signature wider than preimage_bits");
    BitVector bits(params.k * params.ell);
    bits.set(0, b);
    for (unsigned i = 0; i < params.ots.preimage_bits; ++i) bits.set(1 + i, (sig >> i) & 1u);
    return bits_to_symbols(bits, params.ell);
}

std::optional<SignedBit> unpack_signed_bit(std::span<const Symbol> msg, const TaskParams2& params) {
    const BitVector bits = symbols_to_bits(msg, params.ell);
    for (std::size_t i = 1 + params.ots.preimage_bits; i < bits.size(); ++i)
        if (bits.get(i)) return std::nullopt;
    SignedBit out{bits.get(0), 0};
    for (unsigned i = 0; i < params.ots.preimage_bits; ++i) out.sig |= std::uint64_t{bits.get(1 + i)} << i;
    return out;
}

Sample2 sample_c2(const BitVector& s, const TaskParams2& params, CounterRng& rng) {
    require(s.size() == params.alpha, "sample_c2: |s| must equal alpha");
    Sample2 out;
    out.x.keys = ots_gen(params.ots, rng);
    const std::uint64_t u = draw_seed(rng, params.samp.r);
    const BitVector v = rng.bits(params.n);
    const bool b = rng.coin();

    const unsigned h = params.ots.hash_bits;
    BitVector vk = BitVector::from_uint(out.x.keys.vk[0], h);
    vk.append(BitVector::from_uint(out.x.keys.vk[1], h));

    out.x.u_enc = params.wrap_u.encode(BitVector::from_uint(u, params.samp.r));
    out.x.v_enc = params.wrap_v.encode(v);
    out.x.vk_enc = params.wrap_vk.encode(vk);
    out.x.sig_block = params.lenc.encode(pack_signed_bit(b, ots_sign(out.x.keys, b), params));
    const bool payload = b ^ gf2_inner(v, s.restrict_to(samp(u, params.samp)));
    out.x.bit_enc = params.wrap_bit.encode(BitVector::from_uint(payload, 1));
    out.label = b;
    return out;
}

std::array<std::uint64_t, 2> decode_vk(const Instance2& x, const TaskParams2& params) {
    const auto bits = params.wrap_vk.decode(x.vk_enc);
    if (!bits) throw DecodeFailure("verification key beyond correction radius");
    const unsigned h = params.ots.hash_bits;
    return {bits->slice(0, h).to_uint(), bits->slice(h, h).to_uint()};
}

std::vector<Segment> manifest(const TaskParams2& params) {
    return layout({{"u", params.wrap_u.length()},
                   {"v", params.wrap_v.length()},
                   {"vk", params.wrap_vk.length()},
                   {"sig", params.n},
                   {"bit", params.wrap_bit.length()}});
}

SymbolVector flatten(const Instance2& x) {
    SymbolVector out;
    append(out, x.u_enc);
    append(out, x.v_enc);
    append(out, x.vk_enc);
    append(out, x.sig_block);
    append(out, x.bit_enc);
    return out;
}

Instance2 unflatten2(std::span<const Symbol> flat, const TaskParams2& params) {
    if (flat.size() != params.length())
        throw std::invalid_argument("unflatten2: expected " + std::to_string(params.length()) + " symbols, got " +
                                    std::to_string(flat.size()));
    std::size_t pos = 0;
    Instance2 x;
    x.u_enc = take(flat, pos, params.wrap_u.length());
    x.v_enc = take(flat, pos, params.wrap_v.length());
    x.vk_enc = take(flat, pos, params.wrap_vk.length());
    x.sig_block = take(flat, pos, params.n);
    x.bit_enc = take(flat, pos, params.wrap_bit.length());
    return x;
}

// ---------------------------------------------------------------------------

std::vector<std::string> preset_names() { return {"C1-tiny", "C1-small", "C2-small", "C2-small-40"}; }

bool is_c1_preset(std::string_view name) { return name == "C1-tiny" || name == "C1-small"; }

TaskParams1 preset_c1(std::string_view name) {
    if (name == "C1-tiny") return make_task1("C1-tiny", 8, 3, 7, 2, 32, 64);
    if (name == "C1-small") return make_task1("C1-small", 12, 4, 15, 4, 256, 1024);
    throw std::invalid_argument("unknown Construction 1 preset: " + std::string(name));
}

TaskParams2 preset_c2(std::string_view name) {
    if (name == "C2-small") return make_task2("C2-small", 12, 4, 16, 3, 256, 16, 11);
    if (name == "C2-small-40") return make_task2("C2-small-40", 12, 4, 16, 3, 256, 40, 11);
    throw std::invalid_argument("unknown Construction 2 preset: " + std::string(name));
}

}  // namespace paramsep
