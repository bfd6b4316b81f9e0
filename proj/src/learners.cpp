#include "paramsep/learners.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>

#include "paramsep/crypto.hpp"

namespace paramsep {

namespace {

inline constexpr std::uint32_t kKernelSketch = 0x5E7;
inline constexpr std::uint32_t kKernelDict = 0xD1C;
inline constexpr unsigned kMaxDictBits = 12;

std::size_t lowest_set(const BitVector& v) {
    const auto w = v.words();
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != 0) return i * 64 + static_cast<std::size_t>(std::countr_zero(w[i]));
    return static_cast<std::size_t>(-1);
}

BitVector padded(const BitVector& v, std::size_t bits) {
    BitVector out = v;
    out.resize(bits);
    return out;
}

Model make_model(std::string_view kind, BitVector params) {
    Model m{std::string(kind), params.size(), std::move(params)};
    return m;
}

// Unknown-coefficient row: ones at the sampled positions whose message bit is set.
BitVector constraint_row(std::size_t vars, std::span<const std::uint32_t> idx, const BitVector& coeff) {
    BitVector row(vars);
    for (std::size_t j = 0; j < idx.size(); ++j)
        if (coeff.get(j)) row.set(idx[j], true);
    return row;
}

struct Decoded1 {
    std::vector<std::uint32_t> idx1;
    std::vector<std::uint32_t> idx2;
    BitVector mbits;
    BitVector mask_bits;  // masked - Enc(m), n*ell bits
    bool label = false;
};

Decoded1 decode_sample(const Sample1& s, const TaskParams1& params) {
    Decoded1 d;
    d.idx1 = samp(decode_seed(params.wrap_u1, s.x.u1_enc), params.samp1);
    d.idx2 = samp(decode_seed(params.wrap_u2, s.x.u2_enc), params.samp2);
    d.mbits = symbols_to_bits(s.x.m, params.ell);
    Codeword diff = params.enc.encode(s.x.m);
    for (std::size_t i = 0; i < params.n; ++i) diff[i] ^= s.x.masked[i];
    d.mask_bits = symbols_to_bits(diff, params.ell);
    d.label = s.label;
    return d;
}

BitVector sketch_row(std::size_t i, std::size_t width) {
    return prg_expand(static_cast<std::uint64_t>(i), ToyPrg{32, width, kKernelSketch});
}

BitVector dictionary_candidate(std::uint64_t i, std::size_t width) {
    if (i == 0) return BitVector(width);
    return prg_expand(i, ToyPrg{32, width, kKernelDict});
}

std::uint64_t search_seed(const TaskParams1& params, std::uint64_t effort_cap, const ToyPrg& g,
                          const auto& consistent) {
    const std::uint64_t space = std::uint64_t{1} << params.lambda;
    const std::uint64_t limit = std::min(space, effort_cap);
    for (std::uint64_t s = 0; s < limit; ++s)
        if (consistent(prg_expand(s, g))) return s;
    if (limit < space) throw EffortExceeded("seed search stopped after " + std::to_string(limit) + " candidates");
    throw NoConsistentSeed("no seed is consistent with the samples");
}

}  // namespace

bool Gf2System::add(BitVector row, bool rhs) {
    if (row.size() != vars_) throw std::invalid_argument("Gf2System::add: row width mismatch");
    for (std::size_t c = lowest_set(row); c != npos; c = lowest_set(row)) {
        const std::size_t r = pivot_of_[c];
        if (r == npos) {
            pivot_of_[c] = rows_.size();
            rows_.push_back(std::move(row));
            rhs_.push_back(rhs);
            return true;
        }
        row ^= rows_[r];
        rhs ^= rhs_[r] != 0;
    }
    return !rhs;
}

BitVector Gf2System::solve() const {
    BitVector x(vars_);
    for (std::size_t c = vars_; c-- > 0;) {
        const std::size_t r = pivot_of_[c];
        if (r == npos) continue;
        x.set(c, (rhs_[r] != 0) ^ gf2_inner(rows_[r], x));
    }
    return x;
}

// ---------------------------------------------------------------------------

void audit(const Model& m) {
    if (m.params.size() != m.param_bits)
        throw std::invalid_argument("model " + m.kind + " declares " + std::to_string(m.param_bits) +
                                    " bits but carries " + std::to_string(m.params.size()));
}

std::string model_to_json(const Model& m) {
    audit(m);
    const nlohmann::json j{{"kind", m.kind}, {"param_bits", m.param_bits}, {"params", m.params.to_hex()}};
    return j.dump();
}

Model model_from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    Model m;
    m.kind = j.at("kind").get<std::string>();
    m.param_bits = j.at("param_bits").get<std::size_t>();
    m.params = BitVector::from_hex(j.at("params").get<std::string>(), m.param_bits);
    audit(m);
    return m;
}

Model truncate_model(const Model& m, std::size_t bits) {
    audit(m);
    if (bits > m.param_bits) throw std::invalid_argument("truncate_model: budget exceeds the model");
    return make_model(model_kind::kTruncated, m.params.slice(0, bits));
}

// ---------------------------------------------------------------------------

std::size_t c1_sample_size(const TaskParams1& params, double delta) {
    const double p_p = static_cast<double>(params.k * params.ell) / static_cast<double>(params.alpha) / 2;
    const double p_q = static_cast<double>(params.n * params.ell) / static_cast<double>(params.beta);
    const auto need = [&](double coords, double p) {
        return static_cast<std::size_t>(std::ceil(std::log(coords / delta) / -std::log1p(-p)));
    };
    return std::max(need(static_cast<double>(params.alpha), p_p), need(static_cast<double>(params.beta), p_q));
}

Model learn_efficient_c1(std::span<const Sample1> samples, const TaskParams1& params) {
    BitVector q(params.beta), known(params.beta);
    Gf2System sys(params.alpha);
    for (const auto& s : samples) {
        const Decoded1 d = decode_sample(s, params);
        for (std::size_t j = 0; j < d.idx2.size(); ++j) {
            const std::uint32_t pos = d.idx2[j];
            const bool bit = d.mask_bits.get(j);
            if (known.get(pos) && q.get(pos) != bit)
                throw InconsistentSamples("conflicting Q coordinate " + std::to_string(pos));
            known.set(pos, true);
            q.set(pos, bit);
        }
        if (!sys.add(constraint_row(params.alpha, d.idx1, d.mbits), d.label))
            throw InconsistentSamples("labels admit no linear P");
    }
    BitVector out = sys.solve();
    out.append(q);
    return make_model(model_kind::kPQ, std::move(out));
}

Model learn_it_c1(std::span<const Sample1> samples, const TaskParams1& params, std::uint64_t effort_cap) {
    if (params.lambda > kMaxInvertibleSeedBits) throw std::invalid_argument("learn_it_c1: lambda above 24");
    std::vector<Decoded1> ds;
    ds.reserve(samples.size());
    for (const auto& s : samples) ds.push_back(decode_sample(s, params));

    const std::uint64_t s1 = search_seed(params, effort_cap, params.f1, [&](const BitVector& p) {
        return std::all_of(ds.begin(), ds.end(),
                           [&](const Decoded1& d) { return gf2_inner(d.mbits, p.restrict_to(d.idx1)) == d.label; });
    });
    const std::uint64_t s2 = search_seed(params, effort_cap, params.f2, [&](const BitVector& q) {
        return std::all_of(ds.begin(), ds.end(), [&](const Decoded1& d) { return q.restrict_to(d.idx2) == d.mask_bits; });
    });
    BitVector out = BitVector::from_uint(s1, params.lambda);
    out.append(BitVector::from_uint(s2, params.lambda));
    return make_model(model_kind::kSeed, std::move(out));
}

std::string_view compression_name(Compression c) {
    switch (c) {
        case Compression::Truncation: return "truncation";
        case Compression::Sketch: return "sketch";
        case Compression::Dictionary: return "dictionary";
    }
    return "?";
}

Compression parse_compression(std::string_view name) {
    for (Compression c : kAllCompressions)
        if (compression_name(c) == name) return c;
    throw std::invalid_argument("unknown compression strategy: " + std::string(name));
}

Model learn_compressed(std::span<const Sample1> samples, const TaskParams1& params, std::size_t budget_bits,
                       Compression strategy) {
    const std::size_t width = params.alpha + params.beta;
    if (budget_bits > width) throw std::invalid_argument("learn_compressed: budget exceeds the full model");
    switch (strategy) {
        case Compression::Truncation:
            return truncate_model(learn_efficient_c1(samples, params), budget_bits);
        case Compression::Sketch: {
            const Model full = learn_efficient_c1(samples, params);
            BitVector y(budget_bits);
            for (std::size_t i = 0; i < budget_bits; ++i) y.set(i, gf2_inner(sketch_row(i, width), full.params));
            return make_model(model_kind::kSketch, std::move(y));
        }
        case Compression::Dictionary: {
            const unsigned j = static_cast<unsigned>(std::min<std::size_t>(budget_bits, kMaxDictBits));
            std::vector<Decoded1> ds;
            ds.reserve(samples.size());
            for (const auto& s : samples) ds.push_back(decode_sample(s, params));
            std::uint64_t best = 0;
            std::size_t best_score = 0;
            for (std::uint64_t i = 0; i < (std::uint64_t{1} << j); ++i) {
                const BitVector p = dictionary_candidate(i, width).slice(0, params.alpha);
                std::size_t score = 0;
                for (const auto& d : ds) score += gf2_inner(d.mbits, p.restrict_to(d.idx1)) == d.label;
                if (i == 0 || score > best_score) {
                    best = i;
                    best_score = score;
                }
            }
            BitVector idx(budget_bits);
            for (unsigned b = 0; b < j; ++b) idx.set(b, (best >> b) & 1u);
            return make_model(model_kind::kDictionary, std::move(idx));
        }
    }
    throw std::invalid_argument("learn_compressed: unknown strategy");
}

Hypothesis1 realize_c1(const Model& m, const TaskParams1& params) {
    audit(m);
    const std::size_t width = params.alpha + params.beta;
    BitVector full;
    if (m.kind == model_kind::kPQ) {
        if (m.param_bits != width) throw std::invalid_argument("realize_c1: PQ model has the wrong width");
        full = m.params;
    } else if (m.kind == model_kind::kSeed) {
        if (m.param_bits != 2 * std::size_t{params.lambda}) throw std::invalid_argument("realize_c1: SEED width");
        return {prg_expand(m.params.slice(0, params.lambda).to_uint(), params.f1),
                prg_expand(m.params.slice(params.lambda, params.lambda).to_uint(), params.f2)};
    } else if (m.kind == model_kind::kTruncated) {
        if (m.param_bits > width) throw std::invalid_argument("realize_c1: truncated model too wide");
        full = padded(m.params, width);
    } else if (m.kind == model_kind::kSketch) {
        Gf2System sys(width);
        for (std::size_t i = 0; i < m.param_bits; ++i)
            if (!sys.add(sketch_row(i, width), m.params.get(i)))
                throw std::invalid_argument("realize_c1: sketch is not consistent");
        full = sys.solve();
    } else if (m.kind == model_kind::kDictionary) {
        const std::uint64_t idx = m.param_bits == 0 ? 0 : m.params.to_uint();
        if (idx >> kMaxDictBits) throw std::invalid_argument("realize_c1: dictionary index out of range");
        full = dictionary_candidate(idx, width);
    } else {
        throw std::invalid_argument("realize_c1: model kind " + m.kind + " does not apply to Construction 1");
    }
    return {full.slice(0, params.alpha), full.slice(params.alpha, params.beta)};
}

Prediction eval_hypothesis_c1(const Hypothesis1& h, const Instance1& x, const TaskParams1& params) {
    std::uint64_t u1 = 0, u2 = 0;
    try {
        u1 = decode_seed(params.wrap_u1, x.u1_enc);
        u2 = decode_seed(params.wrap_u2, x.u2_enc);
    } catch (const DecodeFailure&) {
        return {false, true};
    }
    Codeword word = x.masked;
    const SymbolVector mask = restricted_symbols(h.q, samp(u2, params.samp2), params.ell);
    for (std::size_t i = 0; i < params.n; ++i) word[i] ^= mask[i];
    const auto decoded = params.enc.decode_unique(word);
    const SymbolVector& m = decoded ? *decoded : x.m;
    return {gf2_inner(symbols_to_bits(m, params.ell), h.p.restrict_to(samp(u1, params.samp1))), false};
}

Prediction eval_model_c1(const Model& m, const Instance1& x, const TaskParams1& params) {
    return eval_hypothesis_c1(realize_c1(m, params), x, params);
}

// ---------------------------------------------------------------------------

std::vector<SignedBit> verifying_pairs(const Instance2& x, const TaskParams2& params) {
    const auto vk = decode_vk(x, params);
    std::vector<SignedBit> out;
    for (const auto& msg : params.lenc.decode_list(x.sig_block, params.budget)) {
        const auto sb = unpack_signed_bit(msg, params);
        if (sb && ots_verify(vk, params.ots, sb->b, sb->sig)) out.push_back(*sb);
    }
    return out;
}

bool classify_listdecode_c2(const Instance2& x, const TaskParams2& params, CounterRng& rng) {
    try {
        const auto pairs = verifying_pairs(x, params);
        if (!pairs.empty()) return pairs.front().b;
    } catch (const DecodeFailure&) {
    }
    return rng.coin();
}

std::size_t c2_sample_size(const TaskParams2& params, double delta) {
    const double p = static_cast<double>(params.n) / static_cast<double>(params.alpha) / 2;
    return static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(params.alpha) / delta) / -std::log1p(-p)));
}

Model learn_it_c2(std::span<const Sample2> samples, const TaskParams2& params) {
    Gf2System sys(params.alpha);
    for (const auto& s : samples) {
        const auto idx = samp(decode_seed(params.wrap_u, s.x.u_enc), params.samp);
        const auto v = params.wrap_v.decode(s.x.v_enc);
        if (!v) throw DecodeFailure("v beyond correction radius");
        const bool payload = decode_seed(params.wrap_bit, s.x.bit_enc) != 0;
        if (!sys.add(constraint_row(params.alpha, idx, *v), payload ^ s.label))
            throw InconsistentSamples("payload bits admit no linear s");
    }
    return make_model(model_kind::kSecret, sys.solve());
}

Model listdecode_model() { return make_model(model_kind::kListDecode, BitVector()); }

Prediction eval_model_c2(const Model& m, const Instance2& x, const TaskParams2& params, CounterRng& rng) {
    audit(m);
    if (m.kind == model_kind::kListDecode) return {classify_listdecode_c2(x, params, rng), false};
    if (m.kind != model_kind::kSecret && m.kind != model_kind::kTruncated)
        throw std::invalid_argument("eval_model_c2: model kind " + m.kind + " does not apply to Construction 2");
    if (m.param_bits > params.alpha) throw std::invalid_argument("eval_model_c2: model wider than alpha");
    try {
        const auto idx = samp(decode_seed(params.wrap_u, x.u_enc), params.samp);
        const auto v = params.wrap_v.decode(x.v_enc);
        if (!v) return {false, true};
        const bool payload = decode_seed(params.wrap_bit, x.bit_enc) != 0;
        return {payload != gf2_inner(*v, padded(m.params, params.alpha).restrict_to(idx)), false};
    } catch (const DecodeFailure&) {
        return {false, true};
    }
}

}  // namespace paramsep
