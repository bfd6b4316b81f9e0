#include "paramsep/adversaries.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace paramsep {

namespace {

// First `count` entries of a partial Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> random_subset(std::size_t n, std::size_t count, CounterRng& rng) {
    std::vector<std::size_t> pos(n);
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) std::swap(pos[i], pos[i + rng.below(n - i)]);
    pos.resize(count);
    return pos;
}

void scramble(SymbolVector& flat, std::size_t lo, std::size_t len, std::size_t budget, std::uint32_t q,
              CounterRng& rng) {
    for (std::size_t p : random_subset(len, std::min(budget, len), rng))
        flat[lo + p] ^= static_cast<Symbol>(1 + rng.below(q - 1));
}

const Segment& find_segment(std::span<const Segment> man, std::string_view name) {
    const auto it = std::find_if(man.begin(), man.end(), [&](const Segment& s) { return s.name == name; });
    if (it == man.end()) throw std::invalid_argument("unknown segment: " + std::string(name));
    return *it;
}

template <class Instance, class Params, class Unflatten>
Attacked<Instance> corrupt_range(const Instance& x, const Params& params, std::size_t budget, std::size_t lo,
                                 std::size_t len, CounterRng& rng, Unflatten unflatten) {
    if (budget > params.budget) throw std::invalid_argument("attack budget exceeds the task budget");
    const SymbolVector before = flatten(x);
    SymbolVector after = before;
    scramble(after, lo, len, budget, params.field().size(), rng);
    const std::size_t spent = enforce_budget(before, after, budget);
    return {unflatten(after, params), spent, false};
}

}  // namespace

std::size_t enforce_budget(std::span<const Symbol> before, std::span<const Symbol> after, std::size_t budget) {
    if (before.size() != after.size()) throw BudgetViolation("attack changed the instance length");
    const std::size_t d = hamming_distance(before, after);
    if (d > budget)
        throw BudgetViolation("attack spent " + std::to_string(d) + " symbols, budget " + std::to_string(budget));
    return d;
}

std::size_t noise_plant_positions(const TaskParams1& params) { return (params.n - 3 * params.k) / 2; }

Attacked<Instance1> attack_noise_plant(const Instance1& x, const TaskParams1& params, CounterRng& rng) {
    const std::uint32_t q = params.field().size();
    Attacked<Instance1> out{x, 0, false};
    for (auto& sym : out.x.m) sym = static_cast<Symbol>(rng.below(q));
    for (std::size_t i : random_subset(params.n, noise_plant_positions(params), rng))
        out.x.masked[i] = static_cast<Symbol>(rng.below(q));
    out.spent = enforce_budget(flatten(x), flatten(out.x), params.budget);
    return out;
}

Attacked<Instance2> attack_forge(const Instance2& x, const TaskParams2& params, std::uint64_t effort, ForgeMode mode,
                                 CounterRng& rng) {
    Attacked<Instance2> out{x, 0, true};
    const auto msg = params.lenc.decode_unique(x.sig_block);
    if (!msg) return out;
    const auto honest = unpack_signed_bit(*msg, params);
    if (!honest) return out;
    const bool target = !honest->b;

    std::optional<Signature> sig;
    if (mode == ForgeMode::KeyOracle) {
        sig = ots_sign(x.keys, target);
    } else {
        std::array<std::uint64_t, 2> vk{};
        try {
            vk = decode_vk(x, params);
        } catch (const DecodeFailure&) {
            return out;
        }
        sig = ots_forge(vk, params.ots, target, effort);
    }
    if (!sig) return out;

    const Codeword forged = params.lenc.encode(pack_signed_bit(target, *sig, params));
    for (std::size_t i : random_subset(params.n, params.n / 2, rng)) out.x.sig_block[i] = forged[i];
    out.failed = false;
    out.spent = enforce_budget(flatten(x), flatten(out.x), params.budget);
    return out;
}

Attacked<Instance1> attack_random(const Instance1& x, const TaskParams1& params, std::size_t budget, CounterRng& rng) {
    return corrupt_range(x, params, budget, 0, params.length(), rng, unflatten1);
}

Attacked<Instance2> attack_random(const Instance2& x, const TaskParams2& params, std::size_t budget, CounterRng& rng) {
    auto out = corrupt_range(x, params, budget, 0, params.length(), rng, unflatten2);
    out.x.keys = x.keys;
    return out;
}

Attacked<Instance1> attack_segment_targeted(const Instance1& x, const TaskParams1& params, std::size_t budget,
                                            std::string_view segment, CounterRng& rng) {
    const auto man = manifest(params);
    const Segment& s = find_segment(man, segment);
    return corrupt_range(x, params, budget, s.offset, s.length, rng, unflatten1);
}

Attacked<Instance2> attack_segment_targeted(const Instance2& x, const TaskParams2& params, std::size_t budget,
                                            std::string_view segment, CounterRng& rng) {
    const auto man = manifest(params);
    const Segment& s = find_segment(man, segment);
    auto out = corrupt_range(x, params, budget, s.offset, s.length, rng, unflatten2);
    out.x.keys = x.keys;
    return out;
}

}  // namespace paramsep
