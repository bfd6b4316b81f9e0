#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>

#include "paramsep/rng.hpp"
#include "paramsep/tasks.hpp"

namespace paramsep {

/// An attack produced a perturbation beyond its Hamming budget. Always a bug in the attack.
struct BudgetViolation : std::logic_error {
    using std::logic_error::logic_error;
};

template <class Instance>
struct Attacked {
    Instance x;
    std::size_t spent = 0;  ///< Hamming distance between the flattened inputs
    bool failed = false;    ///< the attack gave up and returned the input unchanged
};

/// Returns HD(before, after); throws BudgetViolation if it exceeds `budget`.
std::size_t enforce_budget(std::span<const Symbol> before, std::span<const Symbol> after, std::size_t budget);

/// |T| = floor((n - 3k) / 2): positions of the masked block the noise-planting attack rerandomizes.
std::size_t noise_plant_positions(const TaskParams1& params);

/// Replaces m with k uniform symbols and |T| uniformly chosen masked-block positions with uniform
/// symbols. Wrappers are untouched.
Attacked<Instance1> attack_noise_plant(const Instance1& x, const TaskParams1& params, CounterRng& rng);

enum class ForgeMode {
    Search,     ///< ots_forge over the first `effort` candidate signatures
    KeyOracle,  ///< reads the instance's signing key directly (unbounded adversary, no search)
};

/// Finds b by decoding the honest sig block, forges a signature on 1 - b, and copies the forged
/// codeword onto a uniformly random n/2-subset of the sig block. On a failed search the input is
/// returned unchanged with failed = true.
Attacked<Instance2> attack_forge(const Instance2& x, const TaskParams2& params, std::uint64_t effort, ForgeMode mode,
                                 CounterRng& rng);

/// `budget` uniformly chosen positions of the flattened instance, each replaced by a uniformly
/// random different symbol.
Attacked<Instance1> attack_random(const Instance1& x, const TaskParams1& params, std::size_t budget, CounterRng& rng);
Attacked<Instance2> attack_random(const Instance2& x, const TaskParams2& params, std::size_t budget, CounterRng& rng);

/// As attack_random, restricted to one named segment of the manifest. Throws
/// std::invalid_argument for an unknown segment.
Attacked<Instance1> attack_segment_targeted(const Instance1& x, const TaskParams1& params, std::size_t budget,
                                            std::string_view segment, CounterRng& rng);
Attacked<Instance2> attack_segment_targeted(const Instance2& x, const TaskParams2& params, std::size_t budget,
                                            std::string_view segment, CounterRng& rng);

}  // namespace paramsep
