#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "paramsep/learners.hpp"
#include "paramsep/tasks.hpp"

namespace paramsep {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kRngName = "philox4x32-10";
inline constexpr std::string_view kRobustRiskNote =
    "robust risk is measured against the configured attack, not the worst case over the budget ball";

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Where the secret parameters of Construction 1 come from. Prg expands one lambda-bit seed
/// into P and Q; UniformP / UniformQ replace that side with uniform bits.
enum class Fixture { Prg, UniformP, UniformQ };
std::string_view fixture_name(Fixture f);
Fixture parse_fixture(std::string_view name);

/// kind: "efficient" | "it" | "truth" | "zero" | "truncation" | "sketch" | "dictionary"
/// (Construction 1), "listdecode" | "it-c2" | "truth" | "zero" (Construction 2).
/// budget_bits is the size of the compressed models; for "truth" and "it-c2" a nonzero value
/// truncates. samples = 0 means the coupon-collector default.
struct LearnerSpec {
    std::string kind = "efficient";
    std::size_t budget_bits = 0;
    std::size_t samples = 0;
    std::uint64_t effort_cap = std::uint64_t{1} << 24;
};

/// kind: "none" | "noise-plant" | "forge" | "forge-oracle" | "random" | "targeted".
/// budget = npos means the task budget.
struct AttackSpec {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::string kind = "none";
    std::size_t budget = npos;
    std::uint64_t effort = 0;
    std::string segment;
};

struct ExperimentConfig {
    std::string preset = "C1-tiny";
    /// Explicit parameters override the preset (keys as in params_to_json).
    std::optional<nlohmann::json> params;
    Fixture fixture = Fixture::Prg;
    LearnerSpec learner;
    AttackSpec attack;
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    double delta = 0.05;
    /// When positive, trials must reach this Hoeffding half-width at confidence 1 - delta.
    double half_width = 0;
    unsigned workers = 0;  ///< 0 = hardware concurrency
    std::optional<double> max_risk;
    std::optional<double> min_risk;
};

/// sqrt(ln(2/delta) / (2 trials)).
double hoeffding_half_width(std::size_t trials, double delta);
/// ceil(ln(2/delta) / (2 half_width^2)).
std::size_t hoeffding_trials(double half_width, double delta);

nlohmann::json config_to_json(const ExperimentConfig& c);
/// Flat key-value object; unknown keys are a ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);

using TaskParams = std::variant<TaskParams1, TaskParams2>;
TaskParams resolve_params(const ExperimentConfig& c);
nlohmann::json params_to_json(const TaskParams& p);

struct ExperimentReport {
    std::string name;
    std::string kind;  ///< "risk" | "robust-risk"
    ExperimentConfig config;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t errors = 0;
    std::size_t abstentions = 0;
    std::size_t attack_failures = 0;
    std::size_t budget_violations = 0;
    std::size_t samples_used = 0;
    std::size_t task_budget = 0;
    std::size_t attack_budget = 0;
    std::string model_kind;
    std::size_t param_bits = 0;
    std::map<std::size_t, std::size_t> spent_histogram;
    double risk = 0;
    double half_width = 0;
    double wall_seconds = 0;
    bool pass = true;
    nlohmann::json params;

    double accuracy() const { return 1 - risk; }
    /// Everything except the wall clock, for reproducibility comparisons.
    bool same_counts(const ExperimentReport& o) const;
};

nlohmann::json report_to_json(const ExperimentReport& r);
std::string report_csv_header();
std::string report_csv_row(const ExperimentReport& r);

/// Trains the configured learner on samples drawn from the fixture's secret.
Model train_model(const ExperimentConfig& c);

/// One instance as the estimators see trial `trial`: the clean flattening, and the attacked one
/// when an attack is configured.
struct InstanceRecord {
    std::size_t trial = 0;
    bool label = false;
    SymbolVector clean;
    SymbolVector attacked;
    std::size_t spent = 0;
    bool attack_failed = false;
};
std::vector<InstanceRecord> generate_instances(const ExperimentConfig& c, std::size_t count);
std::vector<Segment> instance_manifest(const ExperimentConfig& c);

ExperimentReport estimate_risk(const ExperimentConfig& c);
/// Throws BudgetViolation if any attack output leaves the budget ball.
ExperimentReport estimate_robust_risk(const ExperimentConfig& c);

struct SuiteResult {
    std::string name;
    std::vector<ExperimentReport> reports;
    /// Checks on the sweep or across reports (monotonicity, accuracy gaps), each with a verdict.
    std::vector<std::pair<std::string, bool>> checks;
    bool pass = true;
};

/// Suite knobs shared by every report in a suite.
struct SuiteOptions {
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    double half_width = 0.02;
    bool sweep = true;
};

SuiteResult run_suite(std::string_view which, const SuiteOptions& opt);
nlohmann::json suite_to_json(const SuiteResult& s);

struct ValidatorEntry {
    std::string name;
    bool pass = false;
    bool expect_fail = false;  ///< negative control: passing means the check reported a failure
    std::string detail;
};

struct ValidatorReport {
    std::vector<ValidatorEntry> entries;
    bool pass = true;
};

/// Exhaustive checks of the extractor, masking, noisy-code and min-entropy statements, plus
/// a negative control whose bound is deliberately corrupted.
ValidatorReport run_validators(std::uint64_t seed = 1);
nlohmann::json validators_to_json(const ValidatorReport& r);

}  // namespace paramsep
