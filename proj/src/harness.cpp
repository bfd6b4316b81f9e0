#include "paramsep/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "paramsep/adversaries.hpp"
#include "paramsep/stat.hpp"

namespace paramsep {

using nlohmann::json;

namespace {

// Independent streams per trial; the secret and the training set live on trial 0 of their own roles.
enum Role : std::uint32_t { kRoleSecret = 1, kRoleTrain = 2, kRoleSample = 3, kRoleAttack = 4, kRoleCoin = 5 };

std::uint64_t low_bits(std::uint64_t v, unsigned bits) { return bits >= 64 ? v : v & ((std::uint64_t{1} << bits) - 1); }

Secret1 make_secret1(const ExperimentConfig& c, const TaskParams1& p) {
    CounterRng rng(c.seed, 0, kRoleSecret);
    Secret1 out = expand_secret1(low_bits(rng(), p.lambda), p);
    if (c.fixture == Fixture::UniformP) out.p = rng.bits(p.alpha);
    if (c.fixture == Fixture::UniformQ) out.q = rng.bits(p.beta);
    return out;
}

BitVector make_secret2(const ExperimentConfig& c, const TaskParams2& p) {
    CounterRng rng(c.seed, 0, kRoleSecret);
    return rng.bits(p.alpha);
}

Model maybe_truncate(Model m, std::size_t bits) {
    return bits && bits < m.param_bits ? truncate_model(m, bits) : m;
}

template <class Sample, class Secret, class Params, class Draw>
std::vector<Sample> draw_training(const ExperimentConfig& c, const Secret& sec, const Params& p, std::size_t count,
                                  Draw draw) {
    CounterRng rng(c.seed, 0, kRoleTrain);
    std::vector<Sample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(draw(sec, p, rng));
    return out;
}

Model train1(const ExperimentConfig& c, const TaskParams1& p, const Secret1& sec, std::size_t& used) {
    const LearnerSpec& L = c.learner;
    const std::size_t full = p.alpha + p.beta;
    used = 0;
    if (L.kind == "truth" || L.kind == "zero") {
        BitVector bits(full);
        if (L.kind == "truth") {
            bits = sec.p;
            bits.append(sec.q);
        }
        return maybe_truncate(Model{std::string(model_kind::kPQ), full, bits}, L.budget_bits);
    }
    used = L.samples ? L.samples : c1_sample_size(p);
    const auto train = [&] {
        return draw_training<Sample1>(c, sec, p, used,
                                      [](const Secret1& s, const TaskParams1& q, CounterRng& r) { return sample_c1(s, q, r); });
    };
    if (L.kind == "efficient") return learn_efficient_c1(train(), p);
    if (L.kind == "it") return learn_it_c1(train(), p, L.effort_cap);
    for (Compression s : kAllCompressions) {
        if (L.kind != compression_name(s)) continue;
        if (L.budget_bits > full) throw ConfigError("budget_bits exceeds alpha + beta");
        return learn_compressed(train(), p, L.budget_bits, s);
    }
    throw ConfigError("learner '" + L.kind + "' does not apply to Construction 1");
}

Model train2(const ExperimentConfig& c, const TaskParams2& p, const BitVector& sec, std::size_t& used) {
    const LearnerSpec& L = c.learner;
    used = 0;
    if (L.kind == "listdecode") return listdecode_model();
    if (L.kind == "truth" || L.kind == "zero")
        return maybe_truncate(Model{std::string(model_kind::kSecret), p.alpha, L.kind == "truth" ? sec : BitVector(p.alpha)},
                              L.budget_bits);
    if (L.kind == "it-c2") {
        used = L.samples ? L.samples : c2_sample_size(p);
        const auto train = draw_training<Sample2>(
            c, sec, p, used, [](const BitVector& s, const TaskParams2& q, CounterRng& r) { return sample_c2(s, q, r); });
        return maybe_truncate(learn_it_c2(train, p), L.budget_bits);
    }
    throw ConfigError("learner '" + L.kind + "' does not apply to Construction 2");
}

struct Counts {
    std::size_t errors = 0;
    std::size_t abstentions = 0;
    std::size_t failures = 0;
    std::size_t violations = 0;
    std::map<std::size_t, std::size_t> spent;

    void merge(const Counts& o) {
        errors += o.errors;
        abstentions += o.abstentions;
        failures += o.failures;
        violations += o.violations;
        for (const auto& [k, v] : o.spent) spent[k] += v;
    }
};

// Trial t runs on worker t mod W. Only counts leave a worker, so the totals do not depend on W.
template <class TrialFn>
Counts run_trials(std::size_t trials, unsigned workers, TrialFn fn) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(trials, 1)));
    std::vector<Counts> parts(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t t = w; t < trials; t += workers) fn(t, parts[w]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    Counts total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

void check_config(const ExperimentConfig& c) {
    if (c.trials == 0) throw ConfigError("trials must be positive");
    if (!(c.delta > 0 && c.delta < 1)) throw ConfigError("delta must lie in (0, 1)");
    if (c.half_width > 0 && c.trials < hoeffding_trials(c.half_width, c.delta))
        throw ConfigError("trials " + std::to_string(c.trials) + " below the " +
                          std::to_string(hoeffding_trials(c.half_width, c.delta)) + " needed for half-width " +
                          std::to_string(c.half_width));
}

std::size_t attack_budget_of(const AttackSpec& a, std::size_t task_budget) {
    const std::size_t b = a.budget == AttackSpec::npos ? task_budget : a.budget;
    if (b > task_budget)
        throw ConfigError("attack budget " + std::to_string(b) + " exceeds the task budget " + std::to_string(task_budget));
    return b;
}

Attacked<Instance1> attack1(const AttackSpec& a, const Instance1& x, const TaskParams1& p, std::size_t budget,
                            CounterRng& rng) {
    if (a.kind == "none") return {x, 0, false};
    if (a.kind == "noise-plant") return attack_noise_plant(x, p, rng);
    if (a.kind == "random") return attack_random(x, p, budget, rng);
    if (a.kind == "targeted") return attack_segment_targeted(x, p, budget, a.segment, rng);
    throw ConfigError("attack '" + a.kind + "' does not apply to Construction 1");
}

Attacked<Instance2> attack2(const AttackSpec& a, const Instance2& x, const TaskParams2& p, std::size_t budget,
                            CounterRng& rng) {
    if (a.kind == "none") return {x, 0, false};
    if (a.kind == "forge") return attack_forge(x, p, a.effort, ForgeMode::Search, rng);
    if (a.kind == "forge-oracle") return attack_forge(x, p, a.effort, ForgeMode::KeyOracle, rng);
    if (a.kind == "random") return attack_random(x, p, budget, rng);
    if (a.kind == "targeted") return attack_segment_targeted(x, p, budget, a.segment, rng);
    throw ConfigError("attack '" + a.kind + "' does not apply to Construction 2");
}

void validate_attack_kind(const AttackSpec& a, bool c1) {
    static const std::vector<std::string> k1{"none", "noise-plant", "random", "targeted"};
    static const std::vector<std::string> k2{"none", "forge", "forge-oracle", "random", "targeted"};
    const auto& ok = c1 ? k1 : k2;
    if (std::find(ok.begin(), ok.end(), a.kind) == ok.end())
        throw ConfigError("attack '" + a.kind + "' does not apply to Construction " + (c1 ? "1" : "2"));
    if (a.kind == "targeted" && a.segment.empty()) throw ConfigError("targeted attack needs a segment");
}

// Scores one (possibly attacked) instance. The adversary's output is checked against the
// budget here as well as inside the attack.
template <class Instance, class Attack, class Eval>
void score_trial(const Instance& x, bool label, std::size_t budget, Counts& out, Attack attack, Eval eval) {
    Attacked<Instance> a{x, 0, false};
    try {
        a = attack();
        enforce_budget(flatten(x), flatten(a.x), budget);
    } catch (const BudgetViolation&) {
        ++out.violations;
        return;
    }
    ++out.spent[a.spent];
    out.failures += a.failed;
    const Prediction pred = eval(a.x);
    out.abstentions += pred.abstain;
    out.errors += pred.abstain || pred.bit != label;
}

ExperimentReport run(const ExperimentConfig& c, bool robust) {
    check_config(c);
    const auto start = std::chrono::steady_clock::now();
    const TaskParams tp = resolve_params(c);
    const AttackSpec attack = robust ? c.attack : AttackSpec{};

    ExperimentReport r;
    r.kind = robust ? "robust-risk" : "risk";
    r.config = c;
    r.trials = c.trials;
    r.seed = c.seed;
    r.params = params_to_json(tp);

    Counts counts;
    Model model;
    if (const auto* p1 = std::get_if<TaskParams1>(&tp)) {
        const TaskParams1& p = *p1;
        validate_attack_kind(attack, true);
        r.task_budget = p.budget;
        r.attack_budget = attack_budget_of(attack, p.budget);
        if (attack.kind == "noise-plant") r.attack_budget = p.budget;
        const Secret1 sec = make_secret1(c, p);
        model = train1(c, p, sec, r.samples_used);
        const Hypothesis1 h = realize_c1(model, p);
        counts = run_trials(c.trials, c.workers, [&](std::size_t t, Counts& out) {
            CounterRng srng(c.seed, t, kRoleSample), arng(c.seed, t, kRoleAttack);
            const Sample1 s = sample_c1(sec, p, srng);
            score_trial(
                s.x, s.label, r.attack_budget, out, [&] { return attack1(attack, s.x, p, r.attack_budget, arng); },
                [&](const Instance1& x) { return eval_hypothesis_c1(h, x, p); });
        });
    } else {
        const TaskParams2& p = std::get<TaskParams2>(tp);
        validate_attack_kind(attack, false);
        r.task_budget = p.budget;
        r.attack_budget = attack_budget_of(attack, p.budget);
        if (attack.kind == "forge" || attack.kind == "forge-oracle") r.attack_budget = p.budget;
        const BitVector sec = make_secret2(c, p);
        model = train2(c, p, sec, r.samples_used);
        counts = run_trials(c.trials, c.workers, [&](std::size_t t, Counts& out) {
            CounterRng srng(c.seed, t, kRoleSample), arng(c.seed, t, kRoleAttack), coin(c.seed, t, kRoleCoin);
            const Sample2 s = sample_c2(sec, p, srng);
            score_trial(
                s.x, s.label, r.attack_budget, out, [&] { return attack2(attack, s.x, p, r.attack_budget, arng); },
                [&](const Instance2& x) { return eval_model_c2(model, x, p, coin); });
        });
    }
    audit(model);
    const bool bounded = model.kind == model_kind::kTruncated || model.kind == model_kind::kSketch ||
                         model.kind == model_kind::kDictionary;
    if (bounded && model.param_bits > c.learner.budget_bits)
        throw std::logic_error("learner produced " + std::to_string(model.param_bits) + " parameters over budget " +
                               std::to_string(c.learner.budget_bits));
    if (counts.violations)
        throw BudgetViolation(std::to_string(counts.violations) + " attack outputs exceeded the budget of " +
                              std::to_string(r.attack_budget));

    r.model_kind = model.kind;
    r.param_bits = model.param_bits;
    r.errors = counts.errors;
    r.abstentions = counts.abstentions;
    r.attack_failures = counts.failures;
    r.spent_histogram = std::move(counts.spent);
    r.risk = static_cast<double>(r.errors) / static_cast<double>(r.trials);
    r.half_width = hoeffding_half_width(r.trials, c.delta);
    if (c.max_risk && r.risk > *c.max_risk) r.pass = false;
    if (c.min_risk && r.risk < *c.min_risk) r.pass = false;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

template <class T>
T get_as(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

std::size_t need(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("params: missing '") + key + "'");
    return get_as<std::size_t>(j.at(key), key);
}

}  // namespace

std::string_view fixture_name(Fixture f) {
    switch (f) {
        case Fixture::Prg: return "prg";
        case Fixture::UniformP: return "uniform-p";
        case Fixture::UniformQ: return "uniform-q";
    }
    return "?";
}

Fixture parse_fixture(std::string_view name) {
    for (Fixture f : {Fixture::Prg, Fixture::UniformP, Fixture::UniformQ})
        if (fixture_name(f) == name) return f;
    throw ConfigError("unknown fixture: " + std::string(name));
}

double hoeffding_half_width(std::size_t trials, double delta) {
    return std::sqrt(std::log(2 / delta) / (2 * static_cast<double>(trials)));
}

std::size_t hoeffding_trials(double half_width, double delta) {
    return static_cast<std::size_t>(std::ceil(std::log(2 / delta) / (2 * half_width * half_width)));
}

json config_to_json(const ExperimentConfig& c) {
    json j{{"preset", c.preset},
           {"fixture", fixture_name(c.fixture)},
           {"learner", c.learner.kind},
           {"budget_bits", c.learner.budget_bits},
           {"samples", c.learner.samples},
           {"effort_cap", c.learner.effort_cap},
           {"attack", c.attack.kind},
           {"attack_budget", c.attack.budget == AttackSpec::npos ? json(nullptr) : json(c.attack.budget)},
           {"effort", c.attack.effort},
           {"segment", c.attack.segment},
           {"trials", c.trials},
           {"seed", c.seed},
           {"delta", c.delta},
           {"half_width", c.half_width},
           {"workers", c.workers},
           {"max_risk", c.max_risk ? json(*c.max_risk) : json(nullptr)},
           {"min_risk", c.min_risk ? json(*c.min_risk) : json(nullptr)}};
    if (c.params) j["params"] = *c.params;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "preset") c.preset = get_as<std::string>(v, key);
        else if (key == "params") c.params = v;
        else if (key == "fixture") c.fixture = parse_fixture(get_as<std::string>(v, key));
        else if (key == "learner") c.learner.kind = get_as<std::string>(v, key);
        else if (key == "budget_bits") c.learner.budget_bits = get_as<std::size_t>(v, key);
        else if (key == "samples") c.learner.samples = get_as<std::size_t>(v, key);
        else if (key == "effort_cap") c.learner.effort_cap = get_as<std::uint64_t>(v, key);
        else if (key == "attack") c.attack.kind = get_as<std::string>(v, key);
        else if (key == "attack_budget") c.attack.budget = v.is_null() ? AttackSpec::npos : get_as<std::size_t>(v, key);
        else if (key == "effort") c.attack.effort = get_as<std::uint64_t>(v, key);
        else if (key == "segment") c.attack.segment = get_as<std::string>(v, key);
        else if (key == "trials") c.trials = get_as<std::size_t>(v, key);
        else if (key == "seed") c.seed = get_as<std::uint64_t>(v, key);
        else if (key == "delta") c.delta = get_as<double>(v, key);
        else if (key == "half_width") c.half_width = get_as<double>(v, key);
        else if (key == "workers") c.workers = get_as<unsigned>(v, key);
        else if (key == "max_risk") c.max_risk = v.is_null() ? std::nullopt : std::optional(get_as<double>(v, key));
        else if (key == "min_risk") c.min_risk = v.is_null() ? std::nullopt : std::optional(get_as<double>(v, key));
        else throw ConfigError("unknown config key: " + key);
    }
    return c;
}

TaskParams resolve_params(const ExperimentConfig& c) {
    try {
        if (c.params) {
            const json& j = *c.params;
            const std::size_t construction = need(j, "construction");
            const std::string name = j.value("name", std::string("custom"));
            const auto lambda = static_cast<unsigned>(need(j, "lambda"));
            const auto ell = static_cast<unsigned>(need(j, "ell"));
            if (construction == 1)
                return make_task1(name, lambda, ell, need(j, "n"), need(j, "k"), need(j, "alpha"), need(j, "beta"));
            if (construction == 2)
                return make_task2(name, lambda, ell, need(j, "n"), need(j, "k"), need(j, "alpha"),
                                  static_cast<unsigned>(need(j, "hash_bits")),
                                  static_cast<unsigned>(need(j, "preimage_bits")));
            throw ConfigError("params: construction must be 1 or 2");
        }
        if (is_c1_preset(c.preset)) return preset_c1(c.preset);
        return preset_c2(c.preset);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

json params_to_json(const TaskParams& tp) {
    if (const auto* p = std::get_if<TaskParams1>(&tp))
        return {{"construction", 1}, {"name", p->name}, {"lambda", p->lambda}, {"ell", p->ell}, {"n", p->n},
                {"k", p->k},         {"alpha", p->alpha}, {"beta", p->beta}, {"budget", p->budget},
                {"length", p->length()}};
    const auto& p = std::get<TaskParams2>(tp);
    return {{"construction", 2}, {"name", p.name},         {"lambda", p.lambda},
            {"ell", p.ell},      {"n", p.n},               {"k", p.k},
            {"alpha", p.alpha},  {"hash_bits", p.ots.hash_bits}, {"preimage_bits", p.ots.preimage_bits},
            {"budget", p.budget}, {"length", p.length()}};
}

bool ExperimentReport::same_counts(const ExperimentReport& o) const {
    return name == o.name && kind == o.kind && trials == o.trials && seed == o.seed && errors == o.errors &&
           abstentions == o.abstentions && attack_failures == o.attack_failures &&
           budget_violations == o.budget_violations && samples_used == o.samples_used && model_kind == o.model_kind &&
           param_bits == o.param_bits && spent_histogram == o.spent_histogram && risk == o.risk && pass == o.pass;
}

json report_to_json(const ExperimentReport& r) {
    json hist = json::object();
    for (const auto& [k, v] : r.spent_histogram) hist[std::to_string(k)] = v;
    json j{{"schema_version", kReportSchemaVersion},
           {"name", r.name},
           {"kind", r.kind},
           {"rng", kRngName},
           {"seed", r.seed},
           {"trials", r.trials},
           {"delta", r.config.delta},
           {"risk", r.risk},
           {"accuracy", r.accuracy()},
           {"half_width", r.half_width},
           {"errors", r.errors},
           {"abstentions", r.abstentions},
           {"model", {{"kind", r.model_kind}, {"param_bits", r.param_bits}, {"samples_used", r.samples_used}}},
           {"attack",
            {{"kind", r.config.attack.kind},
             {"task_budget", r.task_budget},
             {"budget", r.attack_budget},
             {"failures", r.attack_failures},
             {"budget_violations", r.budget_violations},
             {"spent_histogram", hist}}},
           {"thresholds",
            {{"max_risk", r.config.max_risk ? json(*r.config.max_risk) : json(nullptr)},
             {"min_risk", r.config.min_risk ? json(*r.config.min_risk) : json(nullptr)}}},
           {"pass", r.pass},
           {"wall_seconds", r.wall_seconds},
           {"params", r.params},
           {"config", config_to_json(r.config)}};
    if (r.kind == "robust-risk") j["note"] = kRobustRiskNote;
    return j;
}

std::string report_csv_header() {
    return "name,kind,preset,fixture,learner,budget_bits,param_bits,attack,attack_budget,effort,trials,seed,errors,"
           "abstentions,attack_failures,budget_violations,risk,half_width,pass";
}

std::string report_csv_row(const ExperimentReport& r) {
    std::ostringstream os;
    os << std::setprecision(10) << r.name << ',' << r.kind << ',' << r.params.value("name", r.config.preset) << ','
       << fixture_name(r.config.fixture) << ',' << r.config.learner.kind << ',' << r.config.learner.budget_bits << ','
       << r.param_bits << ',' << r.config.attack.kind << ',' << r.attack_budget << ',' << r.config.attack.effort << ','
       << r.trials << ',' << r.seed << ',' << r.errors << ',' << r.abstentions << ',' << r.attack_failures << ','
       << r.budget_violations << ',' << r.risk << ',' << r.half_width << ',' << (r.pass ? "true" : "false");
    return os.str();
}

Model train_model(const ExperimentConfig& c) {
    const TaskParams tp = resolve_params(c);
    std::size_t used = 0;
    if (const auto* p = std::get_if<TaskParams1>(&tp)) return train1(c, *p, make_secret1(c, *p), used);
    const auto& p = std::get<TaskParams2>(tp);
    return train2(c, p, make_secret2(c, p), used);
}

std::vector<InstanceRecord> generate_instances(const ExperimentConfig& c, std::size_t count) {
    const TaskParams tp = resolve_params(c);
    std::vector<InstanceRecord> out;
    auto record = [&](std::size_t t, bool label, const auto& x, const auto& a) {
        out.push_back({t, label, flatten(x), flatten(a.x), a.spent, a.failed});
    };
    if (const auto* p1 = std::get_if<TaskParams1>(&tp)) {
        validate_attack_kind(c.attack, true);
        const std::size_t budget = attack_budget_of(c.attack, p1->budget);
        const Secret1 sec = make_secret1(c, *p1);
        for (std::size_t t = 0; t < count; ++t) {
            CounterRng srng(c.seed, t, kRoleSample), arng(c.seed, t, kRoleAttack);
            const Sample1 s = sample_c1(sec, *p1, srng);
            record(t, s.label, s.x, attack1(c.attack, s.x, *p1, budget, arng));
        }
    } else {
        const auto& p = std::get<TaskParams2>(tp);
        validate_attack_kind(c.attack, false);
        const std::size_t budget = attack_budget_of(c.attack, p.budget);
        const BitVector sec = make_secret2(c, p);
        for (std::size_t t = 0; t < count; ++t) {
            CounterRng srng(c.seed, t, kRoleSample), arng(c.seed, t, kRoleAttack);
            const Sample2 s = sample_c2(sec, p, srng);
            record(t, s.label, s.x, attack2(c.attack, s.x, p, budget, arng));
        }
    }
    return out;
}

std::vector<Segment> instance_manifest(const ExperimentConfig& c) {
    return std::visit([](const auto& p) { return manifest(p); }, resolve_params(c));
}

ExperimentReport estimate_risk(const ExperimentConfig& c) { return run(c, false); }
ExperimentReport estimate_robust_risk(const ExperimentConfig& c) { return run(c, true); }

// ---------------------------------------------------------------------------
// Suites.

namespace {

constexpr double kLowerRisk = 3.0 / 8 - 0.05;
constexpr double kNegligible = 0.01;

ExperimentConfig suite_config(const SuiteOptions& o, std::string preset, Fixture fixture) {
    ExperimentConfig c;
    c.preset = std::move(preset);
    c.fixture = fixture;
    c.trials = o.trials;
    c.seed = o.seed;
    c.workers = o.workers;
    c.half_width = o.half_width;
    return c;
}

void add(SuiteResult& s, std::string name, const ExperimentConfig& c, bool robust) {
    ExperimentReport r = robust ? estimate_robust_risk(c) : estimate_risk(c);
    r.name = std::move(name);
    s.reports.push_back(std::move(r));
}

void check(SuiteResult& s, std::string name, bool ok) { s.checks.emplace_back(std::move(name), ok); }

// Truncation sweep; returns the reports in budget order.
std::vector<const ExperimentReport*> sweep(SuiteResult& s, const std::string& prefix, ExperimentConfig c,
                                           const std::vector<std::pair<std::string, std::size_t>>& points, bool robust) {
    c.learner.kind = "truncation";
    c.max_risk.reset();
    c.min_risk.reset();
    const std::size_t first = s.reports.size();
    for (const auto& [label, bits] : points) {
        c.learner.budget_bits = bits;
        add(s, prefix + label, c, robust);
    }
    std::vector<const ExperimentReport*> out;
    for (std::size_t i = first; i < s.reports.size(); ++i) out.push_back(&s.reports[i]);
    return out;
}

SuiteResult suite_e1(const SuiteOptions& o) {
    SuiteResult s{"e1", {}, {}, true};
    const auto p = preset_c1("C1-small");
    ExperimentConfig c = suite_config(o, "C1-small", Fixture::UniformP);
    c.min_risk = kLowerRisk;
    for (Compression k : kAllCompressions) {
        c.learner.kind = compression_name(k);
        c.learner.budget_bits = p.alpha / 2;
        add(s, "e1/" + std::string(compression_name(k)) + "@alpha/2", c, false);
    }
    c.min_risk.reset();
    c.max_risk = kNegligible;
    c.learner = LearnerSpec{};
    add(s, "e1/efficient@full", c, false);
    check(s, "efficient learner used the coupon-collector sample size",
          s.reports.back().samples_used == c1_sample_size(p) && s.reports.back().param_bits == p.alpha + p.beta);

    ExperimentConfig it = suite_config(o, "C1-tiny", Fixture::Prg);
    it.learner.kind = "it";
    it.learner.effort_cap = std::uint64_t{1} << 16;
    it.max_risk = kNegligible;
    add(s, "e1/it@C1-tiny", it, false);
    check(s, "seed-search model has 2 lambda = 16 parameters", s.reports.back().param_bits == 16);

    if (o.sweep) {
        const auto pts = sweep(s, "e1/sweep/truncation@", c,
                               {{"0", 0}, {"alpha/4", p.alpha / 4}, {"alpha/2", p.alpha / 2}, {"alpha", p.alpha},
                                {"alpha+beta", p.alpha + p.beta}},
                               false);
        bool mono = true;
        for (std::size_t i = 1; i < pts.size(); ++i)
            mono = mono && pts[i]->risk <= pts[i - 1]->risk + pts[i]->half_width + pts[i - 1]->half_width;
        check(s, "sweep risk is non-increasing within the confidence band", mono);
        check(s, "sweep ends at risk <= 0.01", pts.back()->risk <= kNegligible);
    }
    return s;
}

SuiteResult suite_e2(const SuiteOptions& o) {
    SuiteResult s{"e2", {}, {}, true};
    const auto p = preset_c1("C1-small");
    ExperimentConfig c = suite_config(o, "C1-small", Fixture::UniformQ);
    c.attack.kind = "noise-plant";
    c.min_risk = kLowerRisk;
    for (Compression k : kAllCompressions) {
        c.learner.kind = compression_name(k);
        c.learner.budget_bits = p.beta / 4;
        add(s, "e2/" + std::string(compression_name(k)) + "@beta/4", c, true);
    }
    c.min_risk.reset();
    c.max_risk = kNegligible;
    c.learner = LearnerSpec{};
    add(s, "e2/efficient@full/noise-plant", c, true);
    check(s, "noise-plant attack spent at most the task budget",
          s.reports.back().spent_histogram.empty() || s.reports.back().spent_histogram.rbegin()->first <= p.budget);

    // Baselines for the upper bound: the same model against generic corruption at full budget.
    ExperimentConfig base = c;
    base.attack = AttackSpec{};
    base.attack.kind = "random";
    add(s, "e2/efficient@full/random", base, true);
    base.attack.kind = "targeted";
    base.attack.segment = "masked";
    add(s, "e2/efficient@full/targeted-masked", base, true);

    if (o.sweep) {
        const auto pts = sweep(s, "e2/sweep/truncation@", c,
                               {{"0", 0}, {"beta/8", p.beta / 8}, {"beta/4", p.beta / 4}, {"beta/2", p.beta / 2},
                                {"alpha+beta", p.alpha + p.beta}},
                               true);
        bool high = true;
        for (std::size_t i = 0; i < 3; ++i) high = high && pts[i]->risk >= kLowerRisk;
        check(s, "sweep stays >= 3/8 - 0.05 through beta/4 parameters", high);
        check(s, "sweep ends at robust risk <= 0.01", pts.back()->risk <= kNegligible);
    }
    return s;
}

SuiteResult suite_e3(const SuiteOptions& o) {
    SuiteResult s{"e3", {}, {}, true};
    ExperimentConfig c40 = suite_config(o, "C2-small-40", Fixture::Prg);
    c40.learner.kind = "listdecode";
    c40.max_risk = kNegligible;
    c40.attack.kind = "random";
    add(s, "e3/listdecode/random@h40", c40, true);
    c40.attack.kind = "forge";
    c40.attack.effort = 0;
    add(s, "e3/listdecode/forge-effort0@h40", c40, true);

    ExperimentConfig c16 = suite_config(o, "C2-small", Fixture::Prg);
    c16.learner.kind = "listdecode";
    c16.attack.kind = "forge";
    c16.attack.effort = 0;
    c16.max_risk = kNegligible;
    add(s, "e3/listdecode/forge-effort0@h16", c16, true);
    const double acc_weak = s.reports.back().accuracy();
    c16.attack.effort = std::uint64_t{1} << 16;
    c16.max_risk = 0.55;
    c16.min_risk = 0.45;
    add(s, "e3/listdecode/forge-effort2^16@h16", c16, true);
    const double acc_strong = s.reports.back().accuracy();
    check(s, "accuracy gap between effort 0 and 2^16 forging is >= 0.4", acc_weak - acc_strong >= 0.4);

    c16.learner.kind = "it-c2";
    c16.min_risk.reset();
    c16.max_risk = kNegligible;
    add(s, "e3/it-c2@full/forge-effort2^16@h16", c16, true);
    check(s, "secret learner keeps all alpha parameters", s.reports.back().param_bits == preset_c2("C2-small").alpha);
    return s;
}

}  // namespace

SuiteResult run_suite(std::string_view which, const SuiteOptions& opt) {
    SuiteResult s;
    if (which == "e1") s = suite_e1(opt);
    else if (which == "e2") s = suite_e2(opt);
    else if (which == "e3") s = suite_e3(opt);
    else throw ConfigError("unknown suite: " + std::string(which));
    s.pass = std::all_of(s.reports.begin(), s.reports.end(), [](const auto& r) { return r.pass; }) &&
             std::all_of(s.checks.begin(), s.checks.end(), [](const auto& c) { return c.second; });
    return s;
}

json suite_to_json(const SuiteResult& s) {
    json checks = json::array(), reports = json::array();
    for (const auto& [name, ok] : s.checks) checks.push_back({{"name", name}, {"pass", ok}});
    for (const auto& r : s.reports) reports.push_back(report_to_json(r));
    return {{"schema_version", kReportSchemaVersion}, {"suite", s.name}, {"pass", s.pass}, {"checks", checks},
            {"reports", reports}};
}

// ---------------------------------------------------------------------------
// Validators.

namespace {

Dist random_dist(std::size_t size, std::size_t support, CounterRng& rng) {
    std::vector<Real> w(size, 0);
    for (std::size_t i = 0; i < support; ++i) w[rng.below(size)] += 1 + static_cast<Real>(rng.below(1000));
    return Dist::from_weights(std::move(w));
}

std::string fmt(Real v) {
    std::ostringstream os;
    os << std::setprecision(6) << static_cast<double>(v);
    return os.str();
}

}  // namespace

ValidatorReport run_validators(std::uint64_t seed) {
    ValidatorReport out;
    CounterRng rng(seed, 0, 0);
    auto entry = [&](std::string name, bool pass, std::string detail, bool expect_fail = false) {
        out.entries.push_back({std::move(name), expect_fail ? !pass : pass, expect_fail, std::move(detail)});
    };

    // Inner-product extractor on uniform distributions over random subspaces of {0,1}^n.
    for (unsigned n = 2; n <= 12; ++n) {
        bool ok = true;
        std::string witness;
        Real worst = 0;
        for (int t = 0; t < 6; ++t) {
            std::vector<std::uint64_t> pts{0};
            const std::size_t gens = 1 + rng.below(n);
            for (std::size_t g = 0; g < gens; ++g) {
                const std::uint64_t v = rng.below(std::uint64_t{1} << n);
                const std::size_t sz = pts.size();
                for (std::size_t i = 0; i < sz; ++i) pts.push_back(pts[i] ^ v);
            }
            const auto rep = ip_extractor_check(Dist::flat(std::size_t{1} << n, pts), n);
            worst = std::max(worst, rep.sd / rep.stated_bound);
            if (!rep.pass && ok) witness = "; failing source H=" + fmt(rep.h_min) + " sd=" + fmt(rep.sd);
            ok = ok && rep.pass;
        }
        entry("ip-extractor n=" + std::to_string(n), ok, "max sd/bound " + fmt(worst) + witness);
    }

    // Masking bound and the convolution-bias identity at ell = 2.
    const Field f2(2);
    for (std::size_t n = 1; n <= 3; ++n) {
        const std::size_t U = std::size_t{1} << (2 * n);
        bool mask_ok = true, ident_ok = true;
        Real worst = 0;
        std::string witness;
        for (int t = 0; t < 50; ++t) {
            const Dist x = random_dist(U, 1 + rng.below(40), rng), y = random_dist(U, 1 + rng.below(40), rng);
            const auto m = masking_check(x, y, f2, n);
            if (m.bound > 0) worst = std::max(worst, m.sd / m.bound);
            if (!m.pass && mask_ok) witness = "; failing pair H(X)=" + fmt(m.k) + " eps=" + fmt(m.eps);
            mask_ok = mask_ok && m.pass;
            for (std::uint64_t a = 0; a < U; ++a) ident_ok = ident_ok && convolution_bias_identity_check(x, y, f2, unpack_index(a, n, 2)).pass;
        }
        entry("masking ell=2 n=" + std::to_string(n), mask_ok, "max sd/bound " + fmt(worst) + witness);
        entry("convolution-bias identity ell=2 n=" + std::to_string(n), ident_ok, "50 random pairs, every alpha");
    }

    // Noisy Reed-Solomon distributions are (1 - R)^s-biased.
    const RsCode micro(Field(3), 5, 1);
    for (std::size_t s = 0; s <= 3; ++s) {
        const auto rep = noisy_code_check(micro, s);
        entry("noisy-code ell=3 n=5 k=1 s=" + std::to_string(s), rep.pass,
              "max bias " + fmt(rep.max_bias) + " <= " + fmt(rep.bound));
    }

    // Both bullets of the average min-entropy lemma.
    {
        bool ok = true;
        std::string witness;
        for (int t = 0; t < 100; ++t) {
            const std::size_t nx = 2 + rng.below(15), nz = 1 + rng.below(8);
            std::vector<Real> w(nx * nz, 0);
            for (std::size_t i = 0, cnt = 1 + rng.below(nx * nz); i < cnt; ++i)
                w[rng.below(nx * nz)] += 1 + static_cast<Real>(rng.below(100));
            const Real eps = Real{1} / static_cast<Real>(2 + rng.below(15));
            const auto rep = min_entropy_lemma_check(JointDist::from_weights(nx, nz, std::move(w)), eps);
            const bool pass = rep.chain_holds && rep.tail_holds;
            if (!pass && ok) witness = "; failing joint " + std::to_string(nx) + "x" + std::to_string(nz);
            ok = ok && pass;
        }
        entry("min-entropy lemma (100 random joints)", ok, "chain rule and tail bound" + witness);
    }

    // Parseval on random micro-distributions.
    {
        bool ok = true;
        Real worst = 0;
        for (int t = 0; t < 100; ++t) {
            const unsigned ell = 1 + static_cast<unsigned>(rng.below(3));
            const std::size_t n = 1 + rng.below(6 / ell);
            const auto rep = parseval_check(random_dist(std::size_t{1} << (n * ell), 1 + rng.below(30), rng), Field(ell), n);
            worst = std::max(worst, std::fabs(rep.lhs - rep.rhs));
            ok = ok && rep.pass;
        }
        entry("parseval (100 random micro-distributions)", ok, "max |lhs - rhs| " + fmt(worst));
    }

    // Negative control: the noisy-code bound with the exponent inflated by 3 must be reported broken.
    {
        const auto rep = noisy_code_check(micro, 1);
        const Real corrupted = std::pow(1 - static_cast<Real>(micro.rate()), Real{4});
        const bool pass = rep.max_bias <= corrupted + kTol.identity;
        entry("negative control: corrupted noisy-code bound (1-R)^(s+3)", pass,
              "witness noisy RS ell=3 n=5 k=1 s=1: max bias " + fmt(rep.max_bias) + " > corrupted bound " + fmt(corrupted),
              true);
    }

    out.pass = std::all_of(out.entries.begin(), out.entries.end(), [](const auto& e) { return e.pass; });
    return out;
}

json validators_to_json(const ValidatorReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"name", e.name}, {"pass", e.pass}, {"expect_fail", e.expect_fail}, {"detail", e.detail}});
    return {{"schema_version", kReportSchemaVersion}, {"pass", r.pass}, {"entries", entries}};
}

}  // namespace paramsep
