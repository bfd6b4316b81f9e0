// Command-line front end for the experiment harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "paramsep/adversaries.hpp"
#include "paramsep/harness.hpp"

using namespace paramsep;
using nlohmann::json;

namespace {

struct Flags {
    std::string preset;
    std::string params_file;
    std::string fixture;
    std::string learner;
    std::optional<std::size_t> budget_bits;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> effort_cap;
    std::string attack;
    std::optional<std::size_t> attack_budget;
    std::optional<std::uint64_t> effort;
    std::string segment;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> delta;
    std::optional<double> half_width;
    std::optional<unsigned> workers;
    std::optional<double> max_risk;
    std::optional<double> min_risk;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--preset", f.preset, "task preset (C1-tiny, C1-small, C2-small, C2-small-40)");
    app->add_option("--params", f.params_file, "JSON config file; command-line flags override its keys")
        ->check(CLI::ExistingFile);
    app->add_option("--seed", f.seed, "experiment seed");
    app->add_option("--trials", f.trials, "trial or instance count");
    app->add_option("--workers", f.workers, "worker threads (0 = all cores)");
    app->add_option("--out", f.out, "output file (default stdout)");
    app->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_task(CLI::App* app, Flags& f) {
    app->add_option("--fixture", f.fixture, "prg, uniform-p or uniform-q");
    app->add_option("--learner", f.learner, "learner kind");
    app->add_option("--budget-bits", f.budget_bits, "parameter budget of bounded learners");
    app->add_option("--samples", f.samples, "training samples (default: coupon-collector size)");
    app->add_option("--effort-cap", f.effort_cap, "seed-search cap of the information-theoretic learner");
    app->add_option("--delta", f.delta, "Hoeffding failure probability");
    app->add_option("--half-width", f.half_width, "required Hoeffding half-width");
    app->add_option("--max-risk", f.max_risk, "pass threshold: risk at most");
    app->add_option("--min-risk", f.min_risk, "pass threshold: risk at least");
}

void add_attack(CLI::App* app, Flags& f) {
    app->add_option("--attack", f.attack, "none, noise-plant, forge, forge-oracle, random, targeted");
    app->add_option("--attack-budget", f.attack_budget, "Hamming budget (default: task budget)");
    app->add_option("--effort", f.effort, "forging search effort");
    app->add_option("--segment", f.segment, "segment for the targeted attack");
}

ExperimentConfig build_config(const Flags& f) {
    ExperimentConfig c;
    if (!f.params_file.empty()) {
        std::ifstream in(f.params_file);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("cannot parse ") + f.params_file + ": " + e.what());
        }
        c = config_from_json(j);
    }
    if (!f.preset.empty()) c.preset = f.preset;
    if (!f.fixture.empty()) c.fixture = parse_fixture(f.fixture);
    if (!f.learner.empty()) c.learner.kind = f.learner;
    if (f.budget_bits) c.learner.budget_bits = *f.budget_bits;
    if (f.samples) c.learner.samples = *f.samples;
    if (f.effort_cap) c.learner.effort_cap = *f.effort_cap;
    if (!f.attack.empty()) c.attack.kind = f.attack;
    if (f.attack_budget) c.attack.budget = *f.attack_budget;
    if (f.effort) c.attack.effort = *f.effort;
    if (!f.segment.empty()) c.attack.segment = f.segment;
    if (f.trials) c.trials = *f.trials;
    if (f.seed) c.seed = *f.seed;
    if (f.delta) c.delta = *f.delta;
    if (f.half_width) c.half_width = *f.half_width;
    if (f.workers) c.workers = *f.workers;
    if (f.max_risk) c.max_risk = f.max_risk;
    if (f.min_risk) c.min_risk = f.min_risk;
    return c;
}

void emit(const Flags& f, const std::string& text) {
    if (f.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(f.out);
    if (!out) throw std::runtime_error("cannot write " + f.out);
    out << text;
}

std::string symbols(const SymbolVector& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

std::string instances_text(const Flags& f, const ExperimentConfig& c, bool attacked) {
    const auto recs = generate_instances(c, c.trials);
    if (f.format == "csv") {
        std::ostringstream os;
        os << (attacked ? "trial,label,spent,attack_failed,clean,attacked\n" : "trial,label,symbols\n");
        for (const auto& r : recs) {
            os << r.trial << ',' << r.label << ',';
            if (attacked) os << r.spent << ',' << r.attack_failed << ',';
            os << symbols(r.clean);
            if (attacked) os << ',' << symbols(r.attacked);
            os << '\n';
        }
        return os.str();
    }
    json segs = json::array(), items = json::array();
    for (const auto& s : instance_manifest(c)) segs.push_back({{"name", s.name}, {"offset", s.offset}, {"length", s.length}});
    for (const auto& r : recs) {
        json item{{"trial", r.trial}, {"label", r.label}, {"symbols", r.clean}};
        if (attacked) {
            item["attacked"] = r.attacked;
            item["spent"] = r.spent;
            item["attack_failed"] = r.attack_failed;
        }
        items.push_back(std::move(item));
    }
    json j{{"schema_version", kReportSchemaVersion}, {"seed", c.seed}, {"count", recs.size()},
           {"params", params_to_json(resolve_params(c))}, {"manifest", segs}, {"instances", items}};
    if (attacked) j["attack"] = {{"kind", c.attack.kind}, {"budget", c.attack.budget == AttackSpec::npos ? json(nullptr) : json(c.attack.budget)}, {"effort", c.attack.effort}};
    return j.dump(2) + "\n";
}

std::string reports_text(const Flags& f, const std::vector<ExperimentReport>& reports, const json& j) {
    if (f.format == "json") return j.dump(2) + "\n";
    std::string s = report_csv_header() + "\n";
    for (const auto& r : reports) s += report_csv_row(r) + "\n";
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parameter-count separation experiments"};
    app.require_subcommand(1);
    Flags f;

    auto* gen = app.add_subcommand("gen", "emit instances (count = --trials)");
    add_common(gen, f);
    add_task(gen, f);

    auto* learn = app.add_subcommand("learn", "train a learner and emit its model");
    add_common(learn, f);
    add_task(learn, f);

    auto* attack = app.add_subcommand("attack", "emit instances before and after an attack");
    add_common(attack, f);
    add_task(attack, f);
    add_attack(attack, f);

    auto* risk = app.add_subcommand("risk", "estimate risk");
    add_common(risk, f);
    add_task(risk, f);

    auto* robust = app.add_subcommand("robust-risk", "estimate robust risk against an attack");
    add_common(robust, f);
    add_task(robust, f);
    add_attack(robust, f);

    std::string which;
    bool no_sweep = false;
    auto* suite = app.add_subcommand("suite", "run a separation experiment");
    suite->add_option("which", which, "e1, e2 or e3")->required()->check(CLI::IsMember({"e1", "e2", "e3"}));
    suite->add_flag("--no-sweep", no_sweep, "skip the parameter sweep");
    add_common(suite, f);

    auto* validate = app.add_subcommand("validate", "run the exhaustive validators");
    add_common(validate, f);

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig c = build_config(f);
        if (*gen) {
            emit(f, instances_text(f, c, false));
        } else if (*attack) {
            emit(f, instances_text(f, c, true));
        } else if (*learn) {
            const Model m = train_model(c);
            if (f.format == "csv")
                emit(f, "kind,param_bits,params\n" + m.kind + "," + std::to_string(m.param_bits) + "," + m.params.to_string() + "\n");
            else
                emit(f, json::parse(model_to_json(m)).dump(2) + "\n");
        } else if (*risk || *robust) {
            ExperimentReport r = *risk ? estimate_risk(c) : estimate_robust_risk(c);
            r.name = *risk ? "risk" : "robust-risk";
            emit(f, reports_text(f, {r}, report_to_json(r)));
            return r.pass ? 0 : 1;
        } else if (*suite) {
            SuiteOptions o;
            o.trials = c.trials;
            o.seed = c.seed;
            o.workers = c.workers;
            o.sweep = !no_sweep;
            if (f.half_width) o.half_width = *f.half_width;
            const SuiteResult s = run_suite(which, o);
            emit(f, reports_text(f, s.reports, suite_to_json(s)));
            for (const auto& [name, ok] : s.checks) std::cerr << (ok ? "PASS " : "FAIL ") << name << "\n";
            return s.pass ? 0 : 1;
        } else if (*validate) {
            const ValidatorReport v = run_validators(c.seed);
            if (f.format == "csv") {
                std::string s = "name,pass,expect_fail,detail\n";
                for (const auto& e : v.entries)
                    s += "\"" + e.name + "\"," + (e.pass ? "true" : "false") + "," + (e.expect_fail ? "true" : "false") +
                         ",\"" + e.detail + "\"\n";
                emit(f, s);
            } else {
                emit(f, validators_to_json(v).dump(2) + "\n");
            }
            return v.pass ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetViolation& e) {
        std::cerr << "budget violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
