// mvp_bench: run regret experiments, export environments, run property checks.
//
// Exit codes: 0 ok, 1 property/bound failure, 2 I/O, 3 schema, 4 environment
// admits more than unit total reward.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mvp/config.hpp"
#include "mvp/environments.hpp"
#include "mvp/errors.hpp"
#include "mvp/harness.hpp"
#include "mvp/oracle_dp.hpp"
#include "mvp/verify.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kIo = 2, kSchema = 3, kAssumption = 4 };

void write_atomically(const fs::path& target, const std::string& contents) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw mvp::IoError("cannot write " + tmp.string());
        out << contents;
        if (!out.flush()) throw mvp::IoError("cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw mvp::IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

unsigned resolve_jobs(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    if (const char* env = std::getenv("MVP_BENCH_JOBS")) {
        const int value = std::atoi(env);
        if (value > 0) return static_cast<unsigned>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_run(const std::string& config_path, const std::string& output_override, int jobs) {
    mvp::ExperimentConfig cfg = mvp::load_config(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    const mvp::TabularMDP mdp = mvp::resolve_environment(cfg.env);

    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw mvp::IoError("cannot create " + cfg.output_dir.string() + ": " + ec.message());

    const mvp::RunOptions base{.agent = cfg.agent, .episodes = cfg.episodes, .delta = cfg.delta,
                               .seed = 0, .audit = cfg.audit};
    const auto results = mvp::run_batch(mdp, base, cfg.seeds, resolve_jobs(jobs));

    nlohmann::json runs = nlohmann::json::array();
    std::vector<mvp::RunSummary> summaries;
    bool all_ok = true;
    for (const auto& res : results) {
        std::ostringstream csv;
        mvp::write_episode_csv(csv, res.records);
        write_atomically(cfg.output_dir / ("run_seed" + std::to_string(res.summary.seed) + ".csv"), csv.str());

        nlohmann::json entry = mvp::to_json(res.summary);
        mvp::RandomStream pac_rng(res.summary.seed ^ 0x9e3779b97f4a7c15ULL);
        const mvp::PacSelection pac = mvp::pac_select(mdp, res, pac_rng);
        entry["pac_selection"] = {{"episode", pac.episode}, {"suboptimality", pac.suboptimality}};
        if (res.reward_weights) {
            const auto& w = *res.reward_weights;
            entry["reward_weights"] = {{"max_total_weight", w.max_total_weight},
                                       {"max_total_weight_with_tail", w.max_total_weight_with_tail},
                                       {"estimates", w.estimates},
                                       {"ok", w.ok()}};
            all_ok = all_ok && w.ok();
        }
        all_ok = all_ok && res.summary.epoch_bound_ok && res.summary.cache_mismatches == 0;
        runs.push_back(std::move(entry));
        summaries.push_back(res.summary);
    }
    const mvp::AggregateReport report = mvp::aggregate(summaries);
    nlohmann::json doc = {{"agent", mvp::to_string(cfg.agent)},
                          {"K", cfg.episodes},
                          {"delta", cfg.delta},
                          {"audit_level", mvp::to_string(cfg.audit)},
                          {"v_star_initial", mvp::initial_value(mdp, mvp::optimal_values(mdp))},
                          {"aggregate", mvp::to_json(report)},
                          {"runs", std::move(runs)}};
    if (const auto* spec = std::get_if<mvp::EnvSpec>(&cfg.env)) doc["env"] = mvp::to_json(*spec);
    write_atomically(cfg.output_dir / "aggregate.json", doc.dump(2) + "\n");

    std::cout << "wrote " << results.size() << " run(s) to " << cfg.output_dir.string() << "\n";
    for (const auto& c : report.checkpoints) {
        std::cout << "  regret@" << c.episode << ": mean " << c.mean << " (stderr " << c.stderr_ << ")\n";
    }
    std::cout << "  max updates " << report.max_update_count << " / bound " << report.epoch_bound << "\n";
    return all_ok ? kOk : kPropertyFailure;
}

int cmd_verify(double f_c1) {
    mvp::verify::SuiteOptions opts;
    if (f_c1 > 0.0) opts.f_constants.c1 = f_c1;
    const auto results = mvp::verify::run_suite(opts);
    bool all = true;
    const mvp::verify::CheckResult* first_failure = nullptr;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(38) << r.name
                  << " trials=" << r.trials << " failures=" << r.failures << "  " << r.detail << "\n";
        if (!r.passed && !first_failure) first_failure = &r;
        all = all && r.passed;
    }
    if (first_failure) {
        std::cout << "counterexample (" << first_failure->name << "): "
                  << first_failure->counterexample.dump() << "\n";
    }
    return all ? kOk : kPropertyFailure;
}

int cmd_export_env(const std::string& inline_spec) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(inline_spec);
    } catch (const nlohmann::json::parse_error& e) {
        throw mvp::SchemaError(std::string("spec is not valid JSON: ") + e.what());
    }
    std::cout << mvp::to_json(mvp::generate(mvp::env_spec_from_json(doc))).dump() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regret experiments for optimistic tabular episodic RL"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    int jobs = 0;
    auto* run_cmd = app.add_subcommand("run", "Run every seed of an experiment config");
    run_cmd->add_option("config", config_path, "Experiment JSON file")->required();
    run_cmd->add_option("--output-dir", output_dir, "Override the config's output_dir");
    run_cmd->add_option("--jobs", jobs, "Parallel seed runs (default: MVP_BENCH_JOBS or core count)");

    double f_c1 = 0.0;
    auto* verify_cmd = app.add_subcommand("verify", "Run the property and coverage checks");
    verify_cmd->add_option("--f-c1", f_c1, "Override the first coefficient of f (diagnostics)");

    std::string spec_json;
    auto* export_cmd = app.add_subcommand("export-env", "Print the MDP generated from an inline spec");
    export_cmd->add_option("spec", spec_json, "Environment spec as JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kSchema;
    }

    try {
        if (*run_cmd) return cmd_run(config_path, output_dir, jobs);
        if (*verify_cmd) return cmd_verify(f_c1);
        if (*export_cmd) return cmd_export_env(spec_json);
    } catch (const mvp::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const mvp::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSchema;
    } catch (const mvp::AssumptionViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAssumption;
    }
    return kSchema;
}
