// Command-line driver: model assembly, check execution, suite
// orchestration, and report emission.
//
//   specbound model validate --config cfg.json   (or --model cycle:64)
//   specbound check run --config cfg.json --out reports/
//   specbound suite run --config cfg.json --out reports/
//   specbound report summarize --out reports/

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "specbound/cli.hpp"

using namespace specbound;

namespace {

RunConfig load_config(const std::string& config_path,
                      const std::string& model_override,
                      const std::string& out_override, unsigned seed,
                      bool seed_set, int jobs, double tol_scale,
                      const std::vector<std::string>& checks) {
    RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file: " + config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
        cfg = parse_config(j);
    }
    if (!model_override.empty()) cfg.model = model_override;
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_set) cfg.seed = seed;
    if (jobs > 0) cfg.jobs = jobs;
    if (tol_scale > 0.0) cfg.tolerance_scale = tol_scale;
    for (const auto& c : checks) cfg.checks.push_back({c, {}});
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral multiplier estimate verification toolkit"};
    app.require_subcommand(1);

    std::string config_path, model_spec, out_dir;
    unsigned seed = 0;
    bool seed_set = false;
    int jobs = 0;
    double tol_scale = 0.0;
    std::vector<std::string> check_names;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--model", model_spec,
                        "model override (builtin name:size or space file)");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "random seed")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--jobs", jobs, "worker thread count");
        cmd->add_option("--tolerance-scale", tol_scale,
                        "multiply pass tolerances");
    };

    auto* model_cmd = app.add_subcommand("model", "model operations");
    auto* model_validate = model_cmd->add_subcommand("validate",
                                                     "build and validate");
    add_common(model_validate);

    auto* check_cmd = app.add_subcommand("check", "single-check operations");
    auto* check_run = check_cmd->add_subcommand("run", "run named checks");
    add_common(check_run);
    check_run->add_option("--name", check_names, "check name(s) to run");

    auto* suite_cmd = app.add_subcommand("suite", "suite operations");
    auto* suite_run = suite_cmd->add_subcommand("run", "run the configured suite");
    add_common(suite_run);

    auto* report_cmd = app.add_subcommand("report", "report operations");
    auto* report_sum =
        report_cmd->add_subcommand("summarize", "summarize a report directory");
    add_common(report_sum);

    CLI11_PARSE(app, argc, argv);

    try {
        if (model_validate->parsed()) {
            RunConfig cfg = load_config(config_path, model_spec, out_dir, seed,
                                        seed_set, jobs, tol_scale, {});
            ModelContext ctx = build_model(cfg.model);
            std::cout << "model ok: n = " << ctx.space->n
                      << ", edges = " << ctx.edges.size()
                      << ", diameter = " << ctx.space->diameter()
                      << ", spectral radius = " << ctx.dec.spectral_radius()
                      << "\n";
            return 0;
        }
        if (check_run->parsed() || suite_run->parsed()) {
            RunConfig cfg = load_config(config_path, model_spec, out_dir, seed,
                                        seed_set, jobs, tol_scale, check_names);
            int status = run_suite(cfg);
            std::cout << summarize_reports(cfg.out_dir);
            return status;
        }
        if (report_sum->parsed()) {
            std::string dir = out_dir.empty() ? "." : out_dir;
            std::cout << summarize_reports(dir);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
