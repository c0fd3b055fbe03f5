#include "specbound/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "specbound/cz_riesz.hpp"
#include "specbound/gaussian.hpp"
#include "specbound/models.hpp"
#include "specbound/multiplier.hpp"
#include "specbound/wave_heat.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specbound {

namespace fs = std::filesystem;
using nlohmann::json;

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    for (const auto& [key, val] : j.items()) {
        if (key == "model")
            cfg.model = val.get<std::string>();
        else if (key == "out_dir")
            cfg.out_dir = val.get<std::string>();
        else if (key == "seed")
            cfg.seed = val.get<unsigned>();
        else if (key == "jobs")
            cfg.jobs = val.get<int>();
        else if (key == "tolerance_scale")
            cfg.tolerance_scale = val.get<double>();
        else if (key == "checks") {
            for (const auto& c : val) {
                RunConfig::CheckSpec spec;
                if (c.is_string()) {
                    spec.name = c.get<std::string>();
                } else {
                    for (const auto& [ck, cv] : c.items()) {
                        if (ck == "name")
                            spec.name = cv.get<std::string>();
                        else if (ck == "params")
                            spec.params = cv;
                        else
                            throw ConfigError("unknown key in check entry: " +
                                              ck);
                    }
                }
                if (spec.name.empty())
                    throw ConfigError("check entry without a name");
                cfg.checks.push_back(std::move(spec));
            }
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json checks = json::array();
    for (const auto& c : cfg.checks)
        checks.push_back({{"name", c.name}, {"params", c.params}});
    return {{"model", cfg.model},      {"checks", checks},
            {"out_dir", cfg.out_dir},  {"seed", cfg.seed},
            {"jobs", cfg.jobs},        {"tolerance_scale", cfg.tolerance_scale}};
}

namespace {

std::vector<Edge> cycle_edges(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
    return e;
}
std::vector<Edge> path_edges(int n) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
    return e;
}
std::vector<Edge> grid_edges(int rows, int cols) {
    std::vector<Edge> e;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) e.push_back({id(r, c), id(r, c + 1), 1.0});
            if (r + 1 < rows) e.push_back({id(r, c), id(r + 1, c), 1.0});
        }
    return e;
}

} // namespace

ModelContext build_model(const std::string& spec) {
    ModelContext ctx;
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    if (kind == "cycle" || kind == "path" || kind == "grid" ||
        kind == "star") {
        if (colon == std::string::npos)
            throw ConfigError("builtin model needs a size, e.g. cycle:64");
        std::string size = spec.substr(colon + 1);
        try {
            if (kind == "grid") {
                auto x = size.find('x');
                if (x == std::string::npos)
                    throw ConfigError("grid size must look like 8x8");
                int r = std::stoi(size.substr(0, x));
                int c = std::stoi(size.substr(x + 1));
                ctx.space = std::make_shared<MetricMeasureSpace>(
                    make_grid(r, c));
                ctx.edges = grid_edges(r, c);
            } else {
                int n = std::stoi(size);
                if (kind == "cycle") {
                    ctx.space =
                        std::make_shared<MetricMeasureSpace>(make_cycle(n));
                    ctx.edges = cycle_edges(n);
                } else if (kind == "path") {
                    ctx.space =
                        std::make_shared<MetricMeasureSpace>(make_path(n));
                    ctx.edges = path_edges(n);
                } else {
                    ctx.space =
                        std::make_shared<MetricMeasureSpace>(make_star(n));
                    for (int i = 1; i <= n; ++i) ctx.edges.push_back({0, i, 1.0});
                }
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad model spec '") + spec +
                              "': " + e.what());
        }
    } else {
        if (!fs::exists(spec))
            throw ConfigError("model file not found: " + spec);
        try {
            auto [space, edges] = load_space(spec);
            ctx.space = std::make_shared<MetricMeasureSpace>(std::move(space));
            ctx.edges = edges;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("cannot load model '") + spec +
                              "': " + e.what());
        }
    }
    if (ctx.space->n > 4096)
        throw ConfigError("model too large for the dense path (n = " +
                          std::to_string(ctx.space->n) + " > 4096)");
    try {
        ctx.laplacian = graph_laplacian(ctx.space, ctx.edges);
        ctx.dec = spectral_decompose(ctx.laplacian);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model validation failed: ") + e.what());
    }
    return ctx;
}

namespace {

double pd(const json& p, const std::string& key, double dflt) {
    return p.contains(key) ? p[key].get<double>() : dflt;
}
int pi(const json& p, const std::string& key, int dflt) {
    return p.contains(key) ? p[key].get<int>() : dflt;
}

std::vector<double> pgrid(const json& p, const std::string& key,
                          std::vector<double> dflt) {
    if (!p.contains(key)) return dflt;
    return p[key].get<std::vector<double>>();
}

} // namespace

std::vector<std::string> known_checks() {
    return {"davies_gaffney",   "propagation_speed", "subordination",
            "ellip_equivalence", "osz_decay",        "pom_estimate",
            "molchanov_sphere", "truncation_identity", "good_function",
            "riesz_tail_bound", "riesz_l2",          "domination",
            "energy_decay",     "hodge_commutation"};
}

namespace {
CheckReport run_check_impl(const std::string& name, const ModelContext& model,
                           const json& params, unsigned seed,
                           double tolerance_scale) {
    const auto& dec = model.dec;
    const auto& space = model.space;
    if (name == "davies_gaffney") {
        std::vector<PairProbe> probes;
        auto ts = pgrid(params, "t_grid", {0.5, 1.0, 2.0, 4.0});
        for (int y = 1; y < space->n; ++y) {
            double r = space->rho(0, y);
            if (r >= 2.0 && r <= 32.0)
                for (double t : ts) probes.push_back({0, y, t});
        }
        return davies_gaffney_check(dec, probes,
                                    pd(params, "constant", 2.0) *
                                        tolerance_scale);
    }
    if (name == "propagation_speed")
        return propagation_speed_estimate(
            dec, pgrid(params, "t_grid", {2.0, 4.0, 6.0, 8.0}),
            pd(params, "eps", 1e-12));
    if (name == "subordination")
        return subordination_check(dec, pd(params, "s", 0.5),
                                   pi(params, "nodes", 64));
    if (name == "ellip_equivalence")
        return ellip_equivalence_check(
            dec, pgrid(params, "t_grid", {1.0, 2.0, 4.0}),
            pd(params, "m", 4.0), pd(params, "D", 1.0));
    if (name == "osz_decay")
        return verify_osz_decay(build_gl2_family(pd(params, "s", 4.0)),
                                pi(params, "N", 2));
    if (name == "pom_estimate")
        return verify_pom_estimate(build_riesz_tail_family(
            pd(params, "alpha", 0.5), 1, pi(params, "m", 1),
            pi(params, "K", 3)));
    if (name == "molchanov_sphere")
        return molchanov_sphere_check(
            pi(params, "l_max", 40),
            pgrid(params, "t_grid", {0.15, 0.2, 0.25, 0.3}));
    if (name == "truncation_identity") {
        std::vector<HeatTriple> triples;
        double target = std::min(16.0, space->diameter() / 2.0);
        int best = 0;
        for (int y = 1; y < space->n; ++y)
            if (std::abs(space->rho(0, y) - target) <
                std::abs(space->rho(0, best) - target))
                best = y;
        double rho = space->rho(0, best);
        triples.push_back({0, best, pd(params, "t", rho * rho / 64.0)});
        return truncation_identity_check(dec, triples);
    }
    if (name == "good_function") {
        std::mt19937 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXd f(space->n);
        for (int i = 0; i < space->n; ++i) f(i) = gauss(rng);
        PhiFamily phi = build_phi_family(pi(params, "K", 2));
        return good_function_diagnostic(dec, f, pd(params, "lambda", 1.0),
                                        phi);
    }
    if (name == "riesz_tail_bound") {
        LocalOperator A = graph_gradient(space, model.edges);
        PhiFamily phi = build_phi_family(pi(params, "K", 2));
        return riesz_tail_bound_check(A, dec, phi, pd(params, "alpha", 0.5),
                                      pd(params, "r", 4.0),
                                      pi(params, "j_max", 5));
    }
    if (name == "riesz_l2") {
        LocalOperator A = graph_gradient(space, model.edges);
        double norm = riesz_l2_norm(A, dec, pd(params, "alpha", 0.5));
        CheckReport rep;
        rep.check_name = "riesz_l2";
        rep.observed_constant = norm;
        rep.threshold = 1.0 + 1e-8 * tolerance_scale;
        rep.pass = norm <= rep.threshold;
        rep.grid.push_back(pd(params, "alpha", 0.5));
        return rep;
    }
    if (name == "domination") {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> unif(0.0, 2.0 * 3.14159265);
        std::vector<double> phases;
        for (size_t i = 0; i < model.edges.size(); ++i)
            phases.push_back(unif(rng));
        auto ms = build_magnetic(space, model.edges, phases,
                                 Eigen::VectorXd::Zero(space->n));
        return domination_check(ms, pgrid(params, "t_grid", {0.1, 1.0, 10.0}));
    }
    if (name == "energy_decay") {
        std::vector<double> zero(model.edges.size(), 0.0);
        auto ms = build_magnetic(space, model.edges, zero,
                                 Eigen::VectorXd::Zero(space->n));
        double kappa = pd(params, "kappa", 0.5);
        Eigen::VectorXd xi(space->n);
        for (int x = 0; x < space->n; ++x) xi(x) = kappa * space->rho(0, x);
        return energy_decay_check(ms, xi, kappa,
                                  pgrid(params, "t_grid", {0.5, 1.0, 2.0, 4.0}),
                                  0, 0.0);
    }
    if (name == "hodge_commutation") {
        HodgeComplex hc = build_hodge(3, {{0, 1}, {1, 2}, {0, 2}},
                                      {{{0, 1, 2}}});
        return commutation_check(hc);
    }
    std::ostringstream msg;
    msg << "unknown check '" << name << "'; valid names:";
    for (const auto& c : known_checks()) msg << " " << c;
    throw ConfigError(msg.str());
}
} // namespace

CheckReport run_check(const std::string& name, const ModelContext& model,
                      const json& params, unsigned seed,
                      double tolerance_scale) {
    CheckReport rep = run_check_impl(name, model, params, seed,
                                     tolerance_scale);
    rep.check_name = name; // registry name, not the library-internal one
    return rep;
}

int run_suite(const RunConfig& cfg) {
    if (cfg.checks.empty()) throw ConfigError("no checks selected");
#ifdef _OPENMP
    if (cfg.jobs > 0) omp_set_num_threads(cfg.jobs);
#endif
    ModelContext model = build_model(cfg.model);
    fs::create_directories(cfg.out_dir);

    // Validate all names up front so a typo cannot leave partial output.
    for (const auto& spec : cfg.checks) {
        auto names = known_checks();
        if (std::find(names.begin(), names.end(), spec.name) == names.end()) {
            std::ostringstream msg;
            msg << "unknown check '" << spec.name << "'; valid names:";
            for (const auto& c : names) msg << " " << c;
            throw ConfigError(msg.str());
        }
    }

    bool all_pass = true;
    std::ostringstream summary;
    summary << "check,pass,observed_constant,threshold\n";
    json metadata;
    std::map<std::string, int> name_count;
    for (const auto& spec : cfg.checks) {
        auto t0 = std::chrono::steady_clock::now();
        CheckReport rep = run_check(spec.name, model, spec.params, cfg.seed,
                                    cfg.tolerance_scale);
        auto t1 = std::chrono::steady_clock::now();
        rep.runtime_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        all_pass = all_pass && rep.pass;
        std::string base = spec.name;
        int k = name_count[spec.name]++;
        if (k > 0) base += "_" + std::to_string(k);
        {
            std::ofstream out(fs::path(cfg.out_dir) / (base + ".json"));
            out << rep.to_json().dump(2) << "\n";
        }
        {
            std::ofstream out(fs::path(cfg.out_dir) / (base + ".csv"));
            out << rep.to_csv();
        }
        summary << spec.name << "," << (rep.pass ? "1" : "0") << ","
                << rep.observed_constant << "," << rep.threshold << "\n";
        metadata["runtime_ms"][base] = rep.runtime_ms;
    }
#ifdef _OPENMP
    metadata["max_threads"] = omp_get_max_threads();
#else
    metadata["max_threads"] = 1;
#endif
    {
        std::ofstream out(fs::path(cfg.out_dir) / "summary.csv");
        out << summary.str();
    }
    {
        std::ofstream out(fs::path(cfg.out_dir) / "resolved_config.json");
        out << config_to_json(cfg).dump(2) << "\n";
    }
    {
        std::ofstream out(fs::path(cfg.out_dir) / "metadata.json");
        out << metadata.dump(2) << "\n";
    }
    return all_pass ? 0 : 1;
}

std::string summarize_reports(const std::string& dir) {
    std::ostringstream out;
    out << "check,pass,observed_constant,threshold\n";
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        auto stem = entry.path().stem().string();
        if (stem == "resolved_config" || stem == "metadata") continue;
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f);
        json j = json::parse(in);
        out << j.value("check_name", f.stem().string()) << ","
            << (j.value("pass", false) ? "1" : "0") << ","
            << j.value("observed_constant", 0.0) << ","
            << j.value("threshold", 0.0) << "\n";
    }
    return out.str();
}

} // namespace specbound
