#ifndef SPECBOUND_CLI_HPP
#define SPECBOUND_CLI_HPP

#include <string>
#include <vector>

#include "specbound/bundle_op.hpp"

namespace specbound {

/// Fully resolved run configuration (see docs/config-schema; unknown keys
/// are rejected at parse time).
struct RunConfig {
    std::string model = "cycle:64"; // builtin "name:size" or a space file
    struct CheckSpec {
        std::string name;
        nlohmann::json params; // per-check overrides
    };
    std::vector<CheckSpec> checks;
    std::string out_dir = ".";
    unsigned seed = 0;
    int jobs = 0; // 0 = library default
    double tolerance_scale = 1.0;
};

RunConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

/// Model instance shared by all checks of a run.
struct ModelContext {
    SpacePtr space;
    std::vector<Edge> edges;
    BundleOperator laplacian;
    SpectralDecomposition dec;
};
ModelContext build_model(const std::string& spec);

std::vector<std::string> known_checks();

/// Runs one named check against the model; throws on unknown names.
CheckReport run_check(const std::string& name, const ModelContext& model,
                      const nlohmann::json& params, unsigned seed,
                      double tolerance_scale);

/// Executes the configured checks, writes one JSON report per check, a
/// summary CSV, the resolved config, and a metadata file (runtimes,
/// thread counts — everything nondeterministic lives there).
/// Returns 0 iff all checks pass, 1 if any fails; configuration errors
/// throw ConfigError (mapped to exit code 2 by the CLI).
int run_suite(const RunConfig& cfg);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads every *.json report in a directory and renders the summary table.
std::string summarize_reports(const std::string& dir);

} // namespace specbound

#endif
