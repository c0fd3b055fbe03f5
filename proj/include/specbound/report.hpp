#ifndef SPECBOUND_REPORT_HPP
#define SPECBOUND_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace specbound {

/// Outcome of one estimate instantiated on a parameter grid.
///
/// `observed_constant` is the extremal value found on the grid and
/// `threshold` the pass bound it is compared against.  `table` carries
/// the per-grid-point values for the CSV companion; `details` holds
/// check-specific scalars (grid description, sub-check ratios, ...).
struct CheckReport {
    std::string check_name;
    bool pass = false;
    double observed_constant = 0.0;
    double threshold = 0.0;
    nlohmann::json grid;
    nlohmann::json details;
    double runtime_ms = 0.0;

    std::vector<std::string> table_header;
    std::vector<std::vector<double>> table;

    // Deterministic content only; runtime_ms is intentionally excluded so
    // identical runs serialize byte-identically (it lives in the metadata
    // file written by the CLI).
    nlohmann::json to_json() const;
    std::string to_csv() const;
};

} // namespace specbound

#endif
