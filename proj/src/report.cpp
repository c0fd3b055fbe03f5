#include "specbound/report.hpp"

#include <cmath>
#include <sstream>

namespace specbound {

nlohmann::json CheckReport::to_json() const {
    nlohmann::json j;
    j["check_name"] = check_name;
    j["pass"] = pass;
    j["observed_constant"] = observed_constant;
    j["threshold"] = threshold;
    j["grid"] = grid;
    j["details"] = details;
    return j;
}

std::string CheckReport::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    for (size_t i = 0; i < table_header.size(); ++i) {
        if (i) out << ',';
        out << table_header[i];
    }
    out << '\n';
    for (const auto& row : table) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            double v = row[i];
            if (v == std::floor(v) && std::abs(v) < 1e15)
                out << static_cast<long long>(v);
            else
                out << v;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace specbound
