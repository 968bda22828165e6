#pragma once

#include <string>
#include <vector>

#include <json.hpp>

// Verification reports: one row per check with the expected and observed
// values, the tolerance it was held to, and the verdict.

namespace cpg {

struct CheckResult {
    std::string name;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline CheckResult make_check(std::string name, double expected, double observed,
                              double tolerance) {
    CheckResult c;
    c.name = std::move(name);
    c.expected = expected;
    c.observed = observed;
    c.tolerance = tolerance;
    c.pass = std::abs(observed - expected) <= tolerance;
    return c;
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

inline nlohmann::json to_json(const std::vector<CheckResult>& checks) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : checks)
        rows.push_back({{"name", c.name},
                        {"expected", c.expected},
                        {"observed", c.observed},
                        {"tolerance", c.tolerance},
                        {"pass", c.pass}});
    return nlohmann::json{{"checks", rows}, {"all_pass", all_pass(checks)}};
}

}  // namespace cpg
