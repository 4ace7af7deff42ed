#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace qblab {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    bool exact_zero = false;  // structurally empty matrix, not a float comparison
};

struct RelationReport {
    std::vector<CheckResult> checks;

    void add(std::string name, double r, bool exact = false) {
        checks.push_back({std::move(name), r, exact});
    }
    void merge(const RelationReport& o) {
        checks.insert(checks.end(), o.checks.begin(), o.checks.end());
    }
    double max_residual() const {
        double m = 0.0;
        for (const auto& c : checks) m = std::max(m, c.residual);
        return m;
    }
};

}  // namespace qblab
