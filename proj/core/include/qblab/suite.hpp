#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>

#include "qblab/tq.hpp"

namespace qblab {

struct SuiteConfig {
    int profile_m = 2;
    int profile_n = 1;
    bool all_supported_sets = true;
    std::vector<std::vector<int>> index_sets;  // explicit request when not all_supported
    int q_samples = 3;
    double q_min_abs = 0.3;
    double q_max_abs = 0.7;
    std::uint64_t seed = 1;
    int cutoff = 6;
    int lattice_sites = 2;
    std::vector<cplx> xi;     // empty: sampled per case
    std::vector<cplx> twist;  // empty: random-convergent per case
    bool skip_unsupported = false;
    bool alt_spectral_shift = false;  // replace q by 1/q in the functional-relation shifts
    std::map<std::string, double> tol_overrides;
    std::vector<std::string> suites;  // empty means all

    static SuiteConfig parse(std::istream& in);
    static SuiteConfig parse_file(const std::string& path);
    void validate() const;  // throws on malformed or unsupported requests
};

struct CheckRecord {
    std::string suite;
    std::string check_id;
    std::string anchor;  // relation tag carried into the report
    std::string params;  // reproduction parameters
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double truncation_bound = 0.0;
    double wall_ms = 0.0;
};

struct SuiteReport {
    std::string schema = "qblab-report/1";
    std::uint64_t seed = 0;
    std::string config_echo;
    std::vector<CheckRecord> records;

    bool all_pass() const;
    std::string to_json(bool include_timing = true) const;
};

/// Used by the CLI to list suite names.
const std::vector<std::string>& suite_names();

struct CheckInfo {
    std::string id;
    std::string anchor;
    std::string statement;
    std::string tolerance_policy;
};

const std::vector<CheckInfo>& check_catalog();
std::optional<CheckInfo> explain_check(const std::string& id);

/// Runs the selected suites; deterministic for a fixed (config, seed).
/// Honors the SUITE_WORKERS environment variable for the pool size.
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace qblab
