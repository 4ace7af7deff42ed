#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qblab/suite.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Operator-relation verification suites for graded R/L/T/Q constructions"};
    app.require_subcommand(1);

    std::string config_path, json_path;
    std::uint64_t seed_override = 0;
    bool have_seed = false;

    auto* run = app.add_subcommand("run", "Run the configured suites and report results");
    run->add_option("--config", config_path, "Key-value configuration file")->required();
    auto* seed_opt = run->add_option("--seed", seed_override, "Override the configured seed");
    run->add_option("--json", json_path, "Write the JSON report to this path");

    std::string check_id;
    auto* explain = app.add_subcommand("explain", "Describe a check: relation tag, statement, tolerance policy");
    explain->add_option("check-id", check_id, "Check identifier (see the catalog)")->required();

    auto* list = app.add_subcommand("list", "List available suites and check identifiers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    have_seed = seed_opt->count() > 0;

    try {
        if (list->parsed()) {
            std::cout << "suites:\n";
            for (const auto& s : qblab::suite_names()) std::cout << "  " << s << "\n";
            std::cout << "checks:\n";
            for (const auto& c : qblab::check_catalog()) std::cout << "  " << c.id << "  [" << c.anchor << "]\n";
            return 0;
        }
        if (explain->parsed()) {
            const auto info = qblab::explain_check(check_id);
            if (!info) {
                std::cerr << "unknown check id: " << check_id << "\n";
                return 2;
            }
            std::cout << "check:     " << info->id << "\n"
                      << "anchor:    " << info->anchor << "\n"
                      << "statement: " << info->statement << "\n"
                      << "tolerance: " << info->tolerance_policy << "\n";
            return 0;
        }
        // run
        qblab::SuiteConfig cfg = qblab::SuiteConfig::parse_file(config_path);
        if (have_seed) cfg.seed = seed_override;
        const qblab::SuiteReport report = qblab::run_suite(cfg);
        if (!json_path.empty()) {
            std::ofstream out(json_path);
            out << report.to_json() << "\n";
        }
        int failed = 0;
        for (const auto& r : report.records) {
            if (!r.pass) {
                ++failed;
                std::cout << "FAIL " << r.suite << " :: " << r.check_id << "  residual=" << r.residual
                          << " tol=" << r.tolerance << "  (" << r.params << ")\n";
            }
        }
        std::cout << report.records.size() - static_cast<std::size_t>(failed) << "/" << report.records.size()
                  << " checks passed (seed " << cfg.seed << ")\n";
        return failed == 0 ? 0 : 1;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
