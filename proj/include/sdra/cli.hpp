#pragma once

#include <chrono>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "suites.hpp"

namespace sdra {

inline nlohmann::json point_json(const Point& p) {
    nlohmann::json lam = nlohmann::json::array(), u = nlohmann::json::array();
    for (int i = 0; i < p.lambda.size(); ++i) lam.push_back(detail::cjson(p.lambda(i)));
    for (const auto& v : p.u) u.push_back(v ? detail::cjson(*v) : nlohmann::json(nullptr));
    return {{"lambda", lam}, {"u", u}};
}

inline nlohmann::json check_json(const ResidualReport& r, const std::string& suite) {
    nlohmann::json j{{"name", r.check_name},
                     {"suite", suite},
                     {"samples", r.samples},
                     {"max_residual", r.max_residual},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass},
                     {"worst_point", point_json(r.worst_point)}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline nlohmann::json report_json(const std::string& scenario, const std::string& suite,
                                  const std::vector<SuiteResult>& results, std::optional<double> runtime_ms) {
    nlohmann::json checks = nlohmann::json::array(), skipped = nlohmann::json::array();
    for (const auto& r : results) {
        if (!r.applicable) skipped.push_back({{"suite", r.suite}, {"reason", r.notice}});
        for (const auto& c : r.reports) checks.push_back(check_json(c, r.suite));
    }
    nlohmann::json j{{"scenario", scenario}, {"suite", suite}, {"pass", all_pass(results)}};
    j["runtime_ms"] = runtime_ms ? nlohmann::json(*runtime_ms) : nlohmann::json(nullptr);
    j["checks"] = checks;
    j["skipped"] = skipped;
    return j;
}

inline void write_report(const nlohmann::json& report, const std::string& path) {
    if (report["checks"].empty() && report["skipped"].empty()) throw Error("write_report: no reports");
    std::ofstream out(path);
    if (!out) throw Error("cannot write report to '" + path + "'");
    out << report.dump(2) << "\n";
    if (!out) throw Error("failed writing report to '" + path + "'");
}

inline void print_summary(std::ostream& os, const std::string& scenario, const std::vector<SuiteResult>& results) {
    os << "scenario: " << scenario << "\n";
    for (const auto& r : results) {
        if (!r.applicable) {
            os << "  skip  " << r.suite << ": " << r.notice << "\n";
            continue;
        }
        for (const auto& c : r.reports) {
            os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(28) << c.check_name
               << " max=" << std::scientific << std::setprecision(3) << c.max_residual << " tol=" << c.tolerance
               << " samples=" << std::defaultfloat << c.samples;
            if (!c.note.empty()) os << "  (" << c.note << ")";
            os << "\n";
        }
    }
    os << "overall: " << (all_pass(results) ? "PASS" : "FAIL") << "\n";
}

// Exit codes: 0 all checks pass, 1 some check failed, 2 usage or configuration error.
inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Residual verification of semi-dynamical reflection algebra data"};
    app.set_version_flag("--version", "sdra-verify 1.0");
    std::string scenario_path, builtin, report_path, format = "text";
    std::vector<std::string> suites;
    std::optional<int> samples, sites;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    bool list_builtins = false, list_suites = false, timing = false;
    auto* src = app.add_option("--scenario", scenario_path, "scenario file (JSON)");
    app.add_option("--builtin", builtin, "builtin scenario name")->excludes(src);
    app.add_option("--suite", suites, "suite to run (repeatable; 'all' runs every applicable suite)");
    app.add_option("--samples", samples, "number of sample points")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "sampler seed");
    app.add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--sites", sites, "number of chain sites N")->check(CLI::Range(1, 3));
    app.add_option("--report", report_path, "write a structured report to this path");
    app.add_option("--format", format, "stdout format")->check(CLI::IsMember({"text", "structured"}));
    app.add_flag("--list-builtins", list_builtins, "list builtin scenarios");
    app.add_flag("--list-suites", list_suites, "list suites");
    app.add_flag("--timing", timing, "record the runtime in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    if (list_builtins || list_suites) {
        if (list_builtins)
            for (const auto& n : builtin_names()) out << n << "\n";
        if (list_suites) {
            for (const auto& n : suite_names()) out << n << "\n";
            out << "all\n";
        }
        return 0;
    }
    if (scenario_path.empty() == builtin.empty()) {
        err << "error: exactly one of --scenario and --builtin is required\n";
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Model model;
    std::vector<std::string> requested;
    try {
        Scenario sc = builtin.empty() ? load_scenario(scenario_path) : builtin_scenario(builtin);
        if (sites) sc.sites = *sites;
        if (samples) sc.sampler.count = *samples;
        if (seed) sc.sampler.seed = *seed;
        if (tol) sc.tolerance = *tol;
        requested = !suites.empty() ? suites : (sc.suites.empty() ? std::vector<std::string>{"all"} : sc.suites);
        expand_suites(requested);
        model = instantiate(sc);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::vector<SuiteResult> results;
    try {
        results = run_suites(model, requested);
    } catch (const std::exception& e) {
        // sampling could not satisfy the configured constraints
        err << "error: " << e.what() << "\n";
        return 2;
    }
    std::optional<double> runtime;
    if (timing)
        runtime = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    std::string suite_label;
    for (const auto& s : requested) suite_label += (suite_label.empty() ? "" : ",") + s;
    nlohmann::json report = report_json(model.sc.name, suite_label, results, runtime);
    if (format == "structured") out << report.dump(2) << "\n";
    else print_summary(out, model.sc.name, results);
    if (!report_path.empty()) {
        try {
            write_report(report, report_path);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return all_pass(results) ? 0 : 1;
}

} // namespace sdra
