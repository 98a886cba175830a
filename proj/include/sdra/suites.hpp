#pragma once

#include "scenario.hpp"

namespace sdra {

struct SuiteResult {
    std::string suite;
    bool applicable = true;
    std::string notice; // reason for skipping, or an error that stopped the suite
    std::vector<ResidualReport> reports;
};

struct RunOptions {
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

namespace detail {

inline ResidualReport failed_report(const std::string& name, double tol, const std::string& why) {
    ResidualReport r = make_report(name, tol);
    r.pass = false;
    r.max_residual = std::numeric_limits<double>::infinity();
    r.note = why;
    return r;
}

// Empty string when applicable, otherwise the reason.
inline std::string inapplicable(const Model& m, const std::string& suite) {
    const bool gid = m.g.is_identity();
    if (suite == "ybce" && !gid) return "the structure matrices are g-deformed; use gybce";
    if (suite == "gybce" && gid) return "g is the identity; gybce coincides with ybce";
    if (suite == "zwc" && gid) return "g is the identity; the zero-weight conditions for g are empty";
    if (suite == "monodromy-factor" && !m.sc.projectors.empty())
        return "projector-type B is not of the form b^{-1} b(h); the factored chain does not apply";
    return "";
}

inline std::vector<ResidualReport> run_one(const Model& m, const std::string& suite, const std::vector<Point>& pts,
                                           const std::function<std::vector<Point>()>& chain_pts, double tol) {
    const auto& S = m.S;
    std::vector<ResidualReport> out;
    if (suite == "zero-weight") {
        out.push_back(residual_zero_weight(S.B, WeightKind::B, pts, tol, "zero-weight-B"));
        out.push_back(residual_zero_weight(S.C, WeightKind::C, pts, tol, "zero-weight-C"));
        out.push_back(residual_zero_weight(S.D, WeightKind::D, pts, tol, "zero-weight-D"));
    } else if (suite == "ybce") {
        out = residual_ybce(S, pts, tol);
        if (!m.sc.projectors.empty())
            out.push_back(residual_projector_compat(m.R0, m.sc.projectors, m.b, pts, tol));
    } else if (suite == "gybce") {
        out = residual_gybce(S, pts, tol);
    } else if (suite == "dybe") {
        out.push_back(residual_dybe(S.D, pts, tol));
    } else if (suite == "sdre") {
        out.push_back(residual_sdre(S, m.K, pts, tol));
    } else if (suite == "intertwiner") {
        out.push_back(residual_intertwiner(m.right_spec, m.sc.q_r, pts, tol, "intertwiner-right"));
        out.push_back(residual_intertwiner(m.left_spec, m.Q_left_checked, pts, tol, "intertwiner-left"));
    } else if (suite == "detwist") {
        std::vector<Automorphism> cands;
        if (!m.g.is_identity()) cands.push_back(m.g);
        if (!m.f.is_identity()) cands.push_back(m.f);
        DetwistResult d = detwist(S.D, m.q, cands, pts, tol);
        ResidualReport r = d.nondyn;
        for (const auto& qr : d.quasi)
            if (qr.max_residual < r.max_residual) r = qr;
        r.check_name = "detwist";
        r.pass = d.verdicts.front() != "neither";
        std::string v;
        for (const auto& s : d.verdicts) v += (v.empty() ? "" : ", ") + s;
        r.note = "verdict: " + v;
        r.details.push_back(d.nondyn);
        r.details.insert(r.details.end(), d.quasi.begin(), d.quasi.end());
        out.push_back(r);
    } else if (suite == "theta-period") {
        out.push_back(residual_theta_period(m.kappa, pts, tol));
        if (m.g.is_identity() && m.f.is_identity())
            out.push_back(residual_reduced_intertwining(m.R0, m.Rbar, m.kappa, pts, tol));
    } else if (suite == "monodromy-factor") {
        auto cp = chain_pts();
        out.push_back(compare_shiftops("monodromy-factor", build_monodromy_direct(m.mono, m.sc.sites),
                                       build_monodromy_factored(m.mono, m.sc.sites), cp, tol));
    } else if (suite == "transfer-commute") {
        auto cp = chain_pts();
        std::vector<ResidualReport> extra{
            residual_intertwiner(m.right_spec, m.sc.q_r, pts, tol, "intertwiner-right"),
            residual_intertwiner(m.left_spec, m.Q_left_checked, pts, tol, "intertwiner-left")};
        out.push_back(certify_commuting_family(m.mono, m.sc.sites, m.sc.transfer_u, cp, tol, extra));
    } else if (suite == "zwc") {
        out = residual_zwc(S, pts, tol);
        bool ok = std::all_of(out.begin(), out.end(), [](const ResidualReport& r) { return r.pass; });
        for (int p = -2; p <= 2; ++p) {
            std::string name = "sdre-gpower-" + std::string(p < 0 ? "m" : "p") + std::to_string(std::abs(p));
            if (!ok) {
                out.push_back(failed_report(name, tol, "zero-weight conditions for g violated"));
                continue;
            }
            GPowerSolution sol{m.K, m.g, p, {}};
            out.push_back(residual_sdre_gpower(S, sol, pts, tol, name));
        }
    } else {
        throw Error("unknown suite '" + suite + "'");
    }
    return out;
}

} // namespace detail

inline std::vector<std::string> expand_suites(const std::vector<std::string>& requested) {
    std::vector<std::string> out;
    for (const auto& s : requested) {
        if (s == "all") {
            for (const auto& x : suite_names())
                if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        } else {
            if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
                throw Error("unknown suite '" + s + "'");
            if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
        }
    }
    return out;
}

inline std::vector<SuiteResult> run_suites(const Model& m, const std::vector<std::string>& requested,
                                           const RunOptions& opt = {}) {
    const double tol = opt.tol.value_or(m.sc.tolerance);
    std::vector<Point> pts = scenario_points(m, false, opt.samples, opt.seed);
    std::optional<std::vector<Point>> chain;
    auto chain_pts = [&]() {
        if (!chain) chain = scenario_points(m, true, opt.samples, opt.seed);
        return *chain;
    };
    std::vector<SuiteResult> out;
    for (const auto& s : expand_suites(requested)) {
        SuiteResult r{s, true, "", {}};
        std::string why = detail::inapplicable(m, s);
        if (!why.empty()) {
            r.applicable = false;
            r.notice = why;
        } else {
            try {
                r.reports = detail::run_one(m, s, pts, chain_pts, tol);
            } catch (const Error& e) {
                r.notice = e.what();
                r.reports.push_back(detail::failed_report(s, tol, e.what()));
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline bool all_pass(const std::vector<SuiteResult>& rs) {
    for (const auto& r : rs)
        for (const auto& c : r.reports)
            if (!c.pass) return false;
    return true;
}

} // namespace sdra
