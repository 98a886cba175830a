#pragma once

#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "expr.hpp"
#include "monodromy.hpp"
#include "sampling.hpp"

namespace sdra {

using ExprRows = std::vector<std::vector<std::string>>;

struct AutoSpec {
    std::string kind = "identity"; // identity | constant | factorizable | spectral_shift
    Mat matrix;                    // constant
    ExprRows entries;              // factorizable, in u1
    cplx step = 0.0;               // spectral_shift
};

struct Scenario {
    std::string name;
    WeightScheme scheme;
    bool spectral = true;
    ExprRows b, q, k; // q or k may be empty; the other is derived
    Mat q_r, q_l;
    std::optional<Mat> q_dual; // solution of the dual relation when q_l is not usable
    AutoSpec g, a, f;
    ExprRows r0, rbar;
    std::vector<Mat> projectors;
    int sites = 1;
    std::vector<cplx> quantum_u;
    std::string quantum_preset = "random"; // random | locality
    std::vector<cplx> transfer_u;
    SamplerConfig sampler;
    double tolerance = 1e-9;
    std::vector<std::string> suites;
};

struct BuiltinOverrides {
    std::optional<int> rank;
    std::optional<int> sites;
};

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"trivial_yangian", "diagonal_dressed", "projector_b",
                                                "constant_g",      "spectral_shift_g", "nonsimilar_detwist"};
    return names;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"zero-weight",     "ybce",   "gybce",        "dybe",
                                                "sdre",            "intertwiner", "detwist", "theta-period",
                                                "monodromy-factor", "transfer-commute", "zwc"};
    return names;
}

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline ExprRows diag_rows(const std::vector<std::string>& d) {
    const int n = static_cast<int>(d.size());
    ExprRows r(n, std::vector<std::string>(n, "0"));
    for (int i = 0; i < n; ++i) r[i][i] = d[i];
    return r;
}

inline ExprRows identity_rows(int n) { return diag_rows(std::vector<std::string>(n, "1")); }

// I + P / (u1 - u2)
inline ExprRows yangian_rows(int n) {
    const int d = n * n;
    ExprRows r(d, std::vector<std::string>(d, "0"));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int row = i * n + j, col = j * n + i;
            if (row == col) r[row][col] = "1 + 1/(u1 - u2)";
            else r[row][col] = "1/(u1 - u2)";
            if (row != col) r[row][row] = "1";
        }
    return r;
}

// F21 R F12^{-1} with F12 = I + (t - 1) e11 (x) e22 (n = 2)
inline ExprRows nonsimilar_rows(double t) {
    ExprRows R = yangian_rows(2);
    std::vector<double> f12{1, t, 1, 1}, f21{1, 1, t, 1};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double s = f21[r] / f12[c];
            if (R[r][c] == "0" || s == 1.0) continue;
            R[r][c] = num(s) + "*(" + R[r][c] + ")";
        }
    return R;
}

inline Mat cmat(std::initializer_list<std::initializer_list<cplx>> rows) {
    Mat m(rows.size(), rows.begin()->size());
    int i = 0;
    for (auto& r : rows) {
        int j = 0;
        for (auto v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

// Generic constant matrices used by the dressed catalog entries.
inline Mat dressed_Q(int n, bool left) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = left ? (i == j ? cplx(2.0 - 0.5 * i) : cplx(0.1 * (i + 1) + 0.2 * j))
                           : (i == j ? cplx(i % 2 ? -1.0 : 1.0 + 0.5 * i) : cplx(0.5 + i, 0.25 * j));
    return m;
}

inline std::vector<std::string> dressed_b_diag(int n) {
    std::vector<std::string> d{"lambda1 + 2.5"};
    for (int i = 2; i <= n; ++i) d.push_back("exp(lambda" + std::to_string(i) + ")");
    return d;
}

inline std::vector<std::string> dressed_k_diag(int n) {
    std::vector<std::string> d{"exp(0.3*lambda1 + lambda2)"};
    for (int i = 2; i <= n; ++i) d.push_back(i == 2 ? "1" : "exp(lambda" + std::to_string(i) + " - lambda1)");
    return d;
}

} // namespace detail

inline Scenario builtin_scenario(const std::string& name, const BuiltinOverrides& ov = {}) {
    using namespace detail;
    Scenario s;
    s.name = name;
    const int n = ov.rank.value_or(2);
    auto rank2_only = [&] {
        if (n != 2) throw Error("builtin scenario '" + name + "' is defined for rank 2 only");
    };
    if (n < 2) throw Error("rank must be at least 2");
    s.scheme = WeightScheme(n, 1.0);
    s.r0 = s.rbar = yangian_rows(n);
    s.b = s.k = identity_rows(n);
    s.q_r = s.q_l = Mat::Identity(n, n);
    s.transfer_u = {cplx(0.3, 0.2), cplx(-0.7, 0.5), cplx(1.1, -0.4)};
    const std::vector<std::string> plain{"zero-weight", "ybce", "dybe", "sdre", "intertwiner", "detwist",
                                         "theta-period", "monodromy-factor", "transfer-commute"};
    const std::vector<std::string> gsuites{"zero-weight", "gybce", "dybe", "sdre", "intertwiner", "detwist",
                                           "theta-period", "monodromy-factor", "transfer-commute", "zwc"};
    if (name == "trivial_yangian") {
        s.suites = plain;
    } else if (name == "diagonal_dressed") {
        s.b = diag_rows(dressed_b_diag(n));
        s.k = diag_rows(dressed_k_diag(n));
        s.q_r = dressed_Q(n, false);
        s.q_l = dressed_Q(n, true);
        s.suites = plain;
    } else if (name == "projector_b") {
        rank2_only();
        s.b = diag_rows(dressed_b_diag(n));
        s.k = diag_rows(dressed_k_diag(n));
        s.q_r = cmat({{2.0, 0.0}, {0.0, 3.0}});
        s.q_l = cmat({{1.5, 0.0}, {0.0, 0.5}});
        for (int i = 0; i < n; ++i) s.projectors.push_back(s.scheme.projector(i));
        s.suites = {"zero-weight", "ybce", "dybe", "sdre", "intertwiner", "detwist", "theta-period",
                    "transfer-commute"};
    } else if (name == "constant_g") {
        rank2_only();
        s.g.kind = "constant";
        s.g.matrix = cmat({{2.0, 0.0}, {0.0, 1.0}});
        s.b = {{"lambda1 + 2.5", "0.3"}, {"0.2", "exp(lambda2)"}};
        s.k.clear();
        s.q = diag_rows({"exp(0.3*lambda1 + lambda2)*(lambda1 + 2.5)", "exp(lambda2)"});
        s.q_r = cmat({{1.5, 0.0}, {0.0, -0.5}});
        s.q_l = cmat({{2.0, 0.0}, {0.0, 0.7}});
        s.suites = gsuites;
    } else if (name == "spectral_shift_g") {
        rank2_only();
        s.g.kind = "spectral_shift";
        s.g.step = 1.0;
        s.b = diag_rows({"exp(lambda1 + 0.3*u1)", "exp(lambda2 + 0.1*u1^2)"});
        s.k.clear();
        s.q = diag_rows({"exp(0.3*lambda1 + lambda2)*(lambda1 + 2.5)", "exp(lambda2)"});
        s.q_r = cmat({{1.5, 0.4}, {0.3, -0.5}});
        s.q_l = cmat({{2.0, 0.0}, {0.0, 0.7}});
        s.quantum_preset = "locality";
        s.suites = gsuites;
    } else if (name == "nonsimilar_detwist") {
        rank2_only();
        s.rbar = nonsimilar_rows(2.0);
        s.b = diag_rows(dressed_b_diag(n));
        s.k = diag_rows(dressed_k_diag(n));
        s.q_r = cmat({{1.0, 0.0}, {0.0, 0.0}});
        s.q_l = cmat({{1.0, 0.0}, {0.0, 0.0}});
        s.q_dual = cmat({{1.0, 0.0}, {0.0, 0.0}});
        s.suites = plain;
    } else {
        std::string all;
        for (const auto& nm : builtin_names()) all += (all.empty() ? "" : ", ") + nm;
        throw Error("unknown builtin scenario '" + name + "'; available: " + all);
    }
    if (ov.sites) s.sites = *ov.sites;
    return s;
}

// ---- instantiated scenario ----

inline Automorphism make_automorphism(const AutoSpec& a, const WeightScheme& s) {
    if (a.kind == "identity") return Automorphism::identity();
    if (a.kind == "constant") {
        if (a.matrix.rows() != s.rank || a.matrix.cols() != s.rank) throw Error("automorphism matrix has wrong size");
        return Automorphism::constant(a.matrix);
    }
    if (a.kind == "spectral_shift") return Automorphism::spectral_shift(a.step);
    if (a.kind == "factorizable") {
        ExprMatrix em = parse_expr_matrix(a.entries, s.rank);
        if (em.k != 1) throw Error("factorizable automorphism must be an n x n matrix");
        DynMat X = expr_dynmat(em, s);
        return Automorphism::factorizable([X, n = s.rank](cplx u) {
            Point p(Vec::Zero(n));
            p.set_u(1, u);
            return X(p);
        });
    }
    throw Error("unknown automorphism kind '" + a.kind + "'");
}

struct Model {
    Scenario sc;
    WeightScheme s;
    Automorphism g, a, f;
    DynMat b, q, k, beta, R0, Rbar, Rq, Rt;
    StructureSet S;
    DynMat K, chi_t, kappa;
    IntertwinerSpec right_spec, left_spec;
    DynMat Q_left_checked; // the matrix that must satisfy left_spec
    MonodromyInputs mono;
};

inline void validate(const Scenario& sc) {
    if (sc.scheme.rank < 2) throw Error("rank must be at least 2");
    if (sc.scheme.gamma == cplx(0.0)) throw Error("gamma must be non-zero");
    if (!(sc.tolerance > 0.0)) throw Error("tolerance must be positive");
    if (sc.sites < 1) throw Error("sites must be at least 1");
    if (sc.b.empty()) throw Error("b is required");
    if (sc.q.empty() && sc.k.empty()) throw Error("one of q and k is required");
    const int n = sc.scheme.rank;
    auto sq = [n](const Mat& m, const char* what) {
        if (m.rows() != n || m.cols() != n) throw Error(std::string(what) + " must be " + std::to_string(n) + "x" + std::to_string(n));
    };
    sq(sc.q_r, "q_r");
    sq(sc.q_l, "q_l");
    if (sc.q_dual) sq(*sc.q_dual, "q_dual");
    for (const auto& P : sc.projectors) sq(P, "projector");
    if (!sc.projectors.empty() && static_cast<int>(sc.projectors.size()) != n)
        throw Error("need one projector per weight");
    if (sc.quantum_preset != "random" && sc.quantum_preset != "locality")
        throw Error("quantum_preset must be 'random' or 'locality'");
    if (!sc.quantum_u.empty() && static_cast<int>(sc.quantum_u.size()) != 2 * sc.sites)
        throw Error("quantum_u needs one value per quantum leg");
    for (const auto& sn : sc.suites)
        if (sn != "all" && std::find(suite_names().begin(), suite_names().end(), sn) == suite_names().end())
            throw Error("unknown suite '" + sn + "'");
}

inline DynMat expr_of(const ExprRows& rows, const WeightScheme& s, int legs, const char* what) {
    ExprMatrix em = parse_expr_matrix(rows, s.rank);
    if (em.k != legs) throw Error(std::string(what) + " must act on " + std::to_string(legs) + " leg(s)");
    return expr_dynmat(em, s);
}

inline Model instantiate(const Scenario& sc) {
    validate(sc);
    Model m;
    m.sc = sc;
    m.s = sc.scheme;
    const auto& s = m.s;
    m.g = make_automorphism(sc.g, s);
    m.a = make_automorphism(sc.a, s);
    m.f = make_automorphism(sc.f, s);
    m.b = expr_of(sc.b, s, 1, "b");
    m.beta = adjoint_auto(m.b, m.g, {1}, Side::Conjugate, 1);
    if (!sc.q.empty()) {
        m.q = expr_of(sc.q, s, 1, "q");
        m.k = sc.k.empty() ? inverse(m.beta) * m.q : expr_of(sc.k, s, 1, "k");
    } else {
        m.k = expr_of(sc.k, s, 1, "k");
        m.q = m.beta * m.k;
    }
    m.R0 = expr_of(sc.r0, s, 2, "r0");
    m.Rbar = expr_of(sc.rbar, s, 2, "rbar");
    m.Rq = adjoint_sigma(m.R0, m.g, {1, 2}, -1);
    m.Rt = m.f.is_identity() ? adjoint_sigma(m.Rbar, m.g, {1, 2}, -1) : adjoint_sigma(m.Rbar, m.f, {1, 2}, -1);

    m.S.scheme = s;
    m.S.g = m.g;
    m.S.A = build_A(m.R0, m.b, m.g);
    BCPair bc = sc.projectors.empty() ? build_BC(m.b, m.g) : build_BC_projector(m.b, sc.projectors);
    if (!sc.projectors.empty() && !m.g.is_identity()) throw Error("projector families need g = identity");
    m.S.B = bc.B;
    m.S.C = bc.C;
    m.S.D = build_D_twist(m.Rt, m.q);

    DynMat Qr = constant(s, sc.q_r, {1});
    const bool has_g = !m.g.is_identity(), has_a = !m.a.is_identity(), has_f = !m.f.is_identity();
    if (!has_g && !has_f) {
        m.K = has_a ? build_K_quasinondyn(Qr, m.a, m.b, m.q) : build_K_nondyn(Qr, m.b, m.q);
        m.right_spec = has_a ? intertwiner_quasi(m.R0, m.Rbar, m.a) : intertwiner_plain(m.R0, m.Rbar);
    } else if (!has_f) {
        m.K = build_K_g(Qr, m.g, m.b, m.q, has_a ? GVariant::DoublyShifted : GVariant::Shifted, m.a);
        m.right_spec = has_a ? intertwiner_doubly_shifted(m.R0, m.Rbar, m.g, m.a) : intertwiner_shift(m.R0, m.Rbar, m.g);
    } else {
        m.K = build_K_g(Qr, m.g, m.b, m.q, has_a ? GVariant::DoublyShiftedRightF : GVariant::RightF, m.a, m.f);
        m.right_spec = has_a ? intertwiner_shift_f_a(m.R0, m.Rbar, m.g, m.a, m.f)
                             : (has_g ? intertwiner_shift_f(m.R0, m.Rbar, m.g, m.f) : intertwiner_f(m.R0, m.Rbar, m.f));
    }
    if (sc.q_dual) {
        m.Q_left_checked = constant(s, *sc.q_dual, {1});
        m.left_spec = intertwiner_dual(m.R0, m.Rbar);
        m.chi_t = build_dual(m.q, m.b, m.g, m.Q_left_checked);
    } else {
        m.Q_left_checked = constant(s, sc.q_l, {1});
        m.left_spec = m.g.is_identity() ? intertwiner_plain(m.R0, m.Rbar) : intertwiner_shift(m.R0, m.Rbar, m.g);
        Eigen::FullPivLU<Mat> lu(sc.q_l);
        if (!lu.isInvertible()) throw Error("q_l is not invertible; supply q_dual instead");
        m.chi_t = build_dual(m.q, m.b, m.g, constant(s, Mat(lu.inverse()), {1}));
    }
    m.kappa = product({m.beta, m.K, inverse(m.q)});
    m.mono = MonodromyInputs{m.S, m.K, m.chi_t, m.beta, m.q, m.Rq, m.Rt, m.kappa};
    return m;
}

// Points for the algebraic checks (legs 0..3) or for the chain checks (legs 0..2N with the
// quantum spectral values fixed as configured).
inline std::vector<Point> scenario_points(const Model& m, bool chain, std::optional<int> count = std::nullopt,
                                          std::optional<std::uint64_t> seed = std::nullopt) {
    SamplerConfig cfg = m.sc.sampler;
    if (count) cfg.count = *count;
    if (seed) cfg.seed = *seed;
    const int n = m.s.rank;
    std::vector<DynMat> poles{m.R0, m.Rbar};
    for (const DynMat* x : {&m.b, &m.q, &m.k}) {
        poles.push_back(*x);
        for (int i = 0; i < n; ++i) {
            poles.push_back(shifted_by(*x, {i}));
            for (int j = i; j < n; ++j) poles.push_back(shifted_by(*x, {i, j}));
        }
    }
    const int N = m.sc.sites;
    std::map<int, cplx> fixed;
    if (chain) {
        if (!m.sc.quantum_u.empty()) {
            for (int l = 1; l <= 2 * N; ++l) fixed[l] = m.sc.quantum_u[l - 1];
        } else if (m.sc.quantum_preset == "locality") {
            for (int j = 1; j <= N; ++j) {
                fixed[2 * j] = cplx(2 * N - 2 * j + 1);
                fixed[2 * j - 1] = cplx(2 * N) + cplx(0.0, 0.5 * j);
            }
        }
    }
    return sample_points(cfg, m.s, chain ? std::max(2 * N, 3) : 3, poles, fixed);
}

// ---- JSON ----

namespace detail {

using json = nlohmann::json;

inline json cjson(cplx v) { return json::array({v.real(), v.imag()}); }

inline json mjson(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < m.cols(); ++j) r.push_back(cjson(m(i, j)));
        rows.push_back(r);
    }
    return rows;
}

struct Reader {
    std::string path;

    [[noreturn]] void fail(const std::string& what) const { throw Error("scenario field '" + path + "': " + what); }
    Reader at(const std::string& key) const { return Reader{path.empty() ? key : path + "." + key}; }
    Reader at(std::size_t i) const { return Reader{path + "[" + std::to_string(i) + "]"}; }

    void fields(const json& j, const std::vector<std::string>& allowed) const {
        if (!j.is_object()) fail("expected an object");
        for (auto it = j.begin(); it != j.end(); ++it)
            if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
                throw Error("scenario field '" + at(it.key()).path + "': unknown field");
    }
    double num(const json& j) const {
        if (!j.is_number()) fail("expected a number");
        return j.get<double>();
    }
    int integer(const json& j) const {
        if (!j.is_number_integer()) fail("expected an integer");
        return j.get<int>();
    }
    std::string str(const json& j) const {
        if (!j.is_string()) fail("expected a string");
        return j.get<std::string>();
    }
    bool boolean(const json& j) const {
        if (!j.is_boolean()) fail("expected true or false");
        return j.get<bool>();
    }
    cplx complex(const json& j) const {
        if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
            fail("expected a complex number [re, im]");
        return {j[0].get<double>(), j[1].get<double>()};
    }
    Mat matrix(const json& j) const {
        if (!j.is_array() || j.empty()) fail("expected a non-empty matrix");
        const std::size_t r = j.size();
        Mat m(r, r);
        for (std::size_t i = 0; i < r; ++i) {
            if (!j[i].is_array() || j[i].size() != r) at(i).fail("expected a row of length " + std::to_string(r));
            for (std::size_t c = 0; c < r; ++c) m(i, c) = at(i).at(c).complex(j[i][c]);
        }
        return m;
    }
    ExprRows exprs(const json& j) const {
        if (!j.is_array() || j.empty()) fail("expected a non-empty matrix of expressions");
        ExprRows rows;
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_array() || j[i].size() != j.size()) at(i).fail("expected a row of length " + std::to_string(j.size()));
            std::vector<std::string> row;
            for (std::size_t c = 0; c < j[i].size(); ++c) {
                std::string src = at(i).at(c).str(j[i][c]);
                try {
                    parse_expr(src);
                } catch (const ParseError& e) {
                    at(i).at(c).fail(std::string("bad expression: ") + e.what());
                }
                row.push_back(src);
            }
            rows.push_back(std::move(row));
        }
        return rows;
    }
    std::vector<cplx> complexes(const json& j) const {
        if (!j.is_array()) fail("expected an array of complex numbers");
        std::vector<cplx> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(at(i).complex(j[i]));
        return out;
    }
    AutoSpec automorphism(const json& j) const {
        fields(j, {"kind", "matrix", "entries", "step"});
        if (!j.contains("kind")) at("kind").fail("missing field");
        AutoSpec a;
        a.kind = at("kind").str(j["kind"]);
        if (a.kind == "identity") {
        } else if (a.kind == "constant") {
            if (!j.contains("matrix")) at("matrix").fail("missing field");
            a.matrix = at("matrix").matrix(j["matrix"]);
        } else if (a.kind == "factorizable") {
            if (!j.contains("entries")) at("entries").fail("missing field");
            a.entries = at("entries").exprs(j["entries"]);
        } else if (a.kind == "spectral_shift") {
            if (!j.contains("step")) at("step").fail("missing field");
            a.step = at("step").complex(j["step"]);
        } else {
            at("kind").fail("unknown automorphism kind '" + a.kind + "'");
        }
        return a;
    }
};

inline json auto_json(const AutoSpec& a) {
    json j{{"kind", a.kind}};
    if (a.kind == "constant") j["matrix"] = mjson(a.matrix);
    if (a.kind == "factorizable") j["entries"] = a.entries;
    if (a.kind == "spectral_shift") j["step"] = cjson(a.step);
    return j;
}

} // namespace detail

inline nlohmann::json scenario_to_json(const Scenario& s) {
    using detail::cjson;
    using detail::mjson;
    nlohmann::json j;
    j["name"] = s.name;
    j["scheme"] = {{"rank", s.scheme.rank}, {"gamma", cjson(s.scheme.gamma)}};
    j["spectral"] = s.spectral;
    j["b"] = s.b;
    if (!s.q.empty()) j["q"] = s.q;
    if (!s.k.empty()) j["k"] = s.k;
    j["q_r"] = mjson(s.q_r);
    j["q_l"] = mjson(s.q_l);
    if (s.q_dual) j["q_dual"] = mjson(*s.q_dual);
    j["g"] = detail::auto_json(s.g);
    j["a"] = detail::auto_json(s.a);
    j["f"] = detail::auto_json(s.f);
    j["r0"] = s.r0;
    j["rbar"] = s.rbar;
    if (!s.projectors.empty()) {
        j["projectors"] = nlohmann::json::array();
        for (const auto& P : s.projectors) j["projectors"].push_back(mjson(P));
    }
    j["sites"] = s.sites;
    if (!s.quantum_u.empty()) {
        j["quantum_u"] = nlohmann::json::array();
        for (auto v : s.quantum_u) j["quantum_u"].push_back(cjson(v));
    }
    j["quantum_preset"] = s.quantum_preset;
    j["transfer_u"] = nlohmann::json::array();
    for (auto v : s.transfer_u) j["transfer_u"].push_back(cjson(v));
    j["sampler"] = {{"seed", s.sampler.seed},
                    {"count", s.sampler.count},
                    {"box_re", s.sampler.box_re},
                    {"box_im", s.sampler.box_im},
                    {"min_separation", s.sampler.min_separation},
                    {"retry_cap", s.sampler.retry_cap}};
    j["tolerance"] = s.tolerance;
    j["suites"] = s.suites;
    return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    detail::Reader rd{""};
    rd.fields(j, {"name", "scheme", "spectral", "b", "q", "k", "q_r", "q_l", "q_dual", "g", "a", "f", "r0", "rbar",
                  "projectors", "sites", "quantum_u", "quantum_preset", "transfer_u", "sampler", "tolerance",
                  "suites"});
    for (const char* req : {"name", "scheme", "b", "q_r", "q_l", "r0", "rbar"})
        if (!j.contains(req)) rd.at(req).fail("missing field");
    Scenario s;
    s.name = rd.at("name").str(j["name"]);
    {
        auto r = rd.at("scheme");
        r.fields(j["scheme"], {"rank", "gamma"});
        if (!j["scheme"].contains("rank")) r.at("rank").fail("missing field");
        int rank = r.at("rank").integer(j["scheme"]["rank"]);
        cplx gamma = j["scheme"].contains("gamma") ? r.at("gamma").complex(j["scheme"]["gamma"]) : cplx(1.0);
        if (rank < 2) r.at("rank").fail("rank must be at least 2");
        if (gamma == cplx(0.0)) r.at("gamma").fail("gamma must be non-zero");
        s.scheme = WeightScheme(rank, gamma);
    }
    if (j.contains("spectral")) s.spectral = rd.at("spectral").boolean(j["spectral"]);
    s.b = rd.at("b").exprs(j["b"]);
    if (j.contains("q")) s.q = rd.at("q").exprs(j["q"]);
    if (j.contains("k")) s.k = rd.at("k").exprs(j["k"]);
    s.q_r = rd.at("q_r").matrix(j["q_r"]);
    s.q_l = rd.at("q_l").matrix(j["q_l"]);
    if (j.contains("q_dual")) s.q_dual = rd.at("q_dual").matrix(j["q_dual"]);
    for (const char* key : {"g", "a", "f"})
        if (j.contains(key)) {
            AutoSpec a = rd.at(key).automorphism(j[key]);
            (key[0] == 'g' ? s.g : key[0] == 'a' ? s.a : s.f) = a;
        }
    s.r0 = rd.at("r0").exprs(j["r0"]);
    s.rbar = rd.at("rbar").exprs(j["rbar"]);
    if (j.contains("projectors")) {
        auto r = rd.at("projectors");
        if (!j["projectors"].is_array()) r.fail("expected an array of matrices");
        for (std::size_t i = 0; i < j["projectors"].size(); ++i) s.projectors.push_back(r.at(i).matrix(j["projectors"][i]));
    }
    if (j.contains("sites")) s.sites = rd.at("sites").integer(j["sites"]);
    if (j.contains("quantum_u")) s.quantum_u = rd.at("quantum_u").complexes(j["quantum_u"]);
    if (j.contains("quantum_preset")) s.quantum_preset = rd.at("quantum_preset").str(j["quantum_preset"]);
    if (j.contains("transfer_u")) s.transfer_u = rd.at("transfer_u").complexes(j["transfer_u"]);
    if (j.contains("sampler")) {
        auto r = rd.at("sampler");
        const auto& js = j["sampler"];
        r.fields(js, {"seed", "count", "box_re", "box_im", "min_separation", "retry_cap"});
        if (js.contains("seed")) {
            if (!js["seed"].is_number_unsigned() && !js["seed"].is_number_integer()) r.at("seed").fail("expected an integer");
            s.sampler.seed = js["seed"].get<std::uint64_t>();
        }
        if (js.contains("count")) s.sampler.count = r.at("count").integer(js["count"]);
        if (js.contains("box_re")) s.sampler.box_re = r.at("box_re").num(js["box_re"]);
        if (js.contains("box_im")) s.sampler.box_im = r.at("box_im").num(js["box_im"]);
        if (js.contains("min_separation")) s.sampler.min_separation = r.at("min_separation").num(js["min_separation"]);
        if (js.contains("retry_cap")) s.sampler.retry_cap = r.at("retry_cap").integer(js["retry_cap"]);
    }
    if (j.contains("tolerance")) s.tolerance = rd.at("tolerance").num(j["tolerance"]);
    if (j.contains("suites")) {
        auto r = rd.at("suites");
        if (!j["suites"].is_array()) r.fail("expected an array of suite names");
        for (std::size_t i = 0; i < j["suites"].size(); ++i) s.suites.push_back(r.at(i).str(j["suites"][i]));
    }
    validate(s);
    return s;
}

inline bool same_scenario(const Scenario& a, const Scenario& b) {
    return scenario_to_json(a).dump() == scenario_to_json(b).dump();
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("scenario file '" + path + "' is not valid JSON: " + e.what());
    }
    return scenario_from_json(j);
}

inline void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write scenario file '" + path + "'");
    out << scenario_to_json(s).dump(2) << "\n";
}

} // namespace sdra
