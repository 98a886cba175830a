#pragma once

#include "shiftop.hpp"
#include "solutions.hpp"

namespace sdra {

// Everything the monodromy builders need. The factored form additionally uses the
// undressed pieces: beta = g b g^{-1}, the twist q, the cores Rq (inside A) and Rt (inside D),
// and kappa = beta K q^{-1}.
struct MonodromyInputs {
    StructureSet S;
    DynMat K, chi_t;
    DynMat beta, q, Rq, Rt, kappa;
};

inline Legs chain_legs(int N) {
    Legs l(2 * N + 1);
    std::iota(l.begin(), l.end(), 0);
    return l;
}

// Odd quantum legs strictly above a.
inline Legs odd_above(int a, int N) {
    Legs out;
    for (int x = 1; x < 2 * N; x += 2)
        if (x > a) out.push_back(x);
    return out;
}

inline NormalWord checked_order(const std::vector<WordItem>& items, const Automorphism& g, const char* what) {
    NormalWord w = normal_order(items, g);
    if (!w.pending.empty()) throw Error(std::string(what) + ": automorphism powers do not cancel");
    return w;
}

// chi_0 [g_0 A_{0,2N}(H) g_2N^{-1}] [g_0 C_{0,2N-1}(H)] ... K_0(H) D_01(H) [g_2 B_02(H)] ... g_0^{-2N} e^{D_0},
// H = sum of h over the odd legs above the site.
inline DynMat monodromy_direct_matrix(const MonodromyInputs& in, int N) {
    if (N < 1) throw Error("monodromy: need at least one site");
    const auto& S = in.S;
    std::vector<WordItem> w{WordItem::m(on(in.chi_t, {0}))};
    for (int a = 2 * N; a >= 1; --a) {
        w.push_back(WordItem::g(0, 1));
        if (a % 2 == 0) {
            w.push_back(WordItem::m(dyn_shift(on(S.A, {0, a}), odd_above(a, N))));
            w.push_back(WordItem::g(a, -1));
        } else {
            w.push_back(WordItem::m(dyn_shift(on(S.C, {0, a}), odd_above(a, N))));
        }
    }
    w.push_back(WordItem::m(dyn_shift(on(in.K, {0}), odd_above(0, N))));
    for (int a = 1; a <= 2 * N; ++a) {
        if (a % 2 == 1) {
            w.push_back(WordItem::m(dyn_shift(on(S.D, {0, a}), odd_above(a, N))));
        } else {
            w.push_back(WordItem::g(a, 1));
            w.push_back(WordItem::m(dyn_shift(on(S.B, {0, a}), odd_above(a, N))));
        }
    }
    w.push_back(WordItem::g(0, -2 * N));
    DynMat M = checked_order(w, S.g, "monodromy").matrix;
    return M.legs() == chain_legs(N) ? M : embed(M, M.legs(), chain_legs(N));
}

inline ShiftOpSum build_monodromy_direct(const MonodromyInputs& in, int N) {
    return with_weight_shift(monodromy_direct_matrix(in, N), 0, chain_legs(N));
}

// O_N = beta_2N(H) q_{2N-1}(H) ... beta_2(H) q_1(H) on the quantum legs.
inline DynMat build_ON(const DynMat& beta, const DynMat& q, int N) {
    if (N < 1) throw Error("build_ON: need at least one site");
    std::vector<DynMat> fs;
    for (int m = N; m >= 1; --m) {
        fs.push_back(dyn_shift(on(beta, {2 * m}), odd_above(2 * m, N)));
        fs.push_back(dyn_shift(on(q, {2 * m - 1}), odd_above(2 * m - 1, N)));
    }
    return product(fs);
}

// chi_0 beta_0^{-1} [g_0 Rq_{0,2N}] [g_0^2 Rq_{0,2N-2}] ... [g_0^2 Rq_02] [g_0 kappa_0] Rt_01 ... Rt_{0,2N-1} q_0 g_0^{-2N}
inline DynMat monodromy_core_matrix(const MonodromyInputs& in, int N) {
    if (N < 1) throw Error("monodromy: need at least one site");
    for (const DynMat* x : {&in.beta, &in.q, &in.Rq, &in.Rt, &in.kappa, &in.chi_t})
        if (!x->valid()) throw Error("factored monodromy: missing ingredient");
    std::vector<WordItem> w{WordItem::m(on(in.chi_t, {0})), WordItem::m(inverse(on(in.beta, {0})))};
    for (int a = 2 * N; a >= 2; a -= 2) {
        w.push_back(WordItem::g(0, a == 2 * N ? 1 : 2));
        w.push_back(WordItem::m(on(in.Rq, {0, a})));
    }
    w.push_back(WordItem::g(0, 1));
    w.push_back(WordItem::m(on(in.kappa, {0})));
    for (int a = 1; a < 2 * N; a += 2) w.push_back(WordItem::m(on(in.Rt, {0, a})));
    w.push_back(WordItem::m(on(in.q, {0})));
    w.push_back(WordItem::g(0, -2 * N));
    DynMat M = checked_order(w, in.S.g, "factored monodromy").matrix;
    return M.legs() == chain_legs(N) ? M : embed(M, M.legs(), chain_legs(N));
}

inline ShiftOpSum build_core_shiftop(const MonodromyInputs& in, int N) {
    return with_weight_shift(monodromy_core_matrix(in, N), 0, chain_legs(N));
}

// O_N^{-1} core e^{D_0} O_N
inline ShiftOpSum build_monodromy_factored(const MonodromyInputs& in, int N) {
    const Legs legs = chain_legs(N);
    const int n = in.S.scheme.rank;
    DynMat O = build_ON(in.beta, in.q, N);
    auto left = ShiftOpSum::single(inverse(O), zero_shift(n), legs);
    auto right = ShiftOpSum::single(O, zero_shift(n), legs);
    return shiftop_compose(shiftop_compose(left, build_core_shiftop(in, N)), right);
}

// Per-shift comparison of two operator sums.
inline ResidualReport compare_shiftops(std::string name, const ShiftOpSum& a, const ShiftOpSum& b,
                                       const std::vector<Point>& pts, double tol) {
    if (a.legs() != b.legs()) throw Error("compare_shiftops: leg sets differ");
    std::map<Shift, std::pair<DynMat, DynMat>> groups;
    for (const auto& [m, M] : a.terms()) groups[m].first = M;
    for (const auto& [m, M] : b.terms()) groups[m].second = M;
    const int d = ipow(a.scheme().rank, static_cast<int>(a.legs().size()));
    return check_points(std::move(name), pts, tol, [&](const Point& p) {
        double worst = 0.0;
        for (const auto& [m, pr] : groups) {
            Mat x = pr.first.valid() ? pr.first(p) : Mat::Zero(d, d);
            Mat y = pr.second.valid() ? pr.second(p) : Mat::Zero(d, d);
            worst = std::max(worst, relative_residual(x, y));
        }
        return worst;
    });
}

inline ShiftOpSum fix_spectral(const ShiftOpSum& T, int leg, cplx value) {
    ShiftOpSum out(T.scheme(), T.legs());
    for (const auto& [m, M] : T.terms()) out.add(fix_spectral(M, leg, value), m);
    return out;
}

// t(u) with the auxiliary spectral value frozen to u.
inline ShiftOpSum transfer_at(const ShiftOpSum& T, cplx u, const DynMat& twist = DynMat()) {
    return transfer_trace(fix_spectral(T, 0, u), twist);
}

// Checks every pair t(u_i), t(u_j). Ingredient reports are computed first and attached,
// so a failure can be traced to the violated hypothesis.
inline ResidualReport certify_commuting_family(const MonodromyInputs& in, int N, const std::vector<cplx>& u_list,
                                               const std::vector<Point>& pts, double tol,
                                               std::vector<ResidualReport> extra_ingredients = {},
                                               bool factored = false) {
    const auto& S = in.S;
    std::vector<ResidualReport> ingredients;
    ingredients.push_back(residual_zero_weight(S.B, WeightKind::B, pts, tol, "zero-weight-B"));
    ingredients.push_back(residual_zero_weight(S.C, WeightKind::C, pts, tol, "zero-weight-C"));
    ingredients.push_back(residual_zero_weight(S.D, WeightKind::D, pts, tol, "d-decomposition-zero-weight"));
    auto yb = S.g.is_identity() ? residual_ybce(S, pts, tol) : residual_gybce(S, pts, tol);
    ingredients.insert(ingredients.end(), yb.begin(), yb.end());
    ingredients.push_back(residual_sdre(S, in.K, pts, tol));
    for (auto& r : extra_ingredients) ingredients.push_back(std::move(r));

    ResidualReport out = make_report("transfer-commute", tol);
    std::vector<ResidualReport> pairs;
    if (u_list.size() >= 2) {
        ShiftOpSum T = factored ? build_monodromy_factored(in, N) : build_monodromy_direct(in, N);
        std::vector<ShiftOpSum> ts;
        for (cplx u : u_list) ts.push_back(transfer_at(T, u));
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = i + 1; j < ts.size(); ++j)
                pairs.push_back(shiftop_commutator(ts[i], ts[j], pts, tol,
                                                   "commutator-" + std::to_string(i) + "-" + std::to_string(j)));
    }
    if (pairs.empty()) {
        out.samples = static_cast<int>(pts.size());
        if (!pts.empty()) out.worst_point = pts.front();
    }
    for (const auto& r : pairs) {
        if (out.samples == 0 || r.max_residual > out.max_residual) {
            out.max_residual = r.max_residual;
            out.worst_point = r.worst_point;
        }
        out.samples = std::max(out.samples, r.samples);
    }
    out.pass = out.max_residual <= tol;
    std::string failed;
    for (const auto& r : ingredients)
        if (!r.pass) failed += (failed.empty() ? "" : ", ") + r.check_name;
    if (!failed.empty()) {
        out.pass = false;
        out.note = "precondition failed: " + failed;
    }
    out.details = ingredients;
    out.details.insert(out.details.end(), pairs.begin(), pairs.end());
    return out;
}

} // namespace sdra
