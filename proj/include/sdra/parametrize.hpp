#pragma once

#include "consistency.hpp"

namespace sdra {

// b_i = b^{-1} b(lambda + gamma e_i)
inline std::vector<DynMat> build_b_family(const DynMat& b) {
    if (b.legs().size() != 1) throw Error("build_b_family: b must act on one leg");
    std::vector<DynMat> out;
    DynMat bi = inverse(b);
    for (int i = 0; i < b.rank(); ++i) out.push_back(bi * shifted_by(b, {i}));
    return out;
}

struct BCPair {
    DynMat B, C;
};

// B_12 = b_2^{-1} g_2 b_2(lambda + h_1) g_2^{-1},  C = B^pi
inline BCPair build_BC(const DynMat& b, const Automorphism& g = Automorphism::identity()) {
    DynMat b2 = on(b, {2});
    DynMat B = inverse(b2) * adjoint_auto(dyn_shift(b2, {1}), g, {2}, Side::Conjugate, 1);
    return {B, pi_transpose(B)};
}

// B = sum_i e_ii (x) P_i b^{-1} b(lambda + gamma e_i),  C = B^pi
inline BCPair build_BC_projector(const DynMat& b, const std::vector<Mat>& projs) {
    const int n = b.rank();
    if (static_cast<int>(projs.size()) != n) throw Error("build_BC_projector: need one projector per weight");
    for (std::size_t i = 0; i < projs.size(); ++i) {
        const Mat& P = projs[i];
        if ((P * P - P).norm() > 1e-12) throw Error("build_BC_projector: non-idempotent projector");
        for (std::size_t j = 0; j < i; ++j)
            if ((P * projs[j] - projs[j] * P).norm() > 1e-12)
                throw Error("build_BC_projector: projectors do not commute");
    }
    auto family = build_b_family(b);
    DynMat B;
    for (int i = 0; i < n; ++i) {
        DynMat term = product({constant(b.scheme(), elementary(n, i, i), {1}),
                               constant(b.scheme(), projs[i], {2}), on(family[i], {2})});
        B = B.valid() ? B + term : term;
    }
    return {B, pi_transpose(B)};
}

// A_12 = b_1^{-1} (g_2 b_2 g_2^{-1})^{-1} [Ad exp(-sigma(log g_1 + log g_2)) R0_12] b_2 (g_1 b_1 g_1^{-1})
inline DynMat build_A(const DynMat& R0, const DynMat& b, const Automorphism& g = Automorphism::identity()) {
    DynMat b1 = on(b, {1}), b2 = on(b, {2});
    DynMat beta1 = adjoint_auto(b1, g, {1}, Side::Conjugate, 1);
    DynMat beta2 = adjoint_auto(b2, g, {2}, Side::Conjugate, 1);
    DynMat Rq = adjoint_sigma(on(R0, {1, 2}), g, {1, 2}, -1);
    return product({inverse(b1), inverse(beta2), Rq, b2, beta1});
}

// D_12 = q_1^{-1}(lambda + h_2) q_2^{-1} Rt_12 q_1 q_2(lambda + h_1)
inline DynMat build_D_twist(const DynMat& Rt, const DynMat& q) {
    DynMat q1 = on(q, {1}), q2 = on(q, {2});
    return product({dyn_shift(inverse(q1), {2}), inverse(q2), on(Rt, {1, 2}), q1, dyn_shift(q2, {1})});
}

struct DetwistResult {
    DynMat Rt;
    ResidualReport nondyn;
    std::vector<ResidualReport> quasi; // one per candidate automorphism
    std::vector<std::string> verdicts; // every case that holds; "neither" if none
};

// Inverts the twist: Rt = (q_1^{-1}(h_2) q_2^{-1})^{-1} D (q_1 q_2(h_1))^{-1}.
inline DetwistResult detwist(const DynMat& D, const DynMat& q, const std::vector<Automorphism>& candidates,
                             const std::vector<Point>& pts, double tol) {
    DynMat q1 = on(q, {1}), q2 = on(q, {2});
    DynMat left = dyn_shift(inverse(q1), {2}) * inverse(q2);
    DynMat right = q1 * dyn_shift(q2, {1});
    DetwistResult r;
    r.Rt = product({inverse(left), on(D, {1, 2}), inverse(right)});
    r.nondyn = residual_nondynamical(r.Rt, pts, tol, "detwist-nondynamical");
    if (r.nondyn.pass) r.verdicts.push_back("non-dynamical");
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        r.quasi.push_back(residual_quasi_nondyn(r.Rt, candidates[k], pts, tol, "detwist-quasi-" + std::to_string(k)));
        if (r.quasi.back().pass) r.verdicts.push_back("quasi-non-dynamical:" + std::to_string(k));
    }
    if (r.verdicts.empty()) r.verdicts.push_back("neither");
    return r;
}

struct ExtractResult {
    DynMat R0;              // frozen at the reference point
    ResidualReport quasi;   // hypothesis on Rt
    ResidualReport nondyn;  // the undressed formula does not depend on lambda
    ResidualReport modified; // modified Yang-Baxter equation for R0
};

// R0 = Ad exp[+sigma(log f_1 + log f_2)] Rt
inline ExtractResult extract_R0(const DynMat& Rt, const Automorphism& f, const Vec& lamref,
                                const std::vector<Point>& pts, double tol) {
    ExtractResult r;
    r.quasi = residual_quasi_nondyn(Rt, f, pts, tol, "extract-quasi");
    if (!r.quasi.pass)
        throw Error("extract_R0: matrix is not quasi-non-dynamical (residual " + std::to_string(r.quasi.max_residual) +
                    ")");
    DynMat formula = adjoint_sigma(Rt, f, Rt.legs(), +1);
    r.nondyn = residual_nondynamical(formula, pts, tol, "extract-nondynamical");
    r.R0 = DynMat(
        Rt.scheme(), Rt.legs(),
        [formula, lamref](const Point& p) {
            Point q = p;
            q.lambda = lamref;
            return formula(q);
        },
        Rt.slots());
    r.modified = residual_modified_ybe(on(r.R0, {1, 2}), f, pts, tol);
    return r;
}

// Gauge-transformed matrices A~ = g_1 A g_2^{-1}, B~ = g_2 B, C~ = g_1 C, D~ = D.
// Only meaningful for matrix-valued g.
inline StructureSet gauge_tilde(const StructureSet& S) {
    StructureSet T = S;
    T.A = adjoint_auto(adjoint_auto(S.A, S.g, {1}, Side::Left, 1), S.g, {2}, Side::Right, -1);
    T.B = adjoint_auto(S.B, S.g, {2}, Side::Left, 1);
    T.C = adjoint_auto(S.C, S.g, {1}, Side::Left, 1);
    T.g = Automorphism::identity();
    return T;
}

// Structure matrices of the standard family from R0, Rbar, b and the twist q.
inline StructureSet build_structure(const DynMat& R0, const DynMat& Rbar, const DynMat& b, const DynMat& q,
                                    const Automorphism& g = Automorphism::identity()) {
    StructureSet S;
    S.scheme = b.scheme();
    S.g = g;
    S.A = build_A(R0, b, g);
    auto bc = build_BC(b, g);
    S.B = bc.B;
    S.C = bc.C;
    S.D = build_D_twist(adjoint_sigma(on(Rbar, {1, 2}), g, {1, 2}, -1), q);
    return S;
}

} // namespace sdra
