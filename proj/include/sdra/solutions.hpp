#pragma once

#include "parametrize.hpp"
#include "word.hpp"

namespace sdra {

// One decoration step: h^(power + sigma_sign * sigma/gamma) applied to Q by conjugation
// or one-sided multiplication.
struct Decoration {
    Automorphism h;
    int power = 1;
    int sigma_sign = 0;
    Side side = Side::Conjugate;
};

inline DynMat decorate(const DynMat& Q, const std::vector<Decoration>& deco) {
    DynMat X = Q;
    const cplx gamma = Q.scheme().gamma;
    for (const auto& d : deco) {
        if (d.h.is_identity()) continue;
        const double pw = d.power, sg = d.sigma_sign;
        X = detail::act(X, d.h, X.legs(), d.side,
                        [pw, sg, gamma](const Point& p) { return pw + sg * sigma_of(p.lambda) / gamma; });
    }
    return X;
}

// R_left Q_1 (left_deco Q)_2 = Q_2 (right_deco Q)_1 R_right
struct IntertwinerSpec {
    DynMat R_left, R_right;
    std::vector<Decoration> left_deco, right_deco;
};

inline IntertwinerSpec intertwiner_plain(const DynMat& R, const DynMat& Rt) { return {R, Rt, {}, {}}; }

// R Q_1 (a Q a^{-1})_2 = Q_2 (a Q a^{-1})_1 Rt
inline IntertwinerSpec intertwiner_quasi(const DynMat& R, const DynMat& Rt, const Automorphism& a) {
    std::vector<Decoration> d{{a, 1, 0, Side::Conjugate}};
    return {R, Rt, d, d};
}

// R0 Q_1 (g^{-1} Q g)_2 = Q_2 (g^{-1} Q g)_1 Rbar
inline IntertwinerSpec intertwiner_shift(const DynMat& R0, const DynMat& Rbar, const Automorphism& g) {
    std::vector<Decoration> d{{g, -1, 0, Side::Conjugate}};
    return {R0, Rbar, d, d};
}

// Decoration Ad(a^{-sigma} g^{-1} a^{sigma}) Ad(a) on the second factor.
inline IntertwinerSpec intertwiner_doubly_shifted(const DynMat& R0, const DynMat& Rbar, const Automorphism& g,
                                                  const Automorphism& a) {
    std::vector<Decoration> d{{a, 1, 0, Side::Conjugate},
                              {a, 0, 1, Side::Conjugate},
                              {g, -1, 0, Side::Conjugate},
                              {a, 0, -1, Side::Conjugate}};
    return {R0, Rbar, d, d};
}

// R Q_1 (Q f)_2 = Q_2 (Q f)_1 R0
inline IntertwinerSpec intertwiner_f(const DynMat& R, const DynMat& R0, const Automorphism& f) {
    std::vector<Decoration> d{{f, 1, 0, Side::Right}};
    return {R, R0, d, d};
}

// R0 Q_1 (g^{-1} Q f)_2 = Q_2 (g^{-1} Q f)_1 Rbar
inline IntertwinerSpec intertwiner_shift_f(const DynMat& R0, const DynMat& Rbar, const Automorphism& g,
                                           const Automorphism& f) {
    std::vector<Decoration> d{{g, -1, 0, Side::Left}, {f, 1, 0, Side::Right}};
    return {R0, Rbar, d, d};
}

// R0 Q_1 [(a^s g a^-s)^{-1} a^{-1} Q a (a^s f a^-s)]_2 = ..., s = sigma/gamma
inline IntertwinerSpec intertwiner_shift_f_a(const DynMat& R0, const DynMat& Rbar, const Automorphism& g,
                                             const Automorphism& a, const Automorphism& f) {
    std::vector<Decoration> d{{a, -1, 0, Side::Conjugate}, {a, 0, 1, Side::Left},  {g, -1, 0, Side::Left},
                              {a, 0, -1, Side::Left},      {a, 0, 1, Side::Right}, {f, 1, 0, Side::Right},
                              {a, 0, -1, Side::Right}};
    return {R0, Rbar, d, d};
}

// Dual relation Rt Q'_2 Q'_1 = Q'_1 Q'_2 R, written in the plain form on exchanged legs.
inline IntertwinerSpec intertwiner_dual(const DynMat& R, const DynMat& Rt) {
    return {pi_transpose(on(Rt, {1, 2})), pi_transpose(on(R, {1, 2})), {}, {}};
}

inline ResidualReport residual_intertwiner(const IntertwinerSpec& spec, const DynMat& Q, const std::vector<Point>& pts,
                                           double tol, std::string name = "intertwiner") {
    if (Q.legs().size() != 1) throw Error("intertwiner: Q must act on one leg");
    if (!residual_nondynamical(Q, pts, 1e-12).pass) throw Error("intertwiner: Q must not depend on lambda");
    DynMat Q1 = on(Q, {1}), Q2 = on(Q, {2});
    DynMat L = product({on(spec.R_left, {1, 2}), Q1, on(decorate(Q, spec.left_deco), {2})});
    DynMat R = product({Q2, on(decorate(Q, spec.right_deco), {1}), on(spec.R_right, {1, 2})});
    return check_equal(std::move(name), L, R, pts, tol);
}

inline ResidualReport residual_intertwiner(const IntertwinerSpec& spec, const Mat& Q, const std::vector<Point>& pts,
                                           double tol, std::string name = "intertwiner") {
    return residual_intertwiner(spec, constant(spec.R_left.scheme(), Q, {1}), pts, tol, std::move(name));
}

// Ad(a (x) a) R = R
inline ResidualReport residual_pair_invariance(const DynMat& R, const Automorphism& a, const std::vector<Point>& pts,
                                               double tol, std::string name = "pair-invariance") {
    return check_equal(std::move(name), adjoint_auto(R, a, R.legs(), Side::Conjugate, 1), R, pts, tol);
}

// K = b^{-1} Q q
inline DynMat build_K_nondyn(const DynMat& Q, const DynMat& b, const DynMat& q) {
    return product({inverse(on(b, {1})), on(Q, {1}), on(q, {1})});
}

inline DynMat build_K_nondyn(const Mat& Q, const DynMat& b, const DynMat& q) {
    return build_K_nondyn(constant(b.scheme(), Q, {1}), b, q);
}

// q~ = exp[sigma log a] Q exp[-sigma log a]
inline DynMat quasi_factor(const DynMat& Q, const Automorphism& a) { return adjoint_sigma(on(Q, {1}), a, {1}, +1); }

// q~(lambda + gamma e_i) = a q~(lambda) a^{-1} for every i
inline ResidualReport residual_quasi_factor(const DynMat& qt, const Automorphism& a, const std::vector<Point>& pts,
                                            double tol, std::string name = "quasi-factor") {
    DynMat target = adjoint_auto(qt, a, qt.legs(), Side::Conjugate, 1);
    const int n = qt.rank();
    const cplx gamma = qt.scheme().gamma;
    return check_points(std::move(name), pts, tol, [&](const Point& p) {
        Mat t = target(p);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) worst = std::max(worst, relative_residual(qt(p.shifted({i}, gamma)), t));
        return worst;
    });
}

// K = b^{-1} (exp[sigma log a] Q exp[-sigma log a]) q
inline DynMat build_K_quasinondyn(const DynMat& Q, const Automorphism& a, const DynMat& b, const DynMat& q) {
    if (a.kind() == AutoKind::Constant) (void)a.const_power(cplx(0.5, 0.0)); // rejects non-diagonalizable a
    return product({inverse(on(b, {1})), quasi_factor(Q, a), on(q, {1})});
}

enum class GVariant { Shifted, DoublyShifted, RightF, DoublyShiftedRightF };

// beta = g b g^{-1};  all variants share K = beta^{-1} (...) q
inline DynMat build_K_g(const DynMat& Q0, const Automorphism& g, const DynMat& b, const DynMat& q, GVariant variant,
                        const Automorphism& a = Automorphism::identity(),
                        const Automorphism& f = Automorphism::identity()) {
    const WeightScheme& s = b.scheme();
    DynMat beta_inv = adjoint_auto(inverse(on(b, {1})), g, {1}, Side::Conjugate, 1);
    DynMat Q = on(Q0, {1});
    auto f_sigma = [&] {
        if (f.kind() == AutoKind::SpectralShift)
            throw Error("exp[sigma log f] of a spectral shift is not a finite matrix; this case has no matrix form");
        return sigma_matrix(s, f, +1);
    };
    switch (variant) {
    case GVariant::Shifted:
        return product({beta_inv, adjoint_sigma(Q, g, {1}, -1), on(q, {1})});
    case GVariant::DoublyShifted:
        return product({beta_inv, adjoint_sigma(adjoint_sigma(Q, a, {1}, +1), g, {1}, -1), on(q, {1})});
    case GVariant::RightF:
        return product({beta_inv, sigma_matrix(s, g, -1), Q, f_sigma(), on(q, {1})});
    case GVariant::DoublyShiftedRightF:
        return product({beta_inv, sigma_matrix(s, g, -1), adjoint_sigma(Q, a, {1}, -1), f_sigma(), on(q, {1})});
    }
    throw Error("build_K_g: unknown variant");
}

enum class DressVariant { Plain, Shifted };

// plain: K = b^{-1} Q b K0;  shifted: K = beta^{-1} (Ad exp[-sigma log g] Q) beta K0
inline DynMat dress(const DynMat& K0, const DynMat& Q, const DynMat& b, const Automorphism& g, DressVariant v) {
    DynMat b1 = on(b, {1});
    if (v == DressVariant::Plain) return product({inverse(b1), on(Q, {1}), b1, on(K0, {1})});
    DynMat beta = adjoint_auto(b1, g, {1}, Side::Conjugate, 1);
    return product({inverse(beta), adjoint_sigma(on(Q, {1}), g, {1}, -1), beta, on(K0, {1})});
}

// Zero-weight conditions with respect to g: [D, g(x)g] = [B, g(x)1] = [C, 1(x)g] = [h, g] = 0.
inline std::vector<ResidualReport> residual_zwc(const StructureSet& S, const std::vector<Point>& pts, double tol) {
    const auto& g = S.g;
    std::vector<ResidualReport> out;
    out.push_back(check_equal("zwc-D", adjoint_auto(on(S.D, {1, 2}), g, {1, 2}, Side::Conjugate, 1), on(S.D, {1, 2}),
                              pts, tol));
    out.push_back(check_equal("zwc-B", adjoint_auto(on(S.B, {1, 2}), g, {1}, Side::Conjugate, 1), on(S.B, {1, 2}), pts,
                              tol));
    out.push_back(check_equal("zwc-C", adjoint_auto(on(S.C, {1, 2}), g, {2}, Side::Conjugate, 1), on(S.C, {1, 2}), pts,
                              tol));
    const int n = S.scheme.rank;
    out.push_back(check_points("zwc-h", pts, tol, [&](const Point& p) {
        if (g.kind() == AutoKind::Identity || g.kind() == AutoKind::SpectralShift) return 0.0;
        Mat G = g.kind() == AutoKind::Constant ? g.matrix() : g.at(p.get_u(1));
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            Mat e = elementary(n, i, i);
            worst = std::max(worst, relative_residual(e * G, G * e));
        }
        return worst;
    }));
    return out;
}

// K g^p; kept symbolic so that spectral shifts stay exact.
struct GPowerSolution {
    DynMat K;
    Automorphism g;
    int p = 0;
    std::vector<ResidualReport> zwc;

    // matrix form, available for matrix-valued g
    DynMat matrix() const {
        if (p == 0) return K;
        return adjoint_auto(on(K, {1}), g, {1}, Side::Right, p);
    }
};

inline GPowerSolution k_g_power(const DynMat& K, const StructureSet& S, int p, const std::vector<Point>& pts,
                                double tol) {
    GPowerSolution sol{K, S.g, p, residual_zwc(S, pts, tol)};
    for (const auto& r : sol.zwc)
        if (!r.pass)
            throw Error("k_g_power: zero-weight condition '" + r.check_name + "' violated (residual " +
                        std::to_string(r.max_residual) + ")");
    return sol;
}

// A_12 K_1 g_1^p B_12 K_2(h_1) g_2^p = K_2 g_2^p C_12 K_1(h_2) g_1^p D_12
inline ResidualReport residual_sdre_gpower(const StructureSet& S, const GPowerSolution& sol,
                                           const std::vector<Point>& pts, double tol,
                                           std::string name = "sdre-gpower") {
    DynMat K1 = on(sol.K, {1}), K2 = on(sol.K, {2});
    const int p = sol.p;
    auto lhs = normal_order({WordItem::m(on(S.A, {1, 2})), WordItem::m(K1), WordItem::g(1, p),
                             WordItem::m(on(S.B, {1, 2})), WordItem::m(dyn_shift(K2, {1})), WordItem::g(2, p)},
                            sol.g);
    auto rhs = normal_order({WordItem::m(K2), WordItem::g(2, p), WordItem::m(on(S.C, {1, 2})),
                             WordItem::m(dyn_shift(K1, {2})), WordItem::g(1, p), WordItem::m(on(S.D, {1, 2}))},
                            sol.g);
    if (lhs.pending != rhs.pending) throw Error("sdre-gpower: unbalanced automorphism powers");
    return check_equal(std::move(name), lhs.matrix, rhs.matrix, pts, tol);
}

// chi^t = q^{-1} (Ad exp[-sigma log g] Q') beta,  beta = g b g^{-1};  Q' = Q_L^{-1} when Q_L is invertible.
inline DynMat build_dual(const DynMat& q, const DynMat& b, const Automorphism& g, const DynMat& Qdual) {
    DynMat beta = adjoint_auto(on(b, {1}), g, {1}, Side::Conjugate, 1);
    return product({inverse(on(q, {1})), adjoint_sigma(on(Qdual, {1}), g, {1}, -1), beta});
}

inline DynMat build_dual_from_k(const DynMat& k, const DynMat& b, const Automorphism& g, const DynMat& Qdual) {
    DynMat beta = adjoint_auto(on(b, {1}), g, {1}, Side::Conjugate, 1);
    return build_dual(beta * on(k, {1}), b, g, Qdual);
}

// kappa = b K q^{-1}
inline DynMat kappa_of(const DynMat& K, const DynMat& b, const DynMat& q) {
    return product({on(b, {1}), on(K, {1}), inverse(on(q, {1}))});
}

// R kappa_1(lambda) kappa_2(lambda + gamma e_1) = kappa_2(lambda) kappa_1(lambda + gamma e_1) Rt
inline ResidualReport residual_reduced_intertwining(const DynMat& R, const DynMat& Rt, const DynMat& kappa,
                                                    const std::vector<Point>& pts, double tol,
                                                    std::string name = "reduced-intertwining") {
    DynMat k1 = on(kappa, {1}), k2 = on(kappa, {2});
    DynMat L = product({on(R, {1, 2}), k1, shifted_by(k2, {0})});
    DynMat Rr = product({k2, shifted_by(k1, {0}), on(Rt, {1, 2})});
    return check_equal(std::move(name), L, Rr, pts, tol);
}

} // namespace sdra
