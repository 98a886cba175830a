#pragma once

#include "automorphism.hpp"
#include "residual.hpp"

namespace sdra {

inline DynMat on(const DynMat& X, const Legs& legs) { return relabel(X, legs); }

// A, B, C, D are given on legs (1,2).
struct StructureSet {
    DynMat A, B, C, D;
    WeightScheme scheme;
    Automorphism g = Automorphism::identity();
};

enum class WeightKind { B, C, D };

inline ResidualReport residual_zero_weight(const DynMat& X, WeightKind kind, const std::vector<Point>& pts,
                                           double tol, std::string name = "zero-weight") {
    if (X.legs().size() != 2) throw Error("zero-weight check needs a 2-leg matrix");
    const int n = X.rank();
    const Mat I = Mat::Identity(n, n);
    std::vector<Mat> H;
    for (int i = 0; i < n; ++i) {
        Mat e = elementary(n, i, i);
        switch (kind) {
        case WeightKind::B: H.push_back(Eigen::kroneckerProduct(e, I)); break;
        case WeightKind::C: H.push_back(Eigen::kroneckerProduct(I, e)); break;
        case WeightKind::D: H.push_back(Mat(Eigen::kroneckerProduct(e, I)) + Mat(Eigen::kroneckerProduct(I, e))); break;
        }
    }
    return check_points(std::move(name), pts, tol, [&](const Point& p) {
        Mat M = X(p);
        double worst = 0.0;
        for (const auto& h : H) worst = std::max(worst, relative_residual(h * M, M * h));
        return worst;
    });
}

inline ResidualReport residual_dybe(const DynMat& D, const std::vector<Point>& pts, double tol,
                                    std::string name = "dybe") {
    DynMat L = product({dyn_shift(on(D, {1, 2}), {3}), on(D, {1, 3}), dyn_shift(on(D, {2, 3}), {1})});
    DynMat R = product({on(D, {2, 3}), dyn_shift(on(D, {1, 3}), {2}), on(D, {1, 2})});
    return check_equal(std::move(name), L, R, pts, tol);
}

inline std::vector<ResidualReport> residual_ybce(const StructureSet& S, const std::vector<Point>& pts, double tol) {
    const auto &A = S.A, &B = S.B, &C = S.C, &D = S.D;
    std::vector<ResidualReport> out;
    out.push_back(check_equal("ybce-a", product({on(A, {1, 2}), on(A, {1, 3}), on(A, {2, 3})}),
                              product({on(A, {2, 3}), on(A, {1, 3}), on(A, {1, 2})}), pts, tol));
    out.push_back(check_equal("ybce-b", product({on(A, {1, 2}), on(C, {1, 3}), on(C, {2, 3})}),
                              product({on(C, {2, 3}), on(C, {1, 3}), dyn_shift(on(A, {1, 2}), {3})}), pts, tol));
    out.push_back(check_equal("ybce-c", product({on(D, {1, 2}), on(B, {1, 3}), dyn_shift(on(B, {2, 3}), {1})}),
                              product({on(B, {2, 3}), dyn_shift(on(B, {1, 3}), {2}), on(D, {1, 2})}), pts, tol));
    out.push_back(residual_dybe(D, pts, tol, "ybce-d"));
    return out;
}

inline std::vector<ResidualReport> residual_gybce(const StructureSet& S, const std::vector<Point>& pts, double tol) {
    const auto &A = S.A, &B = S.B, &C = S.C, &D = S.D;
    const auto& g = S.g;
    auto ad = [&](const DynMat& X, const Legs& legs) { return adjoint_auto(X, g, legs, Side::Conjugate, 1); };
    std::vector<ResidualReport> out;
    out.push_back(check_equal("gybce-a", product({on(A, {1, 2}), ad(on(A, {1, 3}), {1, 3}), on(A, {2, 3})}),
                              product({ad(on(A, {2, 3}), {2, 3}), on(A, {1, 3}), ad(on(A, {1, 2}), {1, 2})}), pts,
                              tol));
    out.push_back(check_equal("gybce-b", product({on(A, {1, 2}), ad(on(C, {1, 3}), {1}), on(C, {2, 3})}),
                              product({ad(on(C, {2, 3}), {2}), on(C, {1, 3}), ad(dyn_shift(on(A, {1, 2}), {3}), {1, 2})}),
                              pts, tol));
    out.push_back(check_equal("gybce-c", product({on(D, {1, 2}), on(B, {1, 3}), ad(dyn_shift(on(B, {2, 3}), {1}), {3})}),
                              product({on(B, {2, 3}), ad(dyn_shift(on(B, {1, 3}), {2}), {3}), on(D, {1, 2})}), pts,
                              tol));
    out.push_back(residual_dybe(D, pts, tol, "gybce-d"));
    return out;
}

inline ResidualReport residual_sdre(const StructureSet& S, const DynMat& K, const std::vector<Point>& pts, double tol,
                                    std::string name = "sdre") {
    if (K.legs().size() != 1) throw Error("sdre: K must act on one leg");
    DynMat K1 = on(K, {1}), K2 = on(K, {2});
    DynMat L = product({on(S.A, {1, 2}), K1, on(S.B, {1, 2}), dyn_shift(K2, {1})});
    DynMat R = product({K2, on(S.C, {1, 2}), dyn_shift(K1, {2}), on(S.D, {1, 2})});
    return check_equal(std::move(name), L, R, pts, tol);
}

inline ResidualReport residual_boundary_dra(const StructureSet& S, const DynMat& K, const std::vector<Point>& pts,
                                            double tol, std::string name = "boundary-dra") {
    DynMat K1 = on(K, {1}), K2 = on(K, {2});
    DynMat L = product({on(S.A, {1, 2}), dyn_shift(K1, {2}), on(S.B, {1, 2}), dyn_shift(K2, {1})});
    DynMat R = product({dyn_shift(K2, {1}), on(S.C, {1, 2}), dyn_shift(K1, {2}), on(S.D, {1, 2})});
    return check_equal(std::move(name), L, R, pts, tol);
}

// X(lambda + gamma e_i) = (f x f)^{-1} X(lambda) (f x f) for every i.
inline ResidualReport residual_quasi_nondyn(const DynMat& X, const Automorphism& f, const std::vector<Point>& pts,
                                            double tol, std::string name = "quasi-nondyn") {
    if (X.legs().size() != 2) throw Error("quasi-non-dynamicity check needs a 2-leg matrix");
    DynMat Y = adjoint_auto(X, f, X.legs(), Side::Conjugate, -1);
    const int n = X.rank();
    const cplx gamma = X.scheme().gamma;
    return check_points(std::move(name), pts, tol, [&](const Point& p) {
        Mat target = Y(p);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) worst = std::max(worst, relative_residual(X(p.shifted({i}, gamma)), target));
        return worst;
    });
}

// Non-dynamical R-matrix conjugated by f on each pair:
// F12^{-1} R12 F12 R13 F23^{-1} R23 F23 = R23 F13^{-1} R13 F13 R12, F = f (x) f.
inline ResidualReport residual_modified_ybe(const DynMat& R0, const Automorphism& f, const std::vector<Point>& pts,
                                            double tol, std::string name = "modified-ybe") {
    auto c = [&](const Legs& legs) { return adjoint_auto(on(R0, legs), f, legs, Side::Conjugate, -1); };
    return check_equal(std::move(name), product({c({1, 2}), on(R0, {1, 3}), c({2, 3})}),
                       product({on(R0, {2, 3}), c({1, 3}), on(R0, {1, 2})}), pts, tol);
}

// Checks that X does not depend on lambda: X(lambda + gamma e_i) = X(lambda) for all i.
inline ResidualReport residual_nondynamical(const DynMat& X, const std::vector<Point>& pts, double tol,
                                            std::string name = "non-dynamical") {
    const int n = X.rank();
    const cplx gamma = X.scheme().gamma;
    return check_points(std::move(name), pts, tol, [&](const Point& p) {
        Mat M = X(p);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            worst = std::max(worst, relative_residual(X(p.shifted({i}, gamma)), M));
            Point q = p;
            q.lambda(i) += cplx(0.37, -0.21);
            worst = std::max(worst, relative_residual(X(q), M));
        }
        return worst;
    });
}

// kappa(sigma, theta_i + 2 gamma) = kappa(sigma, theta_i), i = 2..n, together with the
// equivalent i-independence of kappa(lambda + gamma e_i).
inline ResidualReport residual_theta_period(const DynMat& kappa, const std::vector<Point>& pts, double tol,
                                            std::string name = "theta-period") {
    const int n = kappa.rank();
    const cplx gamma = kappa.scheme().gamma;
    return check_points(std::move(name), pts, tol, [&](const Point& p) {
        Mat base = kappa(p);
        Mat first = kappa(p.shifted({0}, gamma));
        double worst = 0.0;
        for (int i = 1; i < n; ++i) {
            Point q = p;
            q.lambda(0) += gamma;
            q.lambda(i) -= gamma;
            worst = std::max(worst, relative_residual(kappa(q), base));
            worst = std::max(worst, relative_residual(kappa(p.shifted({i}, gamma)), first));
        }
        return worst;
    });
}

inline ResidualReport residual_projector_compat(const DynMat& R, const std::vector<Mat>& projs, const DynMat& b,
                                                const std::vector<Point>& pts, double tol,
                                                std::string name = "projector-compat") {
    for (const auto& P : projs)
        if ((P * P - P).norm() > 1e-12 * std::max(1.0, P.norm())) throw Error("projector-compat: non-idempotent input");
    double static_part = 0.0;
    for (std::size_t i = 0; i < projs.size(); ++i)
        for (std::size_t j = i + 1; j < projs.size(); ++j)
            static_part = std::max(static_part, relative_residual(projs[i] * projs[j], projs[j] * projs[i]));
    return check_points(std::move(name), pts, tol, [&](const Point& p) {
        double worst = static_part;
        Mat bm = b(p), Rm = R(p);
        for (const auto& P : projs) {
            worst = std::max(worst, relative_residual(P * bm, bm * P));
            Mat PP = Eigen::kroneckerProduct(P, P);
            worst = std::max(worst, relative_residual(PP * Rm, Rm * PP));
        }
        return worst;
    });
}

} // namespace sdra
