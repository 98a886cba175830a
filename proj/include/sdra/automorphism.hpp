#pragma once

#include <memory>

#include <Eigen/Eigenvalues>

#include "dynmat.hpp"

namespace sdra {

enum class AutoKind { Identity, Constant, Factorizable, SpectralShift };

inline const char* auto_kind_name(AutoKind k) {
    switch (k) {
    case AutoKind::Identity: return "identity";
    case AutoKind::Constant: return "constant";
    case AutoKind::Factorizable: return "factorizable";
    case AutoKind::SpectralShift: return "spectral_shift";
    }
    return "?";
}

struct EigenData {
    Mat V, Vinv;
    Vec w;
};

inline EigenData eigen_data(const Mat& G) {
    Eigen::ComplexEigenSolver<Mat> es(G);
    if (es.info() != Eigen::Success) throw Error("eigen-decomposition failed");
    EigenData d{es.eigenvectors(), Mat(), es.eigenvalues()};
    Eigen::FullPivLU<Mat> lu(d.V);
    double cond = d.V.norm() * (lu.isInvertible() ? Mat(lu.inverse()).norm() : 1e300);
    if (!lu.isInvertible() || cond > 1e10) throw Error("matrix is not diagonalizable");
    d.Vinv = lu.inverse();
    return d;
}

// Principal-branch complex power via eigen-decomposition.
inline Mat principal_power(const EigenData& d, cplx t) {
    Vec wt(d.w.size());
    for (int i = 0; i < d.w.size(); ++i) {
        cplx w = d.w(i);
        if (std::abs(w) == 0.0) throw Error("eigenvalue at zero has no logarithm");
        if (w.imag() == 0.0 && w.real() < 0.0) throw Error("eigenvalue on the branch cut");
        wt(i) = std::exp(t * std::log(w));
    }
    return d.V * wt.asDiagonal() * d.Vinv;
}

inline Mat int_power(const Mat& G, int p) {
    Mat base = p < 0 ? Mat(G.inverse()) : G;
    Mat r = Mat::Identity(G.rows(), G.cols());
    for (int k = 0; k < std::abs(p); ++k) r = r * base;
    return r;
}

// Auxiliary-space automorphism: identity, constant matrix, matrix function of u,
// or the spectral shift u -> u + s.
class Automorphism {
public:
    using UFn = std::function<Mat(cplx)>;

    static Automorphism identity() { return Automorphism(); }
    static Automorphism constant(const Mat& G) {
        Automorphism a;
        a.kind_ = AutoKind::Constant;
        a.G_ = G;
        if (Eigen::FullPivLU<Mat>(G).isInvertible() == false) throw Error("constant automorphism must be invertible");
        return a;
    }
    static Automorphism factorizable(UFn f) {
        Automorphism a;
        a.kind_ = AutoKind::Factorizable;
        a.F_ = std::move(f);
        return a;
    }
    static Automorphism spectral_shift(cplx s) {
        Automorphism a;
        a.kind_ = AutoKind::SpectralShift;
        a.step_ = s;
        return a;
    }

    AutoKind kind() const { return kind_; }
    bool is_identity() const { return kind_ == AutoKind::Identity; }
    const Mat& matrix() const { return G_; }
    cplx step() const { return step_; }
    Mat at(cplx u) const { return F_(u); }

    // g^t for Constant (principal branch for non-integer t)
    Mat const_power(cplx t) const {
        if (kind_ != AutoKind::Constant) throw Error("const_power: not a constant automorphism");
        if (t.imag() == 0.0 && t.real() == std::round(t.real()))
            return int_power(G_, static_cast<int>(std::lround(t.real())));
        if (!eig_) eig_ = std::make_shared<EigenData>(eigen_data(G_));
        return principal_power(*eig_, t);
    }
    Mat fact_power(cplx u, cplx t) const {
        Mat F = F_(u);
        if (t.imag() == 0.0 && t.real() == std::round(t.real()))
            return int_power(F, static_cast<int>(std::lround(t.real())));
        return principal_power(eigen_data(F), t);
    }

private:
    AutoKind kind_ = AutoKind::Identity;
    Mat G_;
    UFn F_;
    cplx step_ = 0.0;
    mutable std::shared_ptr<EigenData> eig_;
};

enum class Side { Conjugate, Left, Right };

namespace detail {

inline DynMat::PoleFn forward_poles(const DynMat& X) {
    if (!X.pole_fn()) return {};
    return [X](const Point& p, double e) { return X.near_pole(p, e); };
}

// exponent t(p) applied on the given legs; t depends on the point (sigma-powers) or not.
inline DynMat act(const DynMat& X, const Automorphism& g, const Legs& legs, Side side,
                  std::function<cplx(const Point&)> t) {
    for (int l : legs)
        if (!std::binary_search(X.legs().begin(), X.legs().end(), l))
            throw Error("automorphism action on leg " + std::to_string(l) + " not carried by the matrix");
    const int n = X.rank();
    switch (g.kind()) {
    case AutoKind::Identity:
        return X;
    case AutoKind::SpectralShift: {
        if (side != Side::Conjugate)
            throw Error("one-sided spectral-shift multiplication is not a finite matrix");
        const cplx s = g.step();
        auto move = [legs, s, t](const Point& p) {
            Point q = p;
            cplx d = t(p) * s;
            for (int l : legs)
                if (p.has_u(l)) q.set_u(l, *p.u[l] + d);
            return q;
        };
        DynMat::PoleFn poles;
        if (X.pole_fn()) poles = [X, move](const Point& p, double e) { return X.near_pole(move(p), e); };
        return DynMat(X.scheme(), X.legs(), [X, move](const Point& p) { return X(move(p)); }, X.slots(), poles);
    }
    case AutoKind::Constant:
    case AutoKind::Factorizable: {
        const bool fact = g.kind() == AutoKind::Factorizable;
        Legs slots = X.slots();
        if (fact) slots = union_legs(slots, [&] { Legs s = legs; std::sort(s.begin(), s.end()); return s; }());
        return DynMat(
            X.scheme(), X.legs(),
            [X, g, legs, side, t, n, fact](const Point& p) {
                const cplx e = t(p);
                Mat T = Mat::Identity(X.dim(), X.dim());
                for (int l : legs) {
                    Mat f = fact ? g.fact_power(p.get_u(l), e) : g.const_power(e);
                    T = T * place(f, n, {l}, X.legs());
                }
                Mat M = X(p);
                switch (side) {
                case Side::Left: return Mat(T * M);
                case Side::Right: return Mat(M * T);
                default: return Mat(T * M * T.inverse());
                }
            },
            slots, forward_poles(X));
    }
    }
    return X;
}

} // namespace detail

// g^power acting on the named legs by conjugation or one-sided multiplication.
inline DynMat adjoint_auto(const DynMat& X, const Automorphism& g, const Legs& legs, Side side, int power) {
    if (power == 0) return X;
    const cplx p = power;
    return detail::act(X, g, legs, side, [p](const Point&) { return p; });
}

inline cplx sigma_of(const Vec& lambda) { return lambda.sum(); }

// Ad exp[sign sigma log g] on the legs. The exponent is sigma/gamma so that a unit
// dynamical shift multiplies the factor by g once.
inline DynMat adjoint_sigma(const DynMat& X, const Automorphism& g, const Legs& legs, int sign) {
    if (g.is_identity() || sign == 0) return X;
    const cplx gamma = X.scheme().gamma;
    const double sg = sign;
    return detail::act(X, g, legs, Side::Conjugate,
                       [gamma, sg](const Point& p) { return sg * sigma_of(p.lambda) / gamma; });
}

// exp[sign sigma log g] as a one-leg dynamical matrix; not available for spectral shifts.
inline DynMat sigma_matrix(const WeightScheme& s, const Automorphism& g, int sign, int leg = 1) {
    if (g.kind() == AutoKind::SpectralShift)
        throw Error("exp[sigma log g] of a spectral shift is not a finite matrix");
    DynMat I = identity(s, {leg});
    if (g.is_identity()) return I;
    const cplx gamma = s.gamma;
    const double sg = sign;
    return detail::act(I, g, {leg}, Side::Left, [gamma, sg](const Point& p) { return sg * sigma_of(p.lambda) / gamma; });
}

// The automorphism exp[sigma log g] at a fixed dynamical point.
inline Automorphism sigma_power(const Automorphism& g, const Vec& lambda, const WeightScheme& s) {
    const cplx t = sigma_of(lambda) / s.gamma;
    switch (g.kind()) {
    case AutoKind::Identity: return g;
    case AutoKind::Constant: return Automorphism::constant(g.const_power(t));
    case AutoKind::SpectralShift: return Automorphism::spectral_shift(t * g.step());
    case AutoKind::Factorizable: return Automorphism::factorizable([g, t](cplx u) { return g.fact_power(u, t); });
    }
    return g;
}

struct SigmaTheta {
    cplx sigma;
    Vec theta; // theta_i for i = 2..n, stored from index 0
};

inline SigmaTheta sigma_theta(const Vec& lambda) {
    SigmaTheta st{sigma_of(lambda), Vec(lambda.size() - 1)};
    for (int i = 1; i < lambda.size(); ++i) st.theta(i - 1) = st.sigma - 2.0 * lambda(i);
    return st;
}

inline Vec lambda_from_sigma_theta(const SigmaTheta& st) {
    const int n = static_cast<int>(st.theta.size()) + 1;
    Vec lam(n);
    cplx rest = 0.0;
    for (int i = 1; i < n; ++i) {
        lam(i) = (st.sigma - st.theta(i - 1)) / 2.0;
        rest += lam(i);
    }
    lam(0) = st.sigma - rest;
    return lam;
}

} // namespace sdra
