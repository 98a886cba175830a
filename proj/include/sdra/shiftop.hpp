#pragma once

#include <map>

#include "residual.hpp"

namespace sdra {

using Shift = std::vector<int>;

// X evaluated at lambda + gamma m.
inline DynMat shifted_vec(const DynMat& X, const Shift& m) {
    if (static_cast<int>(m.size()) != X.rank()) throw Error("shift vector has wrong length");
    if (std::all_of(m.begin(), m.end(), [](int v) { return v == 0; })) return X;
    const cplx gamma = X.scheme().gamma;
    auto move = [m, gamma](const Point& p) {
        Point q = p;
        for (std::size_t i = 0; i < m.size(); ++i) q.lambda(i) += gamma * static_cast<double>(m[i]);
        return q;
    };
    DynMat::PoleFn poles;
    if (X.pole_fn()) poles = [X, move](const Point& p, double e) { return X.near_pole(move(p), e); };
    return DynMat(X.scheme(), X.legs(), [X, move](const Point& p) { return X(move(p)); }, X.slots(), poles);
}

// X with the spectral value of one leg frozen.
inline DynMat fix_spectral(const DynMat& X, int leg, cplx value) {
    Legs slots;
    for (int l : X.slots())
        if (l != leg) slots.push_back(l);
    auto set = [leg, value](const Point& p) {
        Point q = p;
        q.set_u(leg, value);
        return q;
    };
    DynMat::PoleFn poles;
    if (X.pole_fn()) poles = [X, set](const Point& p, double e) { return X.near_pole(set(p), e); };
    return DynMat(X.scheme(), X.legs(), [X, set](const Point& p) { return X(set(p)); }, slots, poles);
}

// Finite sum of M_k(lambda, u) exp(gamma m_k . d/dlambda) on a fixed leg set.
class ShiftOpSum {
public:
    ShiftOpSum(WeightScheme s, Legs legs) : scheme_(s), legs_(std::move(legs)) {
        std::sort(legs_.begin(), legs_.end());
    }

    const WeightScheme& scheme() const { return scheme_; }
    const Legs& legs() const { return legs_; }
    const std::map<Shift, DynMat>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    // Coefficients acting on fewer legs are extended by the identity.
    void add(const DynMat& coeff, const Shift& m) {
        if (static_cast<int>(m.size()) != scheme_.rank) throw Error("shift vector has wrong length");
        for (int l : coeff.legs())
            if (!std::binary_search(legs_.begin(), legs_.end(), l))
                throw Error("ShiftOpSum: coefficient leg " + std::to_string(l) + " outside the leg set");
        DynMat c = coeff.legs() == legs_ ? coeff : embed(coeff, coeff.legs(), legs_);
        auto it = terms_.find(m);
        if (it == terms_.end()) terms_.emplace(m, c);
        else it->second = it->second + c;
    }

    static ShiftOpSum single(const DynMat& coeff, const Shift& m, const Legs& legs) {
        ShiftOpSum s(coeff.scheme(), legs);
        s.add(coeff, m);
        return s;
    }

private:
    WeightScheme scheme_;
    Legs legs_;
    std::map<Shift, DynMat> terms_;
};

inline Shift zero_shift(int n) { return Shift(n, 0); }

inline Shift unit_shift(int n, int i) {
    Shift m(n, 0);
    m[i] = 1;
    return m;
}

// (M e^{m}) (M' e^{m'}) = M(lambda) M'(lambda + gamma m) e^{m + m'}
inline ShiftOpSum shiftop_compose(const ShiftOpSum& a, const ShiftOpSum& b) {
    if (a.legs() != b.legs()) throw Error("shiftop_compose: leg sets differ");
    if (a.scheme().rank != b.scheme().rank) throw Error("shiftop_compose: rank mismatch");
    ShiftOpSum out(a.scheme(), a.legs());
    for (const auto& [m, M] : a.terms())
        for (const auto& [m2, M2] : b.terms()) {
            Shift s(m.size());
            for (std::size_t i = 0; i < m.size(); ++i) s[i] = m[i] + m2[i];
            out.add(M * shifted_vec(M2, m), s);
        }
    return out;
}

// Max over shift groups and samples of the relative norm of the grouped coefficient of [a, b].
inline ResidualReport shiftop_commutator(const ShiftOpSum& a, const ShiftOpSum& b, const std::vector<Point>& pts,
                                         double tol, std::string name = "shift-commutator") {
    ShiftOpSum ab = shiftop_compose(a, b), ba = shiftop_compose(b, a);
    std::map<Shift, std::pair<DynMat, DynMat>> groups;
    for (const auto& [m, M] : ab.terms()) groups[m].first = M;
    for (const auto& [m, M] : ba.terms()) groups[m].second = M;
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

// exp(D_leg) = sum_i e_ii^(leg) exp(gamma d/dlambda_i), applied on the right of M.
inline ShiftOpSum with_weight_shift(const DynMat& M, int leg, const Legs& legs) {
    ShiftOpSum s(M.scheme(), legs);
    const int n = M.rank();
    for (int i = 0; i < n; ++i)
        s.add(M * constant(M.scheme(), elementary(n, i, i), {leg}), unit_shift(n, i));
    return s;
}

// Partial trace over the first leg of a matrix on the sorted legs.
inline Mat partial_trace_first(const Mat& M, int n) {
    const int d = static_cast<int>(M.rows()) / n;
    Mat out = Mat::Zero(d, d);
    for (int i = 0; i < n; ++i) out += M.block(i * d, i * d, d, d);
    return out;
}

// t = Tr_0 { q_0^{-1} T q_0 } term by term; an empty q gives the plain trace.
inline ShiftOpSum transfer_trace(const ShiftOpSum& T, const DynMat& q = DynMat()) {
    const Legs& legs = T.legs();
    if (legs.empty() || legs.front() != 0) throw Error("transfer_trace: auxiliary leg 0 absent");
    if (legs.size() < 2) throw Error("transfer_trace: no quantum legs");
    Legs quantum(legs.begin() + 1, legs.end());
    const int n = T.scheme().rank;
    ShiftOpSum out(T.scheme(), quantum);
    for (const auto& [m, M] : T.terms()) {
        DynMat X = M;
        if (q.valid()) X = product({inverse(relabel(q, {0})), M, relabel(q, {0})});
        DynMat::PoleFn poles;
        if (X.pole_fn()) poles = [X](const Point& p, double e) { return X.near_pole(p, e); };
        Legs xl = X.legs();
        out.add(DynMat(
                    T.scheme(), quantum,
                    [X, xl, legs, n](const Point& p) { return partial_trace_first(place(X(p), n, xl, legs), n); },
                    X.slots(), poles),
                m);
    }
    return out;
}

} // namespace sdra
