#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <utility>

#include "types.hpp"

namespace sdra {

// Matrix-valued function of (lambda, u) acting on a sorted list of tensor legs.
// Each leg is a copy of V = C^n; the Kronecker order is the sorted leg order.
class DynMat {
public:
    using Fn = std::function<Mat(const Point&)>;
    using PoleFn = std::function<bool(const Point&, double)>;

    DynMat() = default;
    DynMat(WeightScheme scheme, Legs legs, Fn fn, Legs slots = {}, PoleFn poles = {})
        : scheme_(scheme), legs_(std::move(legs)), slots_(std::move(slots)),
          fn_(std::make_shared<Fn>(std::move(fn))) {
        if (!std::is_sorted(legs_.begin(), legs_.end()) ||
            std::adjacent_find(legs_.begin(), legs_.end()) != legs_.end())
            throw Error("DynMat: legs must be sorted and distinct");
        std::sort(slots_.begin(), slots_.end());
        slots_.erase(std::unique(slots_.begin(), slots_.end()), slots_.end());
        if (poles) poles_ = std::make_shared<PoleFn>(std::move(poles));
    }

    const WeightScheme& scheme() const { return scheme_; }
    int rank() const { return scheme_.rank; }
    const Legs& legs() const { return legs_; }
    // legs whose spectral value is read
    const Legs& slots() const { return slots_; }
    int dim() const { return ipow(scheme_.rank, static_cast<int>(legs_.size())); }
    bool valid() const { return static_cast<bool>(fn_); }

    Mat operator()(const Point& p) const {
        if (!fn_) throw Error("DynMat: empty");
        for (int l : slots_)
            if (!p.has_u(l)) throw Error("missing spectral value for leg " + std::to_string(l));
        Mat m = (*fn_)(p);
        if (m.rows() != dim() || m.cols() != dim())
            throw Error("DynMat: evaluation returned wrong dimension");
        return m;
    }

    bool near_pole(const Point& p, double eps) const { return poles_ && (*poles_)(p, eps); }
    const std::shared_ptr<PoleFn>& pole_fn() const { return poles_; }

private:
    WeightScheme scheme_;
    Legs legs_;
    Legs slots_;
    std::shared_ptr<Fn> fn_;
    std::shared_ptr<PoleFn> poles_;
};

inline Mat eval_dynmat(const DynMat& X, const Vec& lambda, const std::vector<cplx>& u) {
    if (lambda.size() != X.rank()) throw Error("eval: lambda has wrong length");
    Point p(lambda, u);
    if (X.near_pole(p, 0.0)) throw PoleError("pole hit at " + describe(p));
    return X(p);
}

inline Mat elementary(int n, int i, int j) {
    Mat m = Mat::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

inline Mat permutation_operator(int n) {
    if (n < 2) throw Error("permutation operator needs n >= 2");
    Mat P = Mat::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) P(i * n + j, j * n + i) = 1.0;
    return P;
}

inline Legs union_legs(const Legs& a, const Legs& b) {
    Legs out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Places M, whose k-th Kronecker factor is leg sub[k], into the sorted leg list all.
inline Mat place(const Mat& M, int n, const Legs& sub, const Legs& all) {
    const int k = static_cast<int>(all.size());
    const int r = static_cast<int>(sub.size());
    const int dim = ipow(n, k), dsub = ipow(n, r);
    if (M.rows() != dsub) throw Error("place: matrix does not match leg count");
    if (sub == all) return M;
    std::vector<int> stride(k);
    for (int p = 0; p < k; ++p) stride[p] = ipow(n, k - 1 - p);
    std::vector<int> pos(r);
    for (int q = 0; q < r; ++q) {
        auto it = std::find(all.begin(), all.end(), sub[q]);
        if (it == all.end()) throw Error("place: leg " + std::to_string(sub[q]) + " not in target");
        pos[q] = static_cast<int>(it - all.begin());
    }
    std::vector<int> offs(dsub), sidx(dim), rest(dim);
    for (int s = 0; s < dsub; ++s) {
        int o = 0, t = s;
        for (int q = r - 1; q >= 0; --q) {
            o += (t % n) * stride[pos[q]];
            t /= n;
        }
        offs[s] = o;
    }
    for (int I = 0; I < dim; ++I) {
        int s = 0, rr = I;
        for (int q = 0; q < r; ++q) {
            int d = (I / stride[pos[q]]) % n;
            s = s * n + d;
            rr -= d * stride[pos[q]];
        }
        sidx[I] = s;
        rest[I] = rr;
    }
    Mat out = Mat::Zero(dim, dim);
    for (int I = 0; I < dim; ++I)
        for (int sj = 0; sj < dsub; ++sj) out(I, rest[I] + offs[sj]) = M(sidx[I], sj);
    return out;
}

inline DynMat constant(const WeightScheme& s, const Mat& M, Legs legs) {
    if (M.rows() != ipow(s.rank, static_cast<int>(legs.size())) || M.cols() != M.rows())
        throw Error("constant: matrix size does not match legs");
    return DynMat(s, std::move(legs), [M](const Point&) { return M; });
}

inline DynMat identity(const WeightScheme& s, Legs legs) {
    int d = ipow(s.rank, static_cast<int>(legs.size()));
    return constant(s, Mat::Identity(d, d), std::move(legs));
}

// X with its k-th leg renamed new_legs[k]; spectral slots follow their legs.
inline DynMat relabel(const DynMat& X, const Legs& new_legs) {
    if (new_legs.size() != X.legs().size()) throw Error("relabel: leg count mismatch");
    Legs sorted = new_legs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error("relabel: repeated leg");
    if (new_legs == X.legs()) return X;
    const Legs old = X.legs();
    Legs slots;
    for (int l : X.slots()) {
        auto it = std::find(old.begin(), old.end(), l);
        if (it != old.end()) slots.push_back(new_legs[it - old.begin()]);
    }
    auto remap = [old, new_legs](const Point& p) {
        Point q(p.lambda);
        for (std::size_t k = 0; k < old.size(); ++k)
            if (p.has_u(new_legs[k])) q.set_u(old[k], *p.u[new_legs[k]]);
        return q;
    };
    const int n = X.rank();
    DynMat::PoleFn poles;
    if (X.pole_fn()) poles = [X, remap](const Point& p, double eps) { return X.near_pole(remap(p), eps); };
    return DynMat(
        X.scheme(), sorted,
        [X, remap, new_legs, sorted, n](const Point& p) { return place(X(remap(p)), n, new_legs, sorted); },
        slots, poles);
}

// X acting on target legs (k-th leg of X -> target[k]) and identity on the rest of all.
inline DynMat embed(const DynMat& X, const Legs& target, const Legs& all) {
    if (target.size() != X.legs().size()) throw Error("embed: leg count mismatch");
    Legs sorted_all = all;
    std::sort(sorted_all.begin(), sorted_all.end());
    for (int l : target)
        if (!std::binary_search(sorted_all.begin(), sorted_all.end(), l))
            throw Error("embed: target leg " + std::to_string(l) + " not among all legs");
    DynMat Y = relabel(X, target);
    const int n = X.rank();
    Legs yl = Y.legs();
    return DynMat(
        X.scheme(), sorted_all, [Y, yl, sorted_all, n](const Point& p) { return place(Y(p), n, yl, sorted_all); },
        Y.slots(), Y.pole_fn() ? DynMat::PoleFn([Y](const Point& p, double e) { return Y.near_pole(p, e); })
                               : DynMat::PoleFn());
}

inline DynMat product(const std::vector<DynMat>& fs) {
    if (fs.empty()) throw Error("product: no factors");
    Legs legs, slots;
    bool any_poles = false;
    for (const auto& f : fs) {
        if (f.rank() != fs.front().rank()) throw Error("product: rank mismatch");
        legs = union_legs(legs, f.legs());
        slots = union_legs(slots, f.slots());
        any_poles = any_poles || f.pole_fn();
    }
    const int n = fs.front().rank();
    DynMat::PoleFn poles;
    if (any_poles)
        poles = [fs](const Point& p, double e) {
            return std::any_of(fs.begin(), fs.end(), [&](const DynMat& f) { return f.near_pole(p, e); });
        };
    return DynMat(
        fs.front().scheme(), legs,
        [fs, legs, n](const Point& p) {
            Mat m = place(fs.front()(p), n, fs.front().legs(), legs);
            for (std::size_t i = 1; i < fs.size(); ++i) m = m * place(fs[i](p), n, fs[i].legs(), legs);
            return m;
        },
        slots, poles);
}

inline DynMat operator*(const DynMat& a, const DynMat& b) { return product({a, b}); }

inline DynMat inverse(const DynMat& X) {
    return DynMat(
        X.scheme(), X.legs(),
        [X](const Point& p) {
            Eigen::PartialPivLU<Mat> lu(X(p));
            if (std::abs(lu.determinant()) < 1e-300) throw PoleError("singular matrix at " + describe(p));
            return Mat(lu.inverse());
        },
        X.slots(), X.pole_fn() ? DynMat::PoleFn([X](const Point& p, double e) { return X.near_pole(p, e); })
                               : DynMat::PoleFn());
}

inline DynMat scaled(const DynMat& X, cplx c) {
    return DynMat(X.scheme(), X.legs(), [X, c](const Point& p) { return Mat(c * X(p)); }, X.slots(),
                  X.pole_fn() ? DynMat::PoleFn([X](const Point& p, double e) { return X.near_pole(p, e); })
                              : DynMat::PoleFn());
}

inline DynMat sum(const DynMat& a, const DynMat& b) {
    Legs legs = union_legs(a.legs(), b.legs());
    const int n = a.rank();
    return DynMat(
        a.scheme(), legs,
        [a, b, legs, n](const Point& p) {
            return Mat(place(a(p), n, a.legs(), legs) + place(b(p), n, b.legs(), legs));
        },
        union_legs(a.slots(), b.slots()),
        (a.pole_fn() || b.pole_fn())
            ? DynMat::PoleFn([a, b](const Point& p, double e) { return a.near_pole(p, e) || b.near_pole(p, e); })
            : DynMat::PoleFn());
}

inline DynMat operator+(const DynMat& a, const DynMat& b) { return sum(a, b); }

// lambda -> sum_i X(lambda + gamma(e_i1 + ... + e_ir)) prod_k e_{ik ik}^(shift leg k)
inline DynMat dyn_shift(const DynMat& X, const Legs& shift_legs) {
    if (shift_legs.empty()) return X;
    Legs sl = shift_legs;
    Legs uniq = sl;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    Legs legs = union_legs(X.legs(), uniq);
    const int n = X.rank();
    const int k = static_cast<int>(legs.size());
    const int r = static_cast<int>(sl.size());
    std::vector<int> stride_of(r);
    for (int q = 0; q < r; ++q) {
        int p = static_cast<int>(std::find(legs.begin(), legs.end(), sl[q]) - legs.begin());
        stride_of[q] = ipow(n, k - 1 - p);
    }
    const cplx gamma = X.scheme().gamma;
    DynMat::PoleFn poles;
    if (X.pole_fn())
        poles = [X, r, n, gamma](const Point& p, double e) {
            std::vector<int> idx(r, 0);
            for (int c = 0; c < ipow(n, r); ++c) {
                int t = c;
                for (int q = r - 1; q >= 0; --q) {
                    idx[q] = t % n;
                    t /= n;
                }
                if (X.near_pole(p.shifted(idx, gamma), e)) return true;
            }
            return false;
        };
    return DynMat(
        X.scheme(), legs,
        [X, legs, n, k, r, stride_of, gamma](const Point& p) {
            const int dim = ipow(n, k);
            Mat out = Mat::Zero(dim, dim);
            std::vector<int> idx(r);
            for (int c = 0; c < ipow(n, r); ++c) {
                int t = c;
                for (int q = r - 1; q >= 0; --q) {
                    idx[q] = t % n;
                    t /= n;
                }
                std::vector<int> cols;
                for (int J = 0; J < dim; ++J) {
                    bool ok = true;
                    for (int q = 0; q < r && ok; ++q) ok = ((J / stride_of[q]) % n) == idx[q];
                    if (ok) cols.push_back(J);
                }
                if (cols.empty()) continue;
                Mat M = place(X(p.shifted(idx, gamma)), n, X.legs(), legs);
                for (int J : cols) out.col(J) = M.col(J);
            }
            return out;
        },
        X.slots(), poles);
}

// X^pi = P X P with legs and spectral slots exchanged.
inline DynMat pi_transpose(const DynMat& X) {
    if (X.legs().size() != 2) throw Error("pi_transpose: needs exactly 2 legs");
    return relabel(X, {X.legs()[1], X.legs()[0]});
}

// Conjugation by a constant matrix G placed on the given legs: G X G^{-1}.
inline DynMat conjugate_const(const DynMat& X, const Mat& G, const Mat& Ginv, const Legs& on) {
    const int n = X.rank();
    Mat T = Mat::Identity(X.dim(), X.dim()), Ti = T;
    for (int l : on) {
        T = T * place(G, n, {l}, X.legs());
        Ti = place(Ginv, n, {l}, X.legs()) * Ti;
    }
    return DynMat(X.scheme(), X.legs(), [X, T, Ti](const Point& p) { return Mat(T * X(p) * Ti); }, X.slots(),
                  X.pole_fn() ? DynMat::PoleFn([X](const Point& p, double e) { return X.near_pole(p, e); })
                              : DynMat::PoleFn());
}

} // namespace sdra

namespace sdra {

// X evaluated at lambda + gamma (e_i1 + ... + e_ir) for a fixed index list.
inline DynMat shifted_by(const DynMat& X, const std::vector<int>& idx) {
    const cplx gamma = X.scheme().gamma;
    for (int i : idx)
        if (i < 0 || i >= X.rank()) throw Error("shifted_by: weight index out of range");
    DynMat::PoleFn poles;
    if (X.pole_fn()) poles = [X, idx, gamma](const Point& p, double e) { return X.near_pole(p.shifted(idx, gamma), e); };
    return DynMat(X.scheme(), X.legs(), [X, idx, gamma](const Point& p) { return X(p.shifted(idx, gamma)); },
                  X.slots(), poles);
}

} // namespace sdra
