#pragma once

#include <random>

#include <sdra/scenario.hpp>
#include <sdra/weights.hpp>

namespace testing_support {

using namespace sdra;

inline WeightScheme scheme(int n, cplx gamma = 1.0) { return WeightScheme(n, gamma); }

// I + P / (u_a - u_b), written out entrywise.
inline Mat yangian_at(int n, cplx du) {
    Mat R = Mat::Identity(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R(i * n + j, j * n + i) += 1.0 / du;
    return R;
}

inline DynMat yangian(const WeightScheme& s) {
    const int n = s.rank;
    return DynMat(
        s, {1, 2}, [n](const Point& p) { return yangian_at(n, p.get_u(1) - p.get_u(2)); }, {1, 2},
        [](const Point& p, double e) { return std::abs(p.get_u(1) - p.get_u(2)) <= e; });
}

inline DynMat diag_fn(const WeightScheme& s, std::function<cplx(const Vec&, int)> f) {
    const int n = s.rank;
    return DynMat(s, {1}, [n, f](const Point& p) {
        Mat m = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = f(p.lambda, i);
        return m;
    });
}

// b = diag(exp(lambda_i + i/3)), a generic invertible diagonal dependence
inline DynMat test_b(const WeightScheme& s) {
    return diag_fn(s, [](const Vec& l, int i) { return std::exp(l(i) + cplx(i) / 3.0); });
}

// k = diag(exp(sum_j c_ij lambda_j)) with a non-symmetric coefficient pattern
inline DynMat test_k(const WeightScheme& s) {
    return diag_fn(s, [](const Vec& l, int i) {
        cplx e = 0.0;
        for (int j = 0; j < l.size(); ++j) e += (0.2 + 0.1 * ((i + 2 * j) % 3)) * l(j);
        return std::exp(e);
    });
}

inline Mat random_matrix(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cplx(N(rng), N(rng));
    return m;
}

inline std::vector<Point> points(const WeightScheme& s, int count, int max_leg = 3, std::uint64_t seed = 7,
                                 const std::vector<DynMat>& poles = {}) {
    SamplerConfig cfg;
    cfg.count = count;
    cfg.seed = seed;
    return sample_points(cfg, s, max_leg, poles);
}

inline Point point(const Vec& lam, const std::vector<cplx>& u) { return Point(lam, u); }

inline Vec vec(std::initializer_list<cplx> xs) {
    Vec v(static_cast<int>(xs.size()));
    int i = 0;
    for (auto x : xs) v(i++) = x;
    return v;
}

// Standard structure set from a Yangian R0 = Rbar, b and q.
inline StructureSet yangian_structure(const WeightScheme& s, const DynMat& b, const DynMat& q) {
    DynMat R = yangian(s);
    return build_structure(R, R, b, q);
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace testing_support
