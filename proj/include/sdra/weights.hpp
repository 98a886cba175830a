#pragma once

#include "residual.hpp"

namespace sdra {

// D = sum d_ij e_ii (x) e_jj + sum_{i != j} Delta_ij e_ij (x) e_ji
struct ZeroWeightParts {
    std::function<Mat(const Point&)> d;
    std::function<Mat(const Point&)> delta;
    ResidualReport outside; // relative mass outside the zero-weight slots
};

inline Mat zero_weight_part(const Mat& D, int n) {
    Mat Z = Mat::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Z(i * n + j, i * n + j) = D(i * n + j, i * n + j);
            if (i != j) Z(i * n + j, j * n + i) = D(i * n + j, j * n + i);
        }
    return Z;
}

inline ZeroWeightParts decompose_zero_weight(const DynMat& D, const std::vector<Point>& pts, double tol = 1e-9) {
    if (D.legs().size() != 2) throw Error("decompose_zero_weight: needs a 2-leg matrix");
    const int n = D.rank();
    ZeroWeightParts out;
    out.outside = check_points("zero-weight-slots", pts, tol, [&](const Point& p) {
        Mat M = D(p);
        return relative_residual(M, zero_weight_part(M, n));
    });
    if (!out.outside.pass)
        throw Error("decompose_zero_weight: matrix is not zero-weight (outside mass " +
                    std::to_string(out.outside.max_residual) + ")");
    out.d = [D, n](const Point& p) {
        Mat M = D(p), d(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) d(i, j) = M(i * n + j, i * n + j);
        return d;
    };
    out.delta = [D, n](const Point& p) {
        Mat M = D(p), t = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) t(i, j) = M(i * n + j, j * n + i);
        return t;
    };
    return out;
}

inline Mat reassemble_zero_weight(const Mat& d, const Mat& delta) {
    const int n = static_cast<int>(d.rows());
    Mat Z = Mat::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Z(i * n + j, i * n + j) = d(i, j);
            if (i != j) Z(i * n + j, j * n + i) = delta(i, j);
        }
    return Z;
}

} // namespace sdra
