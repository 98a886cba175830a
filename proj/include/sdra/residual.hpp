#pragma once

#include <string>

#include "dynmat.hpp"

namespace sdra {

struct ResidualReport {
    std::string check_name;
    int samples = 0;
    double max_residual = 0.0;
    double tolerance = 1e-9;
    bool pass = true;
    Point worst_point;
    std::string note;
    // supporting reports, e.g. the hypotheses behind a composite certificate
    std::vector<ResidualReport> details;
};

// ||L - R||_F / max(||L||, ||R||, 1)
inline double relative_residual(const Mat& L, const Mat& R) {
    double den = std::max({L.norm(), R.norm(), 1.0});
    return (L - R).norm() / den;
}

inline ResidualReport make_report(std::string name, double tol) {
    ResidualReport r;
    r.check_name = std::move(name);
    r.tolerance = tol;
    return r;
}

inline void record(ResidualReport& r, double value, const Point& p) {
    if (r.samples == 0 || value > r.max_residual || std::isnan(value)) {
        r.max_residual = std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
        r.worst_point = p;
    }
    ++r.samples;
    r.pass = r.max_residual <= r.tolerance;
}

template <class F>
ResidualReport check_points(std::string name, const std::vector<Point>& pts, double tol, F&& residual_at) {
    ResidualReport r = make_report(std::move(name), tol);
    for (const auto& p : pts) record(r, residual_at(p), p);
    if (r.samples == 0) throw Error("check '" + r.check_name + "' had no samples");
    return r;
}

// Compares two dynamical matrices on the union of their legs.
inline ResidualReport check_equal(std::string name, const DynMat& L, const DynMat& R, const std::vector<Point>& pts,
                                  double tol) {
    Legs legs = union_legs(L.legs(), R.legs());
    const int n = L.rank();
    return check_points(std::move(name), pts, tol, [&](const Point& p) {
        return relative_residual(place(L(p), n, L.legs(), legs), place(R(p), n, R.legs(), legs));
    });
}

inline ResidualReport worst_of(std::string name, const std::vector<ResidualReport>& rs) {
    if (rs.empty()) throw Error("worst_of: no reports");
    ResidualReport out = make_report(std::move(name), rs.front().tolerance);
    out.pass = true;
    for (const auto& r : rs) {
        if (out.samples == 0 || r.max_residual > out.max_residual) {
            out.max_residual = r.max_residual;
            out.worst_point = r.worst_point;
        }
        out.samples = std::max(out.samples, r.samples);
        out.pass = out.pass && r.pass;
    }
    out.details = rs;
    return out;
}

} // namespace sdra
