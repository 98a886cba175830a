#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace sdra {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Legs = std::vector<int>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation hit a singular point; carries a readable description of it.
struct PoleError : Error {
    using Error::Error;
};

struct WeightScheme {
    int rank = 2;
    cplx gamma = 1.0;

    WeightScheme() = default;
    WeightScheme(int n, cplx g) : rank(n), gamma(g) {
        if (n < 1) throw Error("weight scheme: rank must be positive");
        if (g == cplx(0.0)) throw Error("weight scheme: gamma must be non-zero");
    }

    // e_ii on V
    Mat projector(int i) const {
        Mat m = Mat::Zero(rank, rank);
        m(i, i) = 1.0;
        return m;
    }
};

// A dynamical point together with the spectral values visible to it.
// u is indexed by leg identifier.
struct Point {
    Vec lambda;
    std::vector<std::optional<cplx>> u;

    Point() = default;
    explicit Point(Vec lam) : lambda(std::move(lam)) {}
    Point(Vec lam, const std::vector<cplx>& us) : lambda(std::move(lam)) {
        for (auto v : us) u.emplace_back(v);
    }

    bool has_u(int leg) const {
        return leg >= 0 && leg < static_cast<int>(u.size()) && u[leg].has_value();
    }
    cplx get_u(int leg) const {
        if (!has_u(leg)) throw Error("missing spectral value for leg " + std::to_string(leg));
        return *u[leg];
    }
    void set_u(int leg, cplx v) {
        if (leg >= static_cast<int>(u.size())) u.resize(leg + 1);
        u[leg] = v;
    }
    Point shifted(const std::vector<int>& idx, cplx gamma) const {
        Point p = *this;
        for (int i : idx) p.lambda(i) += gamma;
        return p;
    }
};

inline std::string describe(const Point& p) {
    std::string s = "lambda=(";
    for (int i = 0; i < p.lambda.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(p.lambda(i).real()) + (p.lambda(i).imag() < 0 ? "" : "+") +
             std::to_string(p.lambda(i).imag()) + "i";
    }
    s += ") u=(";
    bool first = true;
    for (std::size_t l = 0; l < p.u.size(); ++l) {
        if (!p.u[l]) continue;
        if (!first) s += ", ";
        first = false;
        s += "u" + std::to_string(l) + "=" + std::to_string(p.u[l]->real()) +
             (p.u[l]->imag() < 0 ? "" : "+") + std::to_string(p.u[l]->imag()) + "i";
    }
    return s + ")";
}

inline int ipow(int base, int e) {
    int r = 1;
    while (e-- > 0) r *= base;
    return r;
}

} // namespace sdra
