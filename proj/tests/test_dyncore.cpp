#include "catch_amalgamated.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "support.hpp"

using namespace sdra;
using namespace testing_support;
using Catch::Matchers::WithinAbs;

namespace {

Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

Mat kron3(const Mat& a, const Mat& b, const Mat& c) { return kron(kron(a, b), c); }

// basis vector index of x (x) y (x) z
int idx3(int n, int x, int y, int z) { return (x * n + y) * n + z; }

DynMat random_dyn(const WeightScheme& s, Legs legs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int d = ipow(s.rank, static_cast<int>(legs.size()));
    Mat M0 = random_matrix(d, rng), M1 = random_matrix(d, rng), M2 = random_matrix(d, rng);
    return DynMat(s, legs, [M0, M1, M2](const Point& p) {
        return Mat(M0 + p.lambda(0) * M1 + std::exp(0.3 * p.lambda(1)) * M2);
    });
}

} // namespace

TEST_CASE("eval returns identity, yangian and diagonal values", "[dyncore]") {
    auto s = scheme(2);
    Point p(vec({3.0, 1.0}), {0.0, 2.0, 0.0});
    CHECK(eval_dynmat(identity(s, {1}), vec({0.4, 0.1}), {}).isApprox(Mat::Identity(2, 2)));

    Mat expected(4, 4);
    expected << 1.5, 0, 0, 0, 0, 1, 0.5, 0, 0, 0.5, 1, 0, 0, 0, 0, 1.5;
    CHECK(eval_dynmat(yangian(s), vec({0.0, 0.0}), {0.0, 2.0, 0.0}).isApprox(expected));

    DynMat b = diag_fn(s, [](const Vec& l, int i) { return l(i); });
    Mat d = eval_dynmat(b, vec({3.0, 1.0}), {});
    CHECK(d.isApprox((Mat(2, 2) << 3, 0, 0, 1).finished()));
}

TEST_CASE("eval reports missing spectral values and poles", "[dyncore]") {
    auto s = scheme(2);
    CHECK_THROWS_WITH(eval_dynmat(yangian(s), vec({0.0, 0.0}), {0.0, 1.0}), Catch::Matchers::ContainsSubstring("leg 2"));
    CHECK_THROWS_AS(eval_dynmat(yangian(s), vec({0.0, 0.0}), {0.0, 1.0, 1.0}), PoleError);
}

TEST_CASE("permutation operator", "[dyncore]") {
    Mat P2(4, 4);
    P2 << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1;
    CHECK(permutation_operator(2) == P2);
    Mat P3 = permutation_operator(3);
    CHECK((P3 * P3).isApprox(Mat::Identity(9, 9)));
    CHECK(std::abs(P2.trace() - 2.0) < 1e-15);
    CHECK(std::abs(P3.trace() - 3.0) < 1e-15);
    CHECK_THROWS_AS(permutation_operator(1), Error);
    // P (x (x) y) = y (x) x
    std::mt19937_64 rng(3);
    Vec x = random_matrix(3, rng).col(0), y = random_matrix(3, rng).col(0);
    CHECK((P3 * Vec(kron(x, y))).isApprox(Vec(kron(y, x))));
}

TEST_CASE("embed places matrices on the requested legs", "[dyncore]") {
    auto s = scheme(2);
    Point p(vec({0.1, 0.2}));
    CHECK(embed(identity(s, {1}), {2}, {1, 2, 3})(p).isApprox(Mat::Identity(8, 8)));

    Mat M = embed(constant(s, permutation_operator(2), {1, 2}), {1, 3}, {1, 2, 3})(p);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) {
                Vec e = Vec::Zero(8);
                e(idx3(2, x, y, z)) = 1.0;
                Vec r = M * e;
                CHECK(std::abs(r(idx3(2, z, y, x)) - 1.0) < 1e-15);
                CHECK(std::abs(r.sum() - 1.0) < 1e-15);
            }

    // one leg matrices against the Kronecker oracle
    std::mt19937_64 rng(11);
    Mat X = random_matrix(2, rng);
    Mat I = Mat::Identity(2, 2);
    CHECK(embed(constant(s, X, {1}), {2}, {1, 2, 3})(p).isApprox(kron3(I, X, I)));
    CHECK(embed(constant(s, X, {1}), {3}, {1, 2, 3})(p).isApprox(kron3(I, I, X)));

    // disjoint embeddings commute
    Mat A = random_matrix(4, rng), B = random_matrix(4, rng);
    Legs all{1, 2, 3, 4};
    Mat EA = embed(constant(s, A, {1, 2}), {1, 2}, all)(p), EB = embed(constant(s, B, {1, 2}), {3, 4}, all)(p);
    CHECK((EA * EB).isApprox(EB * EA));
    CHECK((EA * EB).isApprox(kron(A, B)));

    CHECK_THROWS_AS(embed(constant(s, X, {1}), {5}, {1, 2, 3}), Error);
    CHECK_THROWS_AS(embed(constant(s, X, {1}), {1, 2}, {1, 2, 3}), Error);
}

TEST_CASE("dyn_shift follows the weight-projector resolution", "[dyncore]") {
    auto s = scheme(2);
    DynMat X = diag_fn(s, [](const Vec& l, int) { return l(0); });
    Mat got = dyn_shift(X, {2})(Point(vec({0.0, 0.0})));
    CHECK(got.isApprox(Mat(Vec(vec({1.0, 0.0, 1.0, 0.0})).asDiagonal())));

    // constant matrices are unaffected
    std::mt19937_64 rng(5);
    Mat C = random_matrix(2, rng);
    Point p(vec({0.3, -0.4}));
    CHECK(dyn_shift(constant(s, C, {1}), {2, 3})(p).isApprox(kron3(C, Mat::Identity(2, 2), Mat::Identity(2, 2))));

    // nested-sum oracle for a double shift
    DynMat Y = random_dyn(s, {1}, 17);
    DynMat S23 = dyn_shift(Y, {2, 3});
    for (const auto& q : points(s, 20)) {
        Mat oracle = Mat::Zero(8, 8);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                oracle += kron3(Y(q.shifted({i, j}, 1.0)), elementary(2, i, i), elementary(2, j, j));
        CHECK(relative_residual(S23(q), oracle) < 1e-14);
        CHECK(relative_residual(S23(q), dyn_shift(dyn_shift(Y, {2}), {3})(q)) < 1e-14);
    }

    // shifting by a leg the matrix acts on
    DynMat Z = random_dyn(s, {1, 2}, 23);
    for (const auto& q : points(s, 5)) {
        Mat oracle = Mat::Zero(4, 4);
        for (int i = 0; i < 2; ++i)
            oracle += Z(q.shifted({i}, 1.0)) * kron(Mat::Identity(2, 2), elementary(2, i, i));
        CHECK(relative_residual(dyn_shift(Z, {2})(q), oracle) < 1e-14);
    }
}

TEST_CASE("dyn_shift commutes with embedding", "[dyncore]") {
    auto s = scheme(3);
    DynMat X = random_dyn(s, {1}, 31);
    for (const auto& q : points(s, 5)) {
        Mat a = embed(dyn_shift(X, {3}), {1, 3}, {1, 2, 3})(q);
        Mat b = dyn_shift(embed(X, {1}, {1, 2}), {3})(q);
        CHECK(relative_residual(a, b) < 1e-14);
    }
}

TEST_CASE("pi transpose", "[dyncore]") {
    auto s = scheme(2);
    Point p(vec({0.0, 0.0}), {0.0, 0.4, -0.3});
    DynMat X = constant(s, kron(elementary(2, 0, 0), elementary(2, 1, 1)), {1, 2});
    CHECK(pi_transpose(X)(p).isApprox(kron(elementary(2, 1, 1), elementary(2, 0, 0))));

    DynMat Y = random_dyn(s, {1, 2}, 41);
    for (const auto& q : points(s, 5)) CHECK(relative_residual(pi_transpose(pi_transpose(Y))(q), Y(q)) < 1e-15);

    DynMat b = test_b(s);
    auto fam = build_b_family(b);
    DynMat B = constant(s, Mat::Zero(4, 4), {1, 2});
    for (int i = 0; i < 2; ++i) B = B + constant(s, elementary(2, i, i), {1}) * on(fam[i], {2});
    for (const auto& q : points(s, 5)) {
        Mat oracle = Mat::Zero(4, 4);
        for (int i = 0; i < 2; ++i) oracle += kron(fam[i](q), elementary(2, i, i));
        CHECK(relative_residual(pi_transpose(B)(q), oracle) < 1e-14);
    }

    // spectral slots follow the legs
    DynMat U = DynMat(s, {1, 2}, [](const Point& q) { return Mat(Mat::Identity(4, 4) * q.get_u(1)); }, {1});
    CHECK(std::abs(pi_transpose(U)(p)(0, 0) - cplx(-0.3)) < 1e-15);
    CHECK_THROWS_AS(pi_transpose(identity(s, {1})), Error);
}

TEST_CASE("automorphism actions", "[dyncore]") {
    auto s = scheme(2);
    DynMat R = yangian(s);
    auto pts = points(s, 20);
    for (const auto& q : pts) CHECK(adjoint_auto(R, Automorphism::identity(), {1, 2}, Side::Conjugate, 3)(q) == R(q));

    auto shift = Automorphism::spectral_shift(1.0);
    for (const auto& q : pts)
        CHECK(relative_residual(adjoint_auto(R, shift, {1, 2}, Side::Conjugate, 1)(q), R(q)) < 1e-15);

    auto g = Automorphism::constant((Mat(2, 2) << 2, 0, 0, 1).finished());
    DynMat X = constant(s, kron(elementary(2, 0, 1), Mat::Identity(2, 2)), {1, 2});
    Point p(vec({0.0, 0.0}));
    CHECK(adjoint_auto(X, g, {1}, Side::Conjugate, 1)(p).isApprox(2.0 * X(p)));

    // powers compose
    std::mt19937_64 rng(2);
    auto h = Automorphism::constant(random_matrix(2, rng) + 3.0 * Mat::Identity(2, 2));
    DynMat Y = random_dyn(s, {1, 2}, 3);
    for (const auto& q : points(s, 5)) {
        Mat a = adjoint_auto(adjoint_auto(Y, h, {1, 2}, Side::Conjugate, 2), h, {1, 2}, Side::Conjugate, -3)(q);
        Mat b = adjoint_auto(Y, h, {1, 2}, Side::Conjugate, -1)(q);
        CHECK(relative_residual(a, b) < 1e-12);
    }

    // spectral shifts move the slot argument
    DynMat U = DynMat(s, {1}, [](const Point& q) { return Mat(Mat::Identity(2, 2) * q.get_u(1)); }, {1});
    Point pu(vec({0.0, 0.0}), {0.0, 0.5});
    CHECK(std::abs(adjoint_auto(U, Automorphism::spectral_shift(0.25), {1}, Side::Conjugate, 2)(pu)(0, 0) - 1.0) < 1e-15);
    CHECK_THROWS_AS(adjoint_auto(U, shift, {1}, Side::Left, 1), Error);
    CHECK_THROWS_AS(adjoint_auto(U, g, {2}, Side::Conjugate, 1), Error);
}

TEST_CASE("sigma powers", "[dyncore]") {
    auto s = scheme(2);
    auto g = Automorphism::constant((Mat(2, 2) << 4, 0, 0, 1).finished());
    Automorphism half = sigma_power(g, vec({0.25, 0.25}), s);
    CHECK(half.matrix().isApprox((Mat(2, 2) << 2, 0, 0, 1).finished()));
    CHECK(sigma_power(Automorphism::identity(), vec({0.7, 2.0}), s).is_identity());

    // sigma = 1 reproduces g
    std::mt19937_64 rng(9);
    Mat G = random_matrix(2, rng) + 4.0 * Mat::Identity(2, 2);
    CHECK(sigma_power(Automorphism::constant(G), vec({0.4, 0.6}), s).matrix().isApprox(G, 1e-12));

    // spectral shift raised to sigma = 2 leaves a difference-form matrix invariant
    auto sh = sigma_power(Automorphism::spectral_shift(1.0), vec({1.5, 0.5}), s);
    CHECK(sh.kind() == AutoKind::SpectralShift);
    CHECK(std::abs(sh.step() - 2.0) < 1e-15);
    DynMat R = yangian(s);
    for (const auto& q : points(s, 20))
        CHECK(relative_residual(adjoint_sigma(R, Automorphism::spectral_shift(1.0), {1, 2}, -1)(q), R(q)) < 1e-15);

    // the sigma exponent scales with 1/gamma
    auto s2 = scheme(2, 0.5);
    auto g2 = Automorphism::constant((Mat(2, 2) << 2, 0, 0, 1).finished());
    Mat m = sigma_matrix(s2, g2, +1)(Point(vec({0.25, 0.25})));
    CHECK(std::abs(m(0, 0) - 2.0) < 1e-14);
}

TEST_CASE("sigma and theta coordinates", "[dyncore]") {
    auto st = sigma_theta(vec({3.0, 1.0}));
    CHECK(std::abs(st.sigma - 4.0) < 1e-15);
    CHECK(std::abs(st.theta(0) - 2.0) < 1e-15);
    auto z = sigma_theta(vec({0.0, 0.0}));
    CHECK(std::abs(z.sigma) == 0.0);
    CHECK(std::abs(z.theta(0)) == 0.0);
    auto s = scheme(3);
    for (const auto& q : points(s, 20)) {
        Vec back = lambda_from_sigma_theta(sigma_theta(q.lambda));
        CHECK((back - q.lambda).norm() < 1e-14);
    }
}

TEST_CASE("zero-weight decomposition", "[dyncore]") {
    auto s = scheme(2);
    auto pts = points(s, 10);
    auto parts = decompose_zero_weight(identity(s, {1, 2}), pts);
    Point p(vec({0.0, 0.0}), {0.0, 2.0, 0.0});
    CHECK(parts.d(p).isApprox(Mat::Ones(2, 2)));
    CHECK(parts.delta(p).norm() == 0.0);

    auto yp = decompose_zero_weight(yangian(s), pts);
    Mat d = yp.d(p), t = yp.delta(p);
    CHECK(std::abs(d(0, 0) - 1.5) < 1e-15);
    CHECK(std::abs(d(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(t(0, 1) - 0.5) < 1e-15);
    CHECK(std::abs(t(0, 0)) == 0.0);

    CHECK_THROWS_AS(decompose_zero_weight(constant(s, kron(elementary(2, 0, 1), elementary(2, 0, 0)), {1, 2}), pts),
                    Error);

    // reassembly of a zero-weight matrix built from the twist of a Yangian
    auto s3 = scheme(3);
    DynMat D = build_D_twist(yangian(s3), test_k(s3));
    auto pts3 = points(s3, 10);
    auto zp = decompose_zero_weight(D, pts3);
    for (const auto& q : pts3) CHECK(relative_residual(reassemble_zero_weight(zp.d(q), zp.delta(q)), D(q)) < 1e-13);
}

TEST_CASE("sampler", "[dyncore]") {
    auto s = scheme(2);
    SamplerConfig cfg;
    cfg.count = 30;
    cfg.seed = 99;
    auto a = sample_points(cfg, s, 3), b = sample_points(cfg, s, 3);
    REQUIRE(a.size() == 30);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].lambda == b[i].lambda);
        for (int l = 0; l <= 3; ++l) CHECK(a[i].get_u(l) == b[i].get_u(l));
        for (int l = 0; l <= 3; ++l)
            for (int m = l + 1; m <= 3; ++m) CHECK(std::abs(a[i].get_u(l) - a[i].get_u(m)) >= cfg.min_separation);
        CHECK(std::abs(a[i].lambda(0) - a[i].lambda(1)) >= cfg.min_separation);
    }
    cfg.min_separation = 10.0;
    cfg.retry_cap = 50;
    CHECK_THROWS_WITH(sample_points(cfg, s, 3), Catch::Matchers::ContainsSubstring("retry cap"));

    // pole predicates are honored
    SamplerConfig c2;
    c2.count = 200;
    auto pts = sample_points(c2, s, 3, {yangian(s)});
    for (const auto& q : pts) CHECK(std::abs(q.get_u(1) - q.get_u(2)) > c2.min_separation);
}
