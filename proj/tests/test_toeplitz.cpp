#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "toepexp/toeplitz.hpp"

using namespace toepexp;

TEST_CASE("make_toeplitz builds the dense layout and validates input") {
    Vec c(3), r(3);
    c << 1, 0, 0;
    r << 1, 0, 0;
    CHECK(make_toeplitz(c, r).dense() == Mat::Identity(3, 3));

    Vec c2(2), r2(2);
    c2 << 1, 2;
    r2 << 1, 3;
    Mat expect(2, 2);
    expect << 1, 3, 2, 1;
    CHECK(make_toeplitz(c2, r2).dense() == expect);

    Vec bad(2);
    bad << 5, 3;
    CHECK_THROWS_AS(make_toeplitz(c2, bad), std::invalid_argument);
    CHECK_THROWS_AS(make_toeplitz(c2, r), DimensionError);
    CHECK_THROWS_AS(make_toeplitz(Vec(), Vec()), DimensionError);

    const auto t = oracle::random_toeplitz(7);
    CHECK((t.dense() - oracle::dense_toeplitz(t.col(), t.row())).norm() == 0.0);
}

TEST_CASE("toeplitz_matvec matches dense products") {
    Vec x = oracle::randvec(4);
    CHECK((toeplitz_matvec(identity_toeplitz(4), x) - x).norm() < 1e-15);

    Vec c(2), r(2);
    c << 1, 2;
    r << 1, 3;
    Vec ones = Vec::Ones(2);
    Vec y = toeplitz_matvec(make_toeplitz(c, r), ones);
    CHECK(std::abs(y(0) - cplx(4.0)) < 1e-14);
    CHECK(std::abs(y(1) - cplx(3.0)) < 1e-14);

    for (Index n : {8, 64, 512}) {
        const auto t = oracle::random_toeplitz(n);
        const Mat d = t.dense();
        Vec v = oracle::randvec(n);
        Vec ref = d * v;
        Vec got = toeplitz_matvec(t, v);
        CHECK((got - ref).norm() <= 100 * unit_roundoff * n * d.norm() * v.norm());
        CHECK((got - ref).norm() / ref.norm() < 1e-12);
        Vec adj = toeplitz_matvec(t, v, true);
        CHECK((adj - d.adjoint() * v).norm() / v.norm() / d.norm() < 1e-13);
    }
}

TEST_CASE("copies share the circulant plan; block products match columnwise") {
    const auto t = oracle::random_toeplitz(33);
    const auto copy = t;
    CHECK(&t.plan() == &copy.plan());
    CHECK(t.plan().m == 128);
    Mat x = oracle::randn(33, 3);
    Mat y = toeplitz_matvec(t, x);
    for (Index j = 0; j < 3; ++j) CHECK((y.col(j) - toeplitz_matvec(t, Vec(x.col(j)))).norm() < 1e-12);
}

TEST_CASE("adjoint, scaled and shifted Toeplitz matrices") {
    const auto t = oracle::random_toeplitz(6);
    CHECK((t.adjoint().dense() - t.dense().adjoint()).norm() == 0.0);
    CHECK((t.scaled(cplx(0, 2)).dense() - cplx(0, 2) * t.dense()).norm() < 1e-14);
    CHECK((t.shifted(3.0).dense() - (t.dense() + 3.0 * Mat::Identity(6, 6))).norm() < 1e-14);
    CHECK_FALSE(t.is_real());
    CHECK(oracle::random_toeplitz(6, true).is_real());
}

TEST_CASE("norm1 equals the dense column-sum maximum") {
    CHECK(norm1(identity_toeplitz(5)) == 1.0);
    Vec c(2), r(2);
    c << 1, 2;
    r << 1, 3;
    CHECK(norm1(make_toeplitz(c, r)) == doctest::Approx(4.0));

    const auto big = oracle::random_toeplitz(1000);
    const double ref = oracle::norm1(big.dense());
    CHECK(std::abs(norm1(big) - ref) / ref < 1e-14);

    for (int k = 0; k < 100; ++k) {
        const auto t = oracle::random_toeplitz(1 + k % 23, k % 2 == 0);
        const double d = oracle::norm1(t.dense());
        CHECK(std::abs(norm1(t) - d) <= 1e-14 * d);
    }
}

TEST_CASE("norm2_estimate is a lower bound close to the spectral norm") {
    CHECK(norm2_estimate(make_toeplitz(Vec::Zero(8), Vec::Zero(8))) == 0.0);

    const Index n = 16;
    Vec c = Vec::Zero(n);
    c(0) = 2.0;
    c(1) = -1.0;
    const auto tri = make_toeplitz(c, c);
    const double exact = 2.0 - 2.0 * std::cos(16.0 * M_PI / 17.0);
    Eigen::SelfAdjointEigenSolver<RMat> es(tri.dense().real());
    CHECK(std::abs(es.eigenvalues().maxCoeff() - exact) < 1e-12);
    CHECK(std::abs(norm2_estimate(tri, 200, 1e-10) - exact) / exact < 0.01);

    const auto t = oracle::random_toeplitz(256);
    const double s = oracle::norm2(t.dense());
    const double est = norm2_estimate(t, 50, 0.0);
    CHECK(est <= s * (1 + 1e-12));
    CHECK(est >= 0.95 * s);

    for (int k = 0; k < 10; ++k) {
        const auto tk = oracle::random_toeplitz(20 + k);
        CHECK(norm2_estimate(tk) <= oracle::norm2(tk.dense()) * (1 + 1e-12));
    }
}
