#include "doctest.h"

#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "toepexp/solver.hpp"

using namespace toepexp;

namespace {

// Z_delta = Z + delta e_1 e_n^*
Mat z_delta(Index n, double delta) {
    Mat z = oracle::down_shift(n);
    z(0, n - 1) = delta;
    return z;
}

Mat sylvester_displacement(const Mat& a) {
    const Index n = a.rows();
    return z_delta(n, 1.0) * a - a * z_delta(n, -1.0);
}

// Explicit unitary DFT and the scaled DFT used for the column transform.
Mat dft_matrix(Index n) {
    Mat f(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k)
            f(j, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(n)) /
                      std::sqrt(static_cast<double>(n));
    return f;
}

Mat scaled_dft_matrix(Index n) {
    Mat q = dft_matrix(n);
    for (Index k = 0; k < n; ++k)
        q.col(k) *= std::polar(1.0, std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    return q;
}

// exact generator of a dense matrix from the SVD of its displacement
Generator dense_generator(const Mat& a) {
    Eigen::JacobiSVD<Mat> svd(oracle::stein_displacement(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
    return Generator(svd.matrixU() * svd.singularValues().cast<cplx>().asDiagonal(), svd.matrixV());
}

Vec dense_last_row(const Mat& a) { return a.row(a.rows() - 1).transpose(); }

} // namespace

TEST_CASE("Stein to Sylvester conversion") {
    const Index n = 12;
    const SylvesterGenerator zero = stein_to_sylvester(Generator::zero(n, 2), Vec::Zero(n), Vec::Zero(n));
    CHECK((zero.Gs * zero.Bs.adjoint()).norm() == 0.0);

    const Mat a = oracle::randn(n, n);
    const Generator gen = dense_generator(a);
    const SylvesterGenerator sg = stein_to_sylvester(gen, a.col(n - 1), dense_last_row(a));
    CHECK(sg.length() == gen.length() + 2);
    const Mat ref = sylvester_displacement(a);
    CHECK((sg.Gs * sg.Bs.adjoint() - ref).norm() <= n * unit_roundoff * a.norm() * 50);

    // last row/column through fast products
    const SylvesterGenerator sf = stein_to_sylvester(gen);
    CHECK((sf.Gs * sf.Bs.adjoint() - ref).norm() <= 1e-12 * a.norm());

    const auto t = oracle::random_toeplitz(20);
    const SylvesterGenerator st = stein_to_sylvester(toeplitz_generator(t));
    CHECK(numerical_rank(Mat(st.Gs * st.Bs.adjoint()), 1e-12) <= 2);
    CHECK((st.Gs * st.Bs.adjoint() - sylvester_displacement(t.dense())).norm() < 1e-12 * t.dense().norm());
}

TEST_CASE("Sylvester to Cauchy transform") {
    SylvesterGenerator zero{Mat::Zero(6, 2), Mat::Zero(6, 2)};
    const CauchyLikeSystem cz = sylvester_to_cauchy(zero);
    CHECK(cz.Gc.norm() == 0.0);
    CHECK(cz.Bc.norm() == 0.0);

    for (Index n : {8, 9, 64}) {
        const auto t = oracle::random_toeplitz(n);
        const CauchyLikeSystem cls = sylvester_to_cauchy(stein_to_sylvester(toeplitz_generator(t)));
        for (Index i = 0; i < n; ++i) {
            CHECK(std::abs(std::abs(cls.d1(i)) - 1.0) < 1e-15);
            CHECK(std::abs(std::abs(cls.d2(i)) - 1.0) < 1e-15);
        }
        const Mat c = cls.dense();
        const Mat ref = dft_matrix(n) * t.dense() * scaled_dft_matrix(n).adjoint();
        CHECK((c - ref).norm() <= 1e-11 * ref.norm());

        const Mat d1c = cls.d1.asDiagonal() * c;
        const Mat cd2 = c * cls.d2.asDiagonal();
        CHECK((d1c - cd2 - cls.Gc * cls.Bc.adjoint()).norm() <= 10 * n * unit_roundoff * c.norm());
    }
}

TEST_CASE("GKO solves Cauchy-like systems") {
    // identity Toeplitz induces a system whose solve returns the rhs
    const Mat rhs = oracle::randn(16, 2);
    CHECK((tl_solve(identity_toeplitz(16), rhs) - rhs).norm() < 1e-13 * rhs.norm());

    // rank one Cauchy matrix with real nodes
    const Index n = 16;
    CauchyLikeSystem cls;
    cls.d1.resize(n);
    cls.d2.resize(n);
    for (Index i = 0; i < n; ++i) {
        cls.d1(i) = static_cast<double>(i);
        cls.d2(i) = static_cast<double>(i) + 0.5;
    }
    cls.Gc = oracle::randn(n, 1, true);
    cls.Bc = oracle::randn(n, 1, true);
    Mat c(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) c(i, j) = cls.Gc(i, 0) * std::conj(cls.Bc(j, 0)) / (cls.d1(i) - cls.d2(j));
    CHECK((cls.dense() - c).norm() < 1e-14 * c.norm());
    const Mat b = oracle::randn(n, 2);
    const Mat x_ref = c.fullPivLu().solve(b);
    const Mat x = gko_solve(cls, b);
    CHECK((x - x_ref).norm() <= 1e-10 * x_ref.norm());

    // permutation and packed factors reproduce P C = L U
    const CauchyLikeLU lu = gko_factor(cls);
    const Mat& packed = lu.packed_lu();
    Mat l = packed.triangularView<Eigen::UnitLower>();
    Mat u = packed.triangularView<Eigen::Upper>();
    Mat pc(n, n), pb(n, 2);
    for (Index i = 0; i < n; ++i) {
        pc.row(i) = c.row(lu.permutation()[static_cast<std::size_t>(i)]);
        pb.row(i) = b.row(lu.permutation()[static_cast<std::size_t>(i)]);
    }
    CHECK((l * u - pc).norm() <= 1e-12 * c.norm());
    const Mat y = u.triangularView<Eigen::Upper>().solve(l.triangularView<Eigen::UnitLower>().solve(pb));
    CHECK((y - x).norm() <= 1e-10 * x.norm());
    CHECK((lu.solve_adjoint(b) - c.adjoint().fullPivLu().solve(b)).norm() <= 1e-10 * x_ref.norm());

    std::ostringstream csv;
    write_pivot_csv(csv, lu);
    CHECK(csv.str().rfind("step,row,magnitude,scale\n", 0) == 0);
    CHECK(lu.pivots().size() == static_cast<std::size_t>(n));
}

TEST_CASE("Toeplitz solves: residuals and dense agreement") {
    const auto t = oracle::random_toeplitz(256);
    const Mat b = oracle::randn(256, 3);
    const Mat x = tl_solve(t, b);
    const Mat r = toeplitz_matvec(t, x) - b;
    const double tn = oracle::norm2(t.dense());
    CHECK(r.norm() / (tn * x.norm()) <= 1e-12);

    const Mat xa = tl_solve(t, b, true);
    CHECK((toeplitz_matvec(t, xa, true) - b).norm() / (tn * xa.norm()) <= 1e-12);

    // round trip through the transform against a dense solve
    const auto t32 = oracle::random_toeplitz(32);
    const Mat b32 = oracle::randn(32, 2);
    const Mat x32 = t32.dense().partialPivLu().solve(b32);
    CHECK((tl_solve(t32, b32) - x32).norm() <= 1e-11 * x32.norm());
    CHECK((tl_solve(toeplitz_generator(t32), b32) - x32).norm() <= 1e-11 * x32.norm());

    // tridiagonal (2, -1), rhs = e1
    const Index n = 100;
    Vec c = Vec::Zero(n);
    c(0) = 2.0;
    c(1) = -1.0;
    const auto tri = make_toeplitz(c, c);
    Mat e1 = Mat::Zero(n, 1);
    e1(0, 0) = 1.0;
    const Mat xt = tri.dense().partialPivLu().solve(e1);
    CHECK((tl_solve(tri, e1) - xt).norm() <= 1e-10 * xt.norm());
}

TEST_CASE("ill-conditioned Toeplitz: forward error comparable to dense elimination") {
    const Index n = 64;
    Vec c(n);
    for (Index k = 0; k < n; ++k) c(k) = std::exp(-0.12 * static_cast<double>(k * k));
    const auto t = make_toeplitz(c, c);
    const Mat xt = oracle::randn(n, 1, true);
    const Mat b = t.dense() * xt;
    const double dense_err = (t.dense().partialPivLu().solve(b) - xt).norm() / xt.norm();
    const double plain_err = (tl_solve(t, b) - xt).norm() / xt.norm();
    GkoOptions ortho;
    ortho.reorthogonalize = true;
    const double gko_err = (tl_solve(t, b, false, ortho) - xt).norm() / xt.norm();
    MESSAGE("dense forward error " << dense_err << ", structured " << gko_err << " (without re-orthogonalization "
                                   << plain_err << ")");
    CHECK(dense_err > 1e-12);
    CHECK(gko_err <= 100.0 * dense_err);
}

TEST_CASE("Toeplitz-like solve through a generator") {
    const Index n = 128;
    Generator gen = oracle::random_generator(n, 6);
    const Mat a = reconstruct(gen);
    const Mat b = oracle::randn(n, 2);
    const Mat x = tl_solve(gen, b);
    const Mat r = tl_matvec(gen, x) - b;
    CHECK(r.norm() / (oracle::norm2(a) * x.norm()) <= 1e-11);
    const Mat xa = tl_solve(gen, b, true);
    CHECK((a.adjoint() * xa - b).norm() / (oracle::norm2(a) * xa.norm()) <= 1e-11);
}

TEST_CASE("singular systems raise with a step index") {
    Vec c = Vec::Zero(8);
    c(1) = 1.0; // nilpotent down-shift
    const auto z = make_toeplitz(c, Vec::Zero(8));
    // rounding may leave a last pivot just above the threshold; the solution
    // then blows up instead
    try {
        const Mat x = tl_solve(z, Mat::Ones(8, 1));
        CHECK(x.norm() > 1e12);
    } catch (const SingularSystemError& e) {
        CHECK(e.step() >= 0);
        CHECK(e.condition_estimate() > 1e12);
    }
    CHECK_THROWS_AS(tl_solve(make_toeplitz(Vec::Zero(5), Vec::Zero(5)), Mat::Ones(5, 1)), SingularSystemError);
}

TEST_CASE("one refinement sweep brings the backward error to the unit roundoff") {
    const Index n = 512;
    Vec c = Vec::Zero(n);
    c(0) = -6.125;
    c(1) = 1.0 / 16;
    const auto t = make_toeplitz(c, c);
    const Mat b = oracle::randn(n, 2);
    GkoOptions plain;
    plain.refinement_steps = 0;
    const Mat x0 = tl_solve(t, b, false, plain);
    const Mat x1 = tl_solve(t, b);
    const Mat d = t.dense();
    const double r0 = (d * x0 - b).norm() / b.norm();
    const double r1 = (d * x1 - b).norm() / b.norm();
    CHECK(r1 <= 10 * unit_roundoff);
    CHECK(r1 <= r0);
    const Mat xa = tl_solve(t, b, true);
    CHECK((d.adjoint() * xa - b).norm() / b.norm() <= 10 * unit_roundoff);
}
