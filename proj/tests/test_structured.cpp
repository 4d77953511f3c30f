#include "doctest.h"

#include "oracles.hpp"
#include "toepexp/structured.hpp"

using namespace toepexp;

namespace {

Mat z_minus_i(Index n) { return oracle::down_shift(n) - Mat::Identity(n, n); }

Mat dense_poly(const Mat& a, const Polynomial& p) {
    const Index n = a.rows();
    Mat acc = Mat::Zero(n, n);
    for (int k = static_cast<int>(p.coeffs.size()) - 1; k >= 0; --k)
        acc = a * acc + p.coeffs[static_cast<std::size_t>(k)] * Mat::Identity(n, n);
    return acc;
}

Mat e1(Index n) {
    Mat e = Mat::Zero(n, 1);
    e(0, 0) = 1.0;
    return e;
}

Polynomial random_poly(int degree) {
    Vec c = oracle::randvec(degree + 1) * 0.5;
    return Polynomial(std::vector<cplx>(c.data(), c.data() + c.size()));
}

// (Z - I)^{-1} explicitly: minus the lower triangular all-ones matrix.
Mat z_minus_i_inverse(Index n) {
    Mat l = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j <= i; ++j) l(i, j) = -1.0;
    return l;
}

} // namespace

TEST_CASE("shifted similarity") {
    const Index n = 16;
    const Mat x = oracle::randn(n, 3);
    CHECK((apply_shifted_similarity(LinearOperator::identity(n), x) - x).norm() < 1e-13 * x.norm());

    CHECK((z_minus_i(n) * z_minus_i_inverse(n) - Mat::Identity(n, n)).norm() == 0.0);
    const auto t = oracle::random_toeplitz(n);
    const Mat ref = z_minus_i(n) * t.dense() * z_minus_i_inverse(n) * x;
    const LinearOperator op = LinearOperator::from(t);
    CHECK((apply_shifted_similarity(op, x) - ref).norm() < 1e-12 * ref.norm());
    const Mat refa = z_minus_i(n) * t.dense().adjoint() * z_minus_i_inverse(n) * x;
    CHECK((apply_shifted_similarity(op, x, true) - refa).norm() < 1e-12 * refa.norm());

    // twice equals the similarity of T^2
    const Mat t2 = t.dense() * t.dense();
    const LinearOperator op2{n, [&](const Mat& v) { return Mat(t2 * v); }, [&](const Mat& v) { return Mat(t2.adjoint() * v); }};
    const Mat twice = apply_shifted_similarity(op, apply_shifted_similarity(op, x));
    const Mat once = apply_shifted_similarity(op2, x);
    CHECK((twice - once).norm() < 1e-11 * once.norm());

    // adjointness of operator closures
    const Generator gen = oracle::random_generator(n, 3);
    const LinearOperator gop = LinearOperator::from(gen);
    const Vec u = oracle::randvec(n), w = oracle::randvec(n);
    const cplx lhs = w.dot(gop.apply(Mat(u)).col(0));
    const cplx rhs = gop.apply_adjoint(w).col(0).dot(u);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
}

TEST_CASE("product generator") {
    const Index n = 32;
    const auto id = ToeplitzLike::from(identity_toeplitz(n));
    const Generator pi = product_generator(id, id);
    CHECK(oracle::rel_err(reconstruct(pi), Mat::Identity(n, n)) < 1e-14);
    CHECK(compress(pi, default_compression_tol(n)).generator.length() == 1);

    const auto t1 = oracle::random_toeplitz(n), t2 = oracle::random_toeplitz(n);
    const Generator p = product_generator(ToeplitzLike::from(t1), ToeplitzLike::from(t2));
    CHECK(p.length() == 5);
    const Mat ref = t1.dense() * t2.dense();
    CHECK(oracle::rel_err(reconstruct(p), ref) < 1e-11);
    CHECK(compress(p, default_compression_tol(n)).generator.length() <= 4);

    const Index m = 64;
    const Generator a1 = oracle::random_generator(m, 3), a2 = oracle::random_generator(m, 5);
    const Generator q = product_generator(ToeplitzLike::from(a1), ToeplitzLike::from(a2));
    CHECK(q.length() == 9);
    CHECK(oracle::rel_err(reconstruct(q), reconstruct(a1) * reconstruct(a2)) < 1e-11);
    const Generator qs = product_generator(ToeplitzLike::from(a1), ToeplitzLike::from(a2), ProductForm::similarity);
    CHECK(qs.length() == 9);
    CHECK(oracle::rel_err(reconstruct(qs), reconstruct(a1) * reconstruct(a2)) < 1e-11);

    CHECK_THROWS_AS(product_generator(ToeplitzLike::from(t1), ToeplitzLike::from(oracle::random_toeplitz(5))),
                    DimensionError);
}

TEST_CASE("shift-form products stay accurate as n grows") {
    // banded factors: the exact product is banded, so errors show up as fill
    for (Index n : {64, 512}) {
        Vec c = Vec::Zero(n);
        c(0) = -2.0;
        c(1) = 1.0;
        const auto t = make_toeplitz(c, c);
        const Mat ref = t.dense() * t.dense();
        const auto tl = ToeplitzLike::from(t);
        const double e_shift = oracle::rel_err(reconstruct(product_generator(tl, tl)), ref);
        CHECK(e_shift <= 20 * unit_roundoff);
    }
}

TEST_CASE("inverse generator") {
    const Generator gi = inverse_generator(identity_toeplitz(6));
    CHECK(oracle::rel_err(reconstruct(gi), Mat::Identity(6, 6)) < 1e-14);

    Vec c = Vec::Zero(8);
    c(0) = 2.0;
    c(1) = -1.0;
    const auto tri = make_toeplitz(c, c);
    const Generator g = inverse_generator(tri);
    CHECK(g.length() == 2);
    const Mat inv = tri.dense().inverse();
    CHECK(oracle::rel_err(reconstruct(g), inv) < 1e-10);
    CHECK(numerical_rank(oracle::stein_displacement(reconstruct(g)), 1e-12) <= 2);

    for (Index n : {1, 2, 5, 32}) {
        const auto t = oracle::random_toeplitz(n);
        CHECK(oracle::rel_err(reconstruct(inverse_generator(t)), t.dense().inverse()) < 1e-9);
    }
}

TEST_CASE("inverse of an ill-conditioned prolate matrix") {
    const Index n = 32;
    const double w = 0.25;
    Vec c(n);
    c(0) = 2.0 * w;
    for (Index k = 1; k < n; ++k)
        c(k) = std::sin(2.0 * M_PI * w * static_cast<double>(k)) / (M_PI * static_cast<double>(k));
    const auto t = make_toeplitz(c, c);
    try {
        const Mat x = reconstruct(inverse_generator(t));
        const double resid = (t.dense() * x - Mat::Identity(n, n)).norm() / std::sqrt(static_cast<double>(n));
        MESSAGE("prolate n=32 inverse residual " << resid);
        CHECK(std::isfinite(resid));
    } catch (const SingularSystemError& e) {
        MESSAGE("prolate n=32 flagged singular: " << e.what());
        CHECK(e.condition_estimate() > 1.0);
    }
}

TEST_CASE("power generators") {
    const auto t = oracle::random_toeplitz(12);
    const auto one = power_generators(t, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].G == toeplitz_generator(t).G);

    const Index n = 24;
    Vec c(n), r(n);
    for (Index i = 0; i < n; ++i) {
        c(i) = static_cast<double>((i * 7) % 5) - 2.0;
        r(i) = static_cast<double>((i * 3) % 4) - 1.0;
    }
    r(0) = c(0);
    const auto ti = make_toeplitz(c, r);
    const Mat d = ti.dense();

    StructuredOptions raw;
    raw.compress = false;
    const auto praw = power_generators(ti, 3, raw);
    CHECK(praw[1].length() == 5);
    CHECK(praw[2].length() == 8);

    const auto pw = power_generators(ti, 3);
    CHECK(oracle::rel_err(reconstruct(praw[2]), d * d * d) < 1e-13);
    CHECK(oracle::rel_err(reconstruct(pw[1]), d * d) < 1e-13);
    CHECK(oracle::rel_err(reconstruct(pw[2]), d * d * d) < 1e-13);
    CHECK(pw[2].length() <= 6);

    // e1 in range(G_1) within range(G_2) within range(G_3)
    auto residual = [](const Mat& sub, const Mat& sup) {
        const Mat proj = sup * sup.colPivHouseholderQr().solve(sub);
        return (proj - sub).norm() / sub.norm();
    };
    CHECK(residual(e1(n), praw[0].G) < 1e-12);
    CHECK(residual(praw[0].G, praw[1].G) < 1e-10);
    CHECK(residual(praw[1].G, praw[2].G) < 1e-10);
}

TEST_CASE("polynomial generators") {
    const auto t = oracle::random_toeplitz(9);
    const Generator c1 = poly_generator(t, Polynomial{1.0});
    CHECK(oracle::rel_err(reconstruct(c1), Mat::Identity(9, 9)) < 1e-15);

    Vec col(2), row(2);
    col << 0, 1;
    row << 0, 0;
    const auto nil = make_toeplitz(col, row);
    Mat expect(2, 2);
    expect << 0, 0, 1, 0;
    for (auto scheme : {PolyScheme::monomial, PolyScheme::horner})
        CHECK((reconstruct(poly_generator(nil, Polynomial{0.0, 1.0, 1.0}, scheme)) - expect).norm() < 1e-15);

    const Index n = 32;
    const auto tr = oracle::random_toeplitz(n);
    const Polynomial p = random_poly(5);
    const Mat ref = dense_poly(tr.dense(), p);
    const Generator gm = poly_generator(tr, p, PolyScheme::monomial);
    const Generator gh = poly_generator(tr, p, PolyScheme::horner);
    CHECK(oracle::rel_err(reconstruct(gm), ref) < 1e-10);
    CHECK(oracle::rel_err(reconstruct(gh), ref) < 1e-10);
    CHECK(gm.length() <= 10);
    CHECK(gh.length() <= 10);

    for (int deg = 0; deg <= 8; ++deg) {
        const auto tk = oracle::random_toeplitz(20);
        const Polynomial pk = random_poly(deg);
        const Mat a = reconstruct(poly_generator(tk, pk, PolyScheme::monomial));
        const Mat b = reconstruct(poly_generator(tk, pk, PolyScheme::horner));
        CHECK(oracle::rel_err(a, b) < 1e-10);
    }
}

TEST_CASE("rational generators") {
    const Index n = 16;
    const auto t = oracle::random_toeplitz(n);
    const Generator gt = rational_generator(t, Polynomial{0.0, 1.0}, Polynomial{1.0});
    CHECK(oracle::rel_err(reconstruct(gt), t.dense()) < 1e-12);

    const Generator ginv = rational_generator(t, Polynomial{1.0}, Polynomial{0.0, 1.0});
    CHECK(oracle::rel_err(reconstruct(ginv), reconstruct(inverse_generator(t))) < 1e-10);
    CHECK(numerical_rank(Mat(ginv.G * ginv.B.adjoint()), 1e-10) <= 2);

    // (3,3) diagonal Pade of a scaled random Toeplitz matrix
    const Index m = 32;
    const auto ts = oracle::random_toeplitz(m).scaled(0.02);
    const Polynomial p{1.0, 0.5, 0.1, 1.0 / 120.0};
    const Polynomial q{1.0, -0.5, 0.1, -1.0 / 120.0};
    const Mat ref = dense_poly(ts.dense(), q).partialPivLu().solve(dense_poly(ts.dense(), p));
    StructuredOptions raw;
    raw.compress = false;
    const Generator gr = rational_generator(ts, p, q, raw);
    CHECK(gr.length() == 2 * 3 + 2 * 3 + 1);
    CHECK(oracle::rel_err(reconstruct(gr), ref) < 1e-9);
    const Generator grc = rational_generator(ts, p, q);
    CHECK(oracle::rel_err(reconstruct(grc), ref) < 1e-9);
    CHECK(grc.length() <= 2 * 3 + 1);
}

TEST_CASE("partial fraction generators") {
    const Index n = 16;
    const auto t = oracle::random_toeplitz(n);
    const Generator g0 = partial_fraction_generator(t, {0.0}, {1.0}, Polynomial{});
    CHECK(oracle::rel_err(reconstruct(g0), t.dense().inverse()) < 1e-10);

    // conjugate pair on a real matrix
    const auto tr = oracle::random_toeplitz(n, true);
    const std::vector<cplx> poles{cplx(0.5, 1.5), cplx(0.5, -1.5)};
    const std::vector<cplx> res{cplx(2.0, -1.0), cplx(2.0, 1.0)};
    PartialFractionOptions naive;
    naive.pair_conjugates = false;
    const Mat paired = reconstruct(partial_fraction_generator(tr, poles, res, Polynomial{}));
    const Mat plain = reconstruct(partial_fraction_generator(tr, poles, res, Polynomial{}, naive));
    CHECK(oracle::rel_err(paired, plain) < 1e-11);
    CHECK(paired.imag().norm() <= 1e-12 * paired.norm());
    Mat dense_sum = Mat::Zero(n, n);
    for (std::size_t i = 0; i < 2; ++i)
        dense_sum += res[i] * (tr.dense() - poles[i] * Mat::Identity(n, n)).inverse();
    CHECK(oracle::rel_err(paired, dense_sum) < 1e-10);

    // four poles plus a polynomial part on a shifted-stable matrix
    const Index m = 32;
    const auto ts = oracle::random_toeplitz(m).scaled(0.05).shifted(-1.0);
    const std::vector<cplx> p4{cplx(1.0, 2.0), cplx(2.0, -1.0), cplx(0.5, 0.0), cplx(3.0, 3.0)};
    const std::vector<cplx> r4{cplx(1.0, 0.5), cplx(-0.3, 1.0), cplx(2.0, 0.0), cplx(0.1, -0.1)};
    const Polynomial pp{0.5, 0.25};
    Mat ref = dense_poly(ts.dense(), pp);
    for (std::size_t i = 0; i < 4; ++i) ref += r4[i] * (ts.dense() - p4[i] * Mat::Identity(m, m)).inverse();
    CHECK(oracle::rel_err(reconstruct(partial_fraction_generator(ts, p4, r4, pp)), ref) < 1e-9);
}

TEST_CASE("partial fractions report the failing pole") {
    Vec c = Vec::Zero(6);
    c(0) = 2.0;
    const auto t = make_toeplitz(c, c); // 2 I
    try {
        partial_fraction_generator(t, {cplx(5.0, 0.0), cplx(2.0, 0.0)}, {1.0, 1.0}, Polynomial{});
        FAIL("expected SingularSystemError");
    } catch (const SingularSystemError& e) {
        CHECK(e.pole_index() == 1);
    }
}

TEST_CASE("square generator") {
    const Index n = 64;
    const auto sq_id = square_generator(Generator::identity(n), default_compression_tol(n));
    CHECK(sq_id.generator.length() == 1);
    CHECK(oracle::rel_err(reconstruct(sq_id.generator), Mat::Identity(n, n)) < 1e-14);

    const auto t = oracle::random_toeplitz(n);
    const auto sq = square_generator(toeplitz_generator(t), default_compression_tol(n));
    CHECK(oracle::rel_err(reconstruct(sq.generator), t.dense() * t.dense()) < 1e-11);
    CHECK(sq.generator.length() <= 4);

    CHECK_THROWS_AS(square_generator(toeplitz_generator(t), default_compression_tol(n), 3), GeneratorCapExceeded);

    // repeated squaring of a rational approximant
    const Index m = 32;
    const int k = 3;
    const auto ts = oracle::random_toeplitz(m).scaled(std::ldexp(1.0, -k));
    const Polynomial p{1.0, 0.5, 1.0 / 12.0};
    const Polynomial q{1.0, -0.5, 1.0 / 12.0};
    Mat r = dense_poly(ts.dense(), q).partialPivLu().solve(dense_poly(ts.dense(), p));
    Generator g = rational_generator(ts, p, q);
    for (int i = 0; i < k; ++i) {
        r = r * r;
        g = square_generator(g, default_compression_tol(m)).generator;
    }
    CHECK(oracle::rel_err(reconstruct(g), r) < 1e-9);
}
