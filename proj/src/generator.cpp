#include "toepexp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <type_traits>

#include <Eigen/SVD>

namespace toepexp {

Generator::Generator(Mat g, Mat b) : G(std::move(g)), B(std::move(b)) {
    if (G.rows() != B.rows() || G.cols() != B.cols())
        throw DimensionError("Generator: G and B must have identical shapes");
}

Generator Generator::zero(Index n, Index r) { return Generator(Mat::Zero(n, r), Mat::Zero(n, r)); }

Generator Generator::identity(Index n) {
    Mat e = Mat::Zero(n, 1);
    e(0, 0) = 1.0;
    return Generator(e, e);
}

Generator Generator::concat(const Generator& other) const {
    if (other.n() != n()) throw DimensionError("Generator::concat: dimension mismatch");
    Mat g(n(), length() + other.length());
    Mat b(n(), length() + other.length());
    g << G, other.G;
    b << B, other.B;
    return Generator(std::move(g), std::move(b));
}

Generator Generator::scaled(cplx alpha) const { return Generator(G * alpha, B); }

Generator toeplitz_generator(const ToeplitzMatrix& t) {
    const Index n = t.n();
    Mat g = Mat::Zero(n, 2);
    Mat b = Mat::Zero(n, 2);
    g.col(0) = t.col();
    g(0, 1) = 1.0;
    b(0, 0) = 1.0;
    b.col(1).tail(n - 1) = t.row().tail(n - 1).conjugate();
    return Generator(std::move(g), std::move(b));
}

Mat reconstruct(const Generator& gen) {
    const Index n = gen.n();
    Mat a = gen.G * gen.B.adjoint();
    // A(i,j) = D(i,j) + A(i-1,j-1)
    for (Index j = 1; j < n; ++j) a.col(j).tail(n - 1) += a.col(j - 1).head(n - 1);
    return a;
}

const Vec& Band::diagonal(Index k) const {
    if (k < -lower || k > upper) throw std::out_of_range("Band::diagonal: offset outside band");
    return diagonals[static_cast<std::size_t>(k + lower)];
}

Band extract_band(const Generator& gen, Index lower, Index upper) {
    const Index n = gen.n();
    if (lower < 0 || upper < 0 || lower > n - 1 || upper > n - 1)
        throw std::out_of_range("extract_band: band exceeds matrix dimension");
    Band band;
    band.lower = lower;
    band.upper = upper;
    band.diagonals.reserve(static_cast<std::size_t>(lower + upper + 1));
    for (Index k = -lower; k <= upper; ++k) {
        const Index len = n - std::abs(k);
        const Index i0 = k < 0 ? -k : 0;
        const Index j0 = k > 0 ? k : 0;
        Vec d(len);
        // (G B^*)(i, j) = sum_c G(i,c) conj(B(j,c)); dot() conjugates its receiver.
        for (Index l = 0; l < len; ++l) d(l) = gen.B.row(j0 + l).dot(gen.G.row(i0 + l));
        for (Index l = 1; l < len; ++l) d(l) += d(l - 1);
        band.diagonals.push_back(std::move(d));
    }
    return band;
}

GeneratorOperator::GeneratorOperator(const Generator& gen)
    : n_(gen.n()), r_(gen.length()), m_(next_pow2(std::max<Index>(2 * gen.n() - 1, 2))),
      fft_(fft_plan(m_)), ghat_(m_, r_), bhat_(m_, r_) {
    Vec buf(m_);
    for (Index j = 0; j < r_; ++j) {
        buf.setZero();
        buf.head(n_) = gen.G.col(j);
        fft_->forward(buf.data(), ghat_.col(j).data());
        buf.setZero();
        buf.head(n_) = gen.B.col(j);
        fft_->forward(buf.data(), bhat_.col(j).data());
    }
}

Mat GeneratorOperator::apply(const Mat& x, bool adjoint) const {
    if (x.rows() != n_) throw DimensionError("tl_matvec: row count mismatch");
    // A = sum_j L(l_j) U(u_j^*) with (l,u) = (g,b), or (b,g) for A^*.
    // DFT(U(u^*) embedding) = conj(DFT(padded u)).
    const Mat& lhat = adjoint ? bhat_ : ghat_;
    const Mat& uhat = adjoint ? ghat_ : bhat_;
    const double inv_m = 1.0 / static_cast<double>(m_);
    Mat y(n_, x.cols());
    Vec buf(m_), xhat(m_), acc(m_), tmp(m_);
    for (Index c = 0; c < x.cols(); ++c) {
        buf.setZero();
        buf.head(n_) = x.col(c);
        fft_->forward(buf.data(), xhat.data());
        acc.setZero();
        for (Index j = 0; j < r_; ++j) {
            tmp = uhat.col(j).conjugate().cwiseProduct(xhat);
            fft_->backward(tmp.data(), buf.data());
            buf.head(n_) *= inv_m;
            buf.tail(m_ - n_).setZero();
            fft_->forward(buf.data(), tmp.data());
            acc += lhat.col(j).cwiseProduct(tmp);
        }
        fft_->backward(acc.data(), buf.data());
        y.col(c) = buf.head(n_) * inv_m;
    }
    return y;
}

Vec GeneratorOperator::apply(const Vec& x, bool adjoint) const {
    Mat xm = x;
    return apply(xm, adjoint).col(0);
}

Vec tl_matvec(const Generator& gen, const Vec& x, bool adjoint) {
    return GeneratorOperator(gen).apply(x, adjoint);
}

Mat tl_matvec(const Generator& gen, const Mat& x, bool adjoint) {
    return GeneratorOperator(gen).apply(x, adjoint);
}

double default_compression_tol(Index n) { return static_cast<double>(n) * unit_roundoff; }

CompressedGenerator compress(const Generator& gen, double tol, Index max_rank) {
    const Index n = gen.n();
    const Index r = gen.length();
    CompressedGenerator out;
    if (r == 0 || n == 0) {
        out.generator = Generator::zero(n, 0);
        return out;
    }
    const Index k = std::min(n, r);

    Eigen::HouseholderQR<Mat> qr_g(gen.G);
    Eigen::HouseholderQR<Mat> qr_b(gen.B);
    Mat qg = qr_g.householderQ() * Mat::Identity(n, k);
    Mat qb = qr_b.householderQ() * Mat::Identity(n, k);
    Mat rg = qr_g.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    Mat rb = qr_b.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    // core SVD: BDCSVD in double, then a Jacobi sweep in long double on the
    // nearly diagonal S0 + U0^* (core - U0 S0 V0^*) V0
    using lcplx = std::complex<long double>;
    using LMat = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;
    const LMat core = rg.cast<lcplx>() * rb.cast<lcplx>().adjoint();
    const Eigen::BDCSVD<Mat> svd0(core.cast<cplx>(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const LMat u0 = svd0.matrixU().cast<lcplx>();
    const LMat v0 = svd0.matrixV().cast<lcplx>();
    const LMat s0 = svd0.singularValues().cast<lcplx>().asDiagonal();
    const LMat near_diag = s0 + u0.adjoint() * (core - u0 * s0 * v0.adjoint()) * v0;
    const Eigen::JacobiSVD<LMat, Eigen::NoQRPreconditioner> svd(near_diag, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVec sigma = svd.singularValues().cast<double>();
    out.report.singular_values = sigma;

    Index keep = 0;
    if (sigma(0) > 0.0) {
        const double cut = tol * sigma(0);
        while (keep < sigma.size() && sigma(keep) > cut) ++keep;
    }
    if (max_rank >= 0) keep = std::min(keep, max_rank);

    out.report.retained_rank = keep;
    out.report.discarded_singular_values = sigma.tail(sigma.size() - keep);
    const double dn = static_cast<double>(n);
    if (keep < sigma.size()) {
        out.report.bound_2norm = dn * sigma(keep);
        out.report.bound_fro = dn * out.report.discarded_singular_values.norm();
    }

    const auto root = svd.singularValues().head(keep).cwiseSqrt().eval();
    const Mat ug = (u0 * svd.matrixU().leftCols(keep) * root.asDiagonal()).cast<cplx>();
    const Mat vb = (v0 * svd.matrixV().leftCols(keep) * root.asDiagonal()).cast<cplx>();
    Mat g = qg * ug;
    Mat b = qb * vb;
    out.generator = Generator(std::move(g), std::move(b));
    return out;
}

Mat displacement_of_dense(const Mat& a) {
    if (a.rows() != a.cols()) throw DimensionError("displacement_of_dense: matrix must be square");
    const Index n = a.rows();
    Mat d = a;
    if (n > 1) d.bottomRightCorner(n - 1, n - 1) -= a.topLeftCorner(n - 1, n - 1);
    return d;
}

namespace {

template <class M>
CompressedGenerator generator_of_dense_impl(const M& a, double tol) {
    using Scalar = typename M::Scalar;
    const Index n = a.rows();
    if (a.cols() != n) throw DimensionError("generator_of_dense: matrix must be square");
    M d = a;
    if (n > 1) d.bottomRightCorner(n - 1, n - 1) -= a.topLeftCorner(n - 1, n - 1);

    std::mt19937_64 gen(0x5eed);
    std::normal_distribution<double> nd;
    Index k = std::min<Index>(n, 24);
    M q, core;
    RVec s;
    M u, v;
    for (;;) {
        const Index p = std::min<Index>(n, k + 8);
        M omega(n, p);
        for (Index j = 0; j < p; ++j)
            for (Index i = 0; i < n; ++i) {
                if constexpr (std::is_same_v<Scalar, double>) omega(i, j) = nd(gen);
                else omega(i, j) = Scalar(nd(gen), nd(gen));
            }
        M y = d * omega;
        {
            Eigen::HouseholderQR<M> qr(y);
            y = qr.householderQ() * M::Identity(n, p);
        }
        M z = d.adjoint() * y;
        {
            Eigen::HouseholderQR<M> qr(z);
            z = qr.householderQ() * M::Identity(n, p);
        }
        y = d * z;
        Eigen::HouseholderQR<M> qr(y);
        q = qr.householderQ() * M::Identity(n, p);
        core = q.adjoint() * d; // p x n
        Eigen::BDCSVD<M> svd(core.adjoint(), Eigen::ComputeThinU | Eigen::ComputeThinV);
        s = svd.singularValues();
        v = svd.matrixU(); // n x p
        u = svd.matrixV(); // p x p
        if (p == n || s(0) == 0.0 || s(p - 1) <= 0.1 * tol * s(0)) break;
        k *= 2;
    }
    CompressedGenerator out;
    out.report.singular_values = s;
    Index keep = 0;
    if (s(0) > 0.0)
        while (keep < s.size() && s(keep) > tol * s(0)) ++keep;
    out.report.retained_rank = keep;
    out.report.discarded_singular_values = s.tail(s.size() - keep);
    if (keep < s.size()) {
        out.report.bound_2norm = static_cast<double>(n) * s(keep);
        out.report.bound_fro = static_cast<double>(n) * out.report.discarded_singular_values.norm();
    }
    const RVec root = s.head(keep).cwiseSqrt();
    const M g = q * (u.leftCols(keep) * root.asDiagonal());
    const M b = v.leftCols(keep) * root.asDiagonal();
    out.generator = Generator(g.template cast<cplx>(), b.template cast<cplx>());
    return out;
}

template <class M>
Index rank_from_singular_values(const M& m, double rel_tol) {
    if (m.size() == 0) return 0;
    RVec s;
    if (m.rows() <= 64 && m.cols() <= 64)
        s = Eigen::JacobiSVD<M>(m).singularValues();
    else
        s = Eigen::BDCSVD<M>(m).singularValues();
    if (s(0) == 0.0) return 0;
    Index k = 0;
    while (k < s.size() && s(k) > rel_tol * s(0)) ++k;
    return k;
}

} // namespace

CompressedGenerator generator_of_dense(const Mat& a, double tol) { return generator_of_dense_impl(a, tol); }
CompressedGenerator generator_of_dense(const RMat& a, double tol) { return generator_of_dense_impl(a, tol); }

Index numerical_rank(const Mat& m, double rel_tol) { return rank_from_singular_values(m, rel_tol); }
Index numerical_rank(const RMat& m, double rel_tol) { return rank_from_singular_values(m, rel_tol); }

} // namespace toepexp
