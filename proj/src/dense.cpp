#include "toepexp/dense.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "toepexp/pade.hpp"

namespace toepexp {

namespace {

constexpr double theta[] = {1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                            2.097847961257068, 5.371920351148152};
constexpr int degrees[] = {3, 5, 7, 9, 13};

template <class M>
M pade_scaling_squaring(const M& a, Index limit) {
    using Scalar = typename M::Scalar;
    const Index n = a.rows();
    if (a.rows() != a.cols()) throw DimensionError("dense expm: matrix must be square");
    if (n > limit) throw DimensionError("dense expm: dimension above the dense limit");
    const double nrm = n == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();

    int m = 13, rho = 0;
    for (int i = 0; i < 5; ++i) {
        if (nrm <= theta[i]) {
            m = degrees[i];
            break;
        }
    }
    if (nrm > theta[4]) rho = static_cast<int>(std::ceil(std::log2(nrm / theta[4])));

    const M x = a * std::ldexp(1.0, -rho);
    const auto pade = pade_coefficients(m, m);
    auto b = [&](int j) { return Scalar(pade.p.coeff(j).real()); };
    const M id = M::Identity(n, n);
    const M x2 = x * x;
    M u, v;
    if (m == 13) {
        const M x4 = x2 * x2;
        const M x6 = x4 * x2;
        M w1 = b(13) * x6 + b(11) * x4 + b(9) * x2;
        M w2 = b(7) * x6 + b(5) * x4 + b(3) * x2 + b(1) * id;
        M z1 = b(12) * x6 + b(10) * x4 + b(8) * x2;
        M z2 = b(6) * x6 + b(4) * x4 + b(2) * x2 + b(0) * id;
        u = x * (x6 * w1 + w2);
        v = x6 * z1 + z2;
    } else {
        M pw = id;
        M uo = M::Zero(n, n), ve = M::Zero(n, n);
        for (int j = 0; 2 * j <= m; ++j) {
            ve += b(2 * j) * pw;
            if (2 * j + 1 <= m) uo += b(2 * j + 1) * pw;
            pw = pw * x2;
        }
        u = x * uo;
        v = ve;
    }
    M r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < rho; ++i) r = r * r;
    return r;
}

} // namespace

RMat dense_expm_reference(const RMat& a, Index limit) { return pade_scaling_squaring(a, limit); }
Mat dense_expm_reference(const Mat& a, Index limit) { return pade_scaling_squaring(a, limit); }

RMat dense_expm_eig_symmetric(const RMat& a) {
    Eigen::SelfAdjointEigenSolver<RMat> es(a);
    return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() * es.eigenvectors().transpose();
}

Mat dense_expm_eig(const Mat& a) {
    Eigen::ComplexEigenSolver<Mat> es(a);
    const Mat& v = es.eigenvectors();
    const Vec e = es.eigenvalues().array().exp();
    return v * e.asDiagonal() * v.partialPivLu().inverse();
}

Mat dense_sexpm(const Mat& a, int k, int m, int rho, double shift) {
    const Index n = a.rows();
    const auto pade = pade_coefficients(k, m);
    const Mat x = (a - shift * Mat::Identity(n, n)) * std::ldexp(1.0, -rho);
    auto horner = [&](const Polynomial& p) {
        Mat acc = Mat::Zero(n, n);
        for (int j = static_cast<int>(p.coeffs.size()) - 1; j >= 0; --j)
            acc = x * acc + p.coeffs[static_cast<std::size_t>(j)] * Mat::Identity(n, n);
        return acc;
    };
    Mat r = horner(pade.q).partialPivLu().solve(horner(pade.p));
    for (int i = 0; i < rho; ++i) r = r * r;
    return r * std::exp(shift);
}

Mat dense_expm_extended(const Mat& a, Index limit) {
    using lcplx = std::complex<long double>;
    using LMat = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;
    const Index n = a.rows();
    if (a.cols() != n) throw DimensionError("dense_expm_extended: matrix must be square");
    if (n > limit) throw DimensionError("dense_expm_extended: dimension above limit");
    auto norm1_ld = [](const LMat& m) {
        long double best = 0.0L;
        for (Index j = 0; j < m.cols(); ++j) best = std::max(best, m.col(j).cwiseAbs().sum());
        return best;
    };
    LMat x = a.cast<lcplx>();
    int squarings = 0;
    for (long double nrm = norm1_ld(x); nrm > 0.5L; nrm /= 2) ++squarings;
    x /= std::ldexp(1.0L, squarings);
    LMat sum = LMat::Identity(n, n);
    LMat term = LMat::Identity(n, n);
    for (int k = 1; k <= 60; ++k) {
        term = (term * x) / static_cast<long double>(k);
        sum += term;
        if (norm1_ld(term) <= 1e-22L * norm1_ld(sum)) break;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum.cast<cplx>();
}

namespace {

Mat frechet_exp(const Mat& base, const Mat& e) {
    const Index n = base.rows();
    Mat blk = Mat::Zero(2 * n, 2 * n);
    blk.topLeftCorner(n, n) = base;
    blk.bottomRightCorner(n, n) = base;
    blk.topRightCorner(n, n) = e;
    return dense_expm_reference(blk).topRightCorner(n, n);
}

double norm1(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

double cond_scale(const Mat& a) { return norm1(a) / norm1(dense_expm_reference(a)); }

} // namespace

double expm_condition_1norm(const Mat& a, int max_iters) {
    const Index n = a.rows();
    if (n == 0) return 0.0;
    const Index nn = n * n;
    const Mat ah = a.adjoint();
    auto sign = [](const Mat& y) {
        Mat s(y.rows(), y.cols());
        for (Index j = 0; j < y.cols(); ++j)
            for (Index i = 0; i < y.rows(); ++i) s(i, j) = std::abs(y(i, j)) > 0 ? y(i, j) / std::abs(y(i, j)) : cplx(1.0);
        return s;
    };
    Mat x = Mat::Constant(n, n, 1.0 / static_cast<double>(nn));
    double est = 0.0;
    Index last = -1;
    for (int it = 0; it < max_iters; ++it) {
        const Mat y = frechet_exp(a, x);
        const double e = y.cwiseAbs().sum();
        if (it > 0 && e <= est) break;
        est = e;
        const Mat z = frechet_exp(ah, sign(y));
        Index j = 0;
        const double zmax = z.cwiseAbs().reshaped().maxCoeff(&j);
        if (it > 0 && (j == last || zmax <= (z.reshaped().adjoint() * x.reshaped())(0, 0).real())) break;
        last = j;
        x.setZero();
        x.reshaped()(j) = 1.0;
    }
    // alternating test vector guards against unlucky iterates
    Mat b(n, n);
    for (Index i = 0; i < nn; ++i)
        b.reshaped()(i) = (i % 2 ? -1.0 : 1.0) * (1.0 + static_cast<double>(i) / static_cast<double>(std::max<Index>(nn - 1, 1)));
    est = std::max(est, 2.0 * frechet_exp(a, b).cwiseAbs().sum() / (3.0 * static_cast<double>(nn)));
    return est * cond_scale(a);
}

double expm_condition_1norm_exact(const Mat& a) {
    const Index n = a.rows();
    if (n == 0) return 0.0;
    double best = 0.0;
    Mat e = Mat::Zero(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) {
            e(i, j) = 1.0;
            best = std::max(best, frechet_exp(a, e).cwiseAbs().sum());
            e(i, j) = 0.0;
        }
    return best * cond_scale(a);
}

double expm_condition_estimate(const Mat& a, int iters) {
    const Index n = a.rows();
    if (n == 0) return 0.0;
    auto frechet = frechet_exp;
    std::mt19937_64 gen(0x5eed);
    std::normal_distribution<double> d;
    Mat e(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) e(i, j) = cplx(d(gen), d(gen));
    e /= e.norm();
    const Mat ah = a.adjoint();
    double est = 0.0;
    for (int it = 0; it < iters; ++it) {
        const Mat l = frechet(a, e);
        est = l.norm();
        if (est == 0.0) break;
        Mat w = frechet(ah, l);
        e = w / w.norm();
    }
    const double ex = dense_expm_reference(a).norm();
    return est * a.norm() / ex;
}

} // namespace toepexp
