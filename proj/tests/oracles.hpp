#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's structured code paths.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "toepexp/generator.hpp"
#include "toepexp/toeplitz.hpp"

namespace oracle {

using toepexp::cplx;
using toepexp::Index;
using toepexp::Mat;
using toepexp::RMat;
using toepexp::Vec;

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline Vec randvec(Index n, bool real = false) {
    std::normal_distribution<double> d;
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = real ? cplx(d(rng()), 0.0) : cplx(d(rng()), d(rng()));
    return v;
}

inline Mat randn(Index n, Index m, bool real = false) {
    Mat a(n, m);
    for (Index j = 0; j < m; ++j) a.col(j) = randvec(n, real);
    return a;
}

inline toepexp::ToeplitzMatrix random_toeplitz(Index n, bool real = false) {
    Vec c = randvec(n, real), r = randvec(n, real);
    r(0) = c(0);
    return toepexp::make_toeplitz(c, r);
}

inline toepexp::Generator random_generator(Index n, Index r, bool real = false) {
    return toepexp::Generator(randn(n, r, real), randn(n, r, real));
}

// Dense Toeplitz from col/row without using the class.
inline Mat dense_toeplitz(const Vec& col, const Vec& row) {
    const Index n = col.size();
    Mat a(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) a(i, j) = i >= j ? col(i - j) : row(j - i);
    return a;
}

inline Mat down_shift(Index n) {
    Mat z = Mat::Zero(n, n);
    for (Index i = 1; i < n; ++i) z(i, i - 1) = 1.0;
    return z;
}

// sum_{k<n} Z^k G B^* (Z^*)^k, literally.
inline Mat stein_sum(const toepexp::Generator& gen) {
    const Index n = gen.n();
    const Mat z = down_shift(n);
    Mat term = gen.G * gen.B.adjoint();
    Mat acc = term;
    for (Index k = 1; k < n; ++k) {
        term = z * term * z.adjoint();
        acc += term;
    }
    return acc;
}

inline Mat stein_displacement(const Mat& a) {
    const Mat z = down_shift(a.rows());
    return a - z * a * z.adjoint();
}

inline double rel_err(const Mat& a, const Mat& ref) {
    const double d = ref.norm();
    return d > 0 ? (a - ref).norm() / d : (a - ref).norm();
}

inline double norm2(const Mat& a) {
    return Eigen::JacobiSVD<Mat>(a).singularValues()(0);
}

inline double norm1(const Mat& a) {
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Truncated Taylor series of exp(A) in long double complex with scaling and
// squaring; used as an extended-precision reference on small matrices.
inline Mat taylor_expm_ld(const Mat& a) {
    using ld = long double;
    using lc = std::complex<ld>;
    using LMat = Eigen::Matrix<lc, Eigen::Dynamic, Eigen::Dynamic>;
    const Index n = a.rows();
    LMat x(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) x(i, j) = lc(a(i, j).real(), a(i, j).imag());
    ld nrm = 0;
    for (Index j = 0; j < n; ++j) {
        ld s = 0;
        for (Index i = 0; i < n; ++i) s += std::abs(x(i, j));
        nrm = std::max(nrm, s);
    }
    int sq = 0;
    while (nrm > 0.125L) {
        nrm /= 2;
        ++sq;
    }
    x /= std::pow(2.0L, sq);
    LMat result = LMat::Identity(n, n);
    LMat term = LMat::Identity(n, n);
    for (int k = 1; k <= 30; ++k) {
        term = term * x / static_cast<ld>(k);
        result += term;
    }
    for (int k = 0; k < sq; ++k) result = result * result;
    Mat out(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            out(i, j) = cplx(static_cast<double>(result(i, j).real()), static_cast<double>(result(i, j).imag()));
    return out;
}

} // namespace oracle
