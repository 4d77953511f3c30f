#include "toepexp/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace toepexp {

Vec CirculantPlan::apply(const Vec& x, bool adjoint) const {
    if (x.size() != n) throw DimensionError("toeplitz_matvec: vector length mismatch");
    Vec buf = Vec::Zero(m);
    buf.head(n) = x;
    Vec spec(m);
    fft->forward(buf.data(), spec.data());
    if (adjoint)
        spec.array() *= eigenvalues.array().conjugate();
    else
        spec.array() *= eigenvalues.array();
    fft->backward(spec.data(), buf.data());
    return buf.head(n) / static_cast<double>(m);
}

Mat CirculantPlan::apply(const Mat& x, bool adjoint) const {
    if (x.rows() != n) throw DimensionError("toeplitz_matvec: row count mismatch");
    Mat y(n, x.cols());
    Vec buf(m), spec(m);
    for (Index c = 0; c < x.cols(); ++c) {
        buf.setZero();
        buf.head(n) = x.col(c);
        fft->forward(buf.data(), spec.data());
        if (adjoint)
            spec.array() *= eigenvalues.array().conjugate();
        else
            spec.array() *= eigenvalues.array();
        fft->backward(spec.data(), buf.data());
        y.col(c) = buf.head(n) / static_cast<double>(m);
    }
    return y;
}

ToeplitzMatrix make_toeplitz(Vec col, Vec row) {
    if (col.size() == 0 || row.size() == 0)
        throw DimensionError("make_toeplitz: empty column or row");
    if (col.size() != row.size())
        throw DimensionError("make_toeplitz: column and row lengths differ");
    if (col(0) != row(0))
        throw std::invalid_argument("make_toeplitz: corner mismatch col[0] != row[0]");
    ToeplitzMatrix t;
    t.col_ = std::move(col);
    t.row_ = std::move(row);
    t.cache_ = std::make_shared<ToeplitzMatrix::PlanCache>();
    return t;
}

ToeplitzMatrix identity_toeplitz(Index n) {
    Vec c = Vec::Zero(n);
    c(0) = 1.0;
    return make_toeplitz(c, c);
}

Mat ToeplitzMatrix::dense() const {
    const Index sz = n();
    Mat a(sz, sz);
    for (Index j = 0; j < sz; ++j)
        for (Index i = 0; i < sz; ++i) a(i, j) = (*this)(i, j);
    return a;
}

bool ToeplitzMatrix::is_real() const {
    return col_.imag().cwiseAbs().maxCoeff() == 0.0 && row_.imag().cwiseAbs().maxCoeff() == 0.0;
}

ToeplitzMatrix ToeplitzMatrix::adjoint() const {
    return make_toeplitz(row_.conjugate(), col_.conjugate());
}

ToeplitzMatrix ToeplitzMatrix::scaled(cplx alpha) const {
    return make_toeplitz(col_ * alpha, row_ * alpha);
}

ToeplitzMatrix ToeplitzMatrix::shifted(cplx alpha) const {
    Vec c = col_, r = row_;
    c(0) += alpha;
    r(0) = c(0);
    return make_toeplitz(std::move(c), std::move(r));
}

const CirculantPlan& ToeplitzMatrix::plan() const {
    std::call_once(cache_->once, [this] {
        CirculantPlan& p = cache_->plan;
        const Index sz = n();
        p.n = sz;
        p.m = next_pow2(std::max<Index>(2 * sz - 1, 2));
        p.fft = fft_plan(p.m);
        Vec c = Vec::Zero(p.m);
        c.head(sz) = col_;
        for (Index k = 1; k < sz; ++k) c(p.m - k) = row_(k);
        p.eigenvalues = p.fft->forward(c);
    });
    return cache_->plan;
}

Vec toeplitz_matvec(const ToeplitzMatrix& t, const Vec& x, bool adjoint) {
    return t.plan().apply(x, adjoint);
}

Mat toeplitz_matvec(const ToeplitzMatrix& t, const Mat& x, bool adjoint) {
    return t.plan().apply(x, adjoint);
}

double norm1(const ToeplitzMatrix& t) {
    const Index n = t.n();
    const Vec& c = t.col();
    const Vec& r = t.row();
    // mu_0 = ||T e_0||_1; moving one column right drops c[n-1-j] at the
    // bottom and gains r[j+1] at the top.
    double mu = c.cwiseAbs().sum();
    double best = mu;
    for (Index j = 0; j + 1 < n; ++j) {
        mu += std::abs(r(j + 1)) - std::abs(c(n - 1 - j));
        best = std::max(best, mu);
    }
    return best;
}

double norm2_estimate(const ToeplitzMatrix& t, int max_iters, double tol, std::uint64_t seed) {
    if (max_iters < 1) throw std::invalid_argument("norm2_estimate: max_iters must be >= 1");
    const Index n = t.n();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Vec x(n);
    for (Index i = 0; i < n; ++i) x(i) = cplx(dist(rng), dist(rng));
    x.normalize();

    double est = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Vec y = toeplitz_matvec(t, x);
        const double next = y.norm();
        if (next == 0.0) return est;
        const bool converged = it > 0 && std::abs(next - est) <= tol * next;
        est = std::max(est, next);
        if (converged) break;
        Vec z = toeplitz_matvec(t, y, true);
        const double zn = z.norm();
        if (zn == 0.0) break;
        x = z / zn;
    }
    return est;
}

} // namespace toepexp
