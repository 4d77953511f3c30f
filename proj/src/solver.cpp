#include "toepexp/solver.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace toepexp {

namespace {

// Z_{-1}^* x = (x_1, ..., x_{n-1}, -x_0), columnwise.
Mat apply_zminus1_adjoint(const Mat& x) {
    const Index n = x.rows();
    Mat y(n, x.cols());
    if (n > 1) y.topRows(n - 1) = x.bottomRows(n - 1);
    y.row(n - 1) = -x.row(0);
    return y;
}

} // namespace

Mat unitary_dft(const Mat& x) {
    const Index n = x.rows();
    auto plan = fft_plan(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    Mat y(n, x.cols());
    for (Index c = 0; c < x.cols(); ++c) {
        Vec in = x.col(c);
        plan->backward(in.data(), y.col(c).data());
    }
    return y * s;
}

Mat unitary_dft_adjoint(const Mat& x) {
    const Index n = x.rows();
    auto plan = fft_plan(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    Mat y(n, x.cols());
    for (Index c = 0; c < x.cols(); ++c) {
        Vec in = x.col(c);
        plan->forward(in.data(), y.col(c).data());
    }
    return y * s;
}

Mat odd_phase(const Mat& x, bool conjugate) {
    const Index n = x.rows();
    const double sign = conjugate ? -1.0 : 1.0;
    Vec phase(n);
    for (Index k = 0; k < n; ++k)
        phase(k) = std::polar(1.0, sign * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    return phase.asDiagonal() * x;
}

Mat CauchyLikeSystem::dense() const {
    const Index sz = n();
    Mat c = Gc * Bc.adjoint();
    for (Index j = 0; j < sz; ++j)
        for (Index i = 0; i < sz; ++i) c(i, j) /= d1(i) - d2(j);
    return c;
}

SylvesterGenerator stein_to_sylvester(const Generator& gen, const Vec& last_col, const Vec& last_row) {
    const Index n = gen.n();
    const Index r = gen.length();
    if (last_col.size() != n || last_row.size() != n)
        throw DimensionError("stein_to_sylvester: last row/column length mismatch");
    // Z_1 A - A Z_{-1} = -grad(A) Z_{-1} + Z A e_n e_n^* + e_1 e_n^* A
    SylvesterGenerator sg;
    sg.Gs = Mat::Zero(n, r + 2);
    sg.Bs = Mat::Zero(n, r + 2);
    sg.Gs.leftCols(r) = -gen.G;
    if (n > 1) sg.Gs.col(r).tail(n - 1) = last_col.head(n - 1);
    sg.Gs(0, r + 1) = 1.0;
    sg.Bs.leftCols(r) = apply_zminus1_adjoint(gen.B);
    sg.Bs(n - 1, r) = 1.0;
    sg.Bs.col(r + 1) = last_row.conjugate();
    return sg;
}

SylvesterGenerator stein_to_sylvester(const Generator& gen) {
    const Index n = gen.n();
    GeneratorOperator op(gen);
    Mat en = Mat::Zero(n, 1);
    en(n - 1, 0) = 1.0;
    const Vec last_col = op.apply(en).col(0);
    const Vec last_row = op.apply(en, true).col(0).conjugate();
    return stein_to_sylvester(gen, last_col, last_row);
}

CauchyLikeSystem sylvester_to_cauchy(const SylvesterGenerator& sg) {
    const Index n = sg.n();
    CauchyLikeSystem cls;
    cls.d1.resize(n);
    cls.d2.resize(n);
    const double dn = static_cast<double>(n);
    for (Index j = 0; j < n; ++j) {
        cls.d1(j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / dn);
        cls.d2(j) = std::polar(1.0, std::numbers::pi * static_cast<double>(2 * j + 1) / dn);
    }
    cls.Gc = unitary_dft(sg.Gs);
    cls.Bc = unitary_dft(odd_phase(sg.Bs, false));
    return cls;
}

CauchyLikeLU gko_factor(const CauchyLikeSystem& cls, const GkoOptions& opts) {
    const Index n = cls.n();
    const Index r = cls.Gc.cols();
    Mat g = cls.Gc;
    Mat b = cls.Bc;
    Vec d1 = cls.d1;
    const Vec& d2 = cls.d2;

    CauchyLikeLU out;
    out.lu_ = Mat::Zero(n, n);
    out.perm_.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) out.perm_[static_cast<std::size_t>(i)] = i;
    out.pivots_.reserve(static_cast<std::size_t>(n));
    Mat& lu = out.lu_;

    const double tiny = opts.pivot_tol_factor * static_cast<double>(n) * unit_roundoff;
    double scale = 0.0;
    Vec col(n), row(n);
    Eigen::RowVectorXcd grow(r), brow(r);

    for (Index j = 0; j < n; ++j) {
        const Index m = n - j;
        // column j of the current Schur complement
        auto c = col.head(m);
        c.noalias() = g.bottomRows(m) * b.row(j).adjoint();
        c.array() /= d1.tail(m).array() - d2(j);

        Index p = 0;
        const double pmag = c.cwiseAbs().maxCoeff(&p);
        scale = std::max(scale, pmag);
        if (!(pmag > tiny * scale)) {
            std::ostringstream msg;
            msg << "gko: numerically singular system at step " << j << " (|pivot| = " << pmag
                << ", scale = " << scale << ")";
            throw SingularSystemError(msg.str(), j, scale > 0 ? pmag / scale : 0.0);
        }
        if (p != 0) {
            const Index q = j + p;
            g.row(j).swap(g.row(q));
            std::swap(d1(j), d1(q));
            std::swap(out.perm_[static_cast<std::size_t>(j)], out.perm_[static_cast<std::size_t>(q)]);
            std::swap(c(0), c(p));
            if (j > 0) lu.row(j).head(j).swap(lu.row(q).head(j));
        }
        out.pivots_.push_back({j, out.perm_[static_cast<std::size_t>(j)], pmag, scale});

        const cplx piv = c(0);
        // row j of the Schur complement: (g_j B^*) / (d1_j - d2)
        auto rw = row.head(m);
        grow = g.row(j);
        rw.noalias() = (b.bottomRows(m) * grow.adjoint()).conjugate();
        rw.array() /= d1(j) - d2.tail(m).array();

        lu.row(j).tail(m) = rw.transpose();
        if (m == 1) break;
        lu.col(j).tail(m - 1) = c.tail(m - 1) / piv;

        brow = b.row(j);
        g.bottomRows(m - 1).noalias() -= lu.col(j).tail(m - 1) * grow;
        b.bottomRows(m - 1).noalias() -= (rw.tail(m - 1) / piv).conjugate() * brow;

        if (opts.reorthogonalize && m - 1 > r) {
            Eigen::HouseholderQR<Mat> qr(g.bottomRows(m - 1));
            Mat q = qr.householderQ() * Mat::Identity(m - 1, r);
            Mat rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
            g.bottomRows(m - 1) = q;
            b.bottomRows(m - 1) = b.bottomRows(m - 1) * rr.adjoint();
        }
    }
    return out;
}

Mat CauchyLikeLU::solve(const Mat& rhs) const {
    const Index sz = n();
    if (rhs.rows() != sz) throw DimensionError("gko solve: rhs row count mismatch");
    Mat y(sz, rhs.cols());
    for (Index i = 0; i < sz; ++i) y.row(i) = rhs.row(perm_[static_cast<std::size_t>(i)]);
    lu_.triangularView<Eigen::UnitLower>().solveInPlace(y);
    lu_.triangularView<Eigen::Upper>().solveInPlace(y);
    return y;
}

Mat CauchyLikeLU::solve_adjoint(const Mat& rhs) const {
    const Index sz = n();
    if (rhs.rows() != sz) throw DimensionError("gko solve: rhs row count mismatch");
    // C^* = U^* L^* P
    Mat w = rhs;
    lu_.triangularView<Eigen::Upper>().adjoint().solveInPlace(w);
    lu_.triangularView<Eigen::UnitLower>().adjoint().solveInPlace(w);
    Mat x(sz, rhs.cols());
    for (Index i = 0; i < sz; ++i) x.row(perm_[static_cast<std::size_t>(i)]) = w.row(i);
    return x;
}

Mat gko_solve(const CauchyLikeSystem& cls, const Mat& rhs, const GkoOptions& opts) {
    return gko_factor(cls, opts).solve(rhs);
}

TlFactorization TlFactorization::factor(const Generator& gen, const GkoOptions& opts) {
    return TlFactorization(gko_factor(sylvester_to_cauchy(stein_to_sylvester(gen)), opts),
                           [gen](const Mat& x, bool adj) { return tl_matvec(gen, x, adj); }, opts.refinement_steps);
}

TlFactorization TlFactorization::factor(const ToeplitzMatrix& t, const GkoOptions& opts) {
    const Index n = t.n();
    Vec last_col(n), last_row(n);
    for (Index i = 0; i < n; ++i) {
        last_col(i) = t(i, n - 1);
        last_row(i) = t(n - 1, i);
    }
    return TlFactorization(
        gko_factor(sylvester_to_cauchy(stein_to_sylvester(toeplitz_generator(t), last_col, last_row)), opts),
        [t](const Mat& x, bool adj) { return toeplitz_matvec(t, x, adj); }, opts.refinement_steps);
}

// A = F^* C Q with Q = F D0:
//   A x = b    ->  x = D0^* F^* C^{-1} F b
//   A^* x = b  ->  x = F^* C^{-*} F D0 b
Mat TlFactorization::raw_solve(const Mat& rhs) const {
    return odd_phase(unitary_dft_adjoint(lu_.solve(unitary_dft(rhs))), true);
}

Mat TlFactorization::raw_solve_adjoint(const Mat& rhs) const {
    return unitary_dft_adjoint(lu_.solve_adjoint(unitary_dft(odd_phase(rhs, false))));
}

Mat TlFactorization::solve(const Mat& rhs) const {
    if (rhs.rows() != n()) throw DimensionError("tl_solve: rhs row count mismatch");
    Mat x = raw_solve(rhs);
    for (int i = 0; i < refine_; ++i) x += raw_solve(rhs - matvec_(x, false));
    return x;
}

Mat TlFactorization::solve_adjoint(const Mat& rhs) const {
    if (rhs.rows() != n()) throw DimensionError("tl_solve: rhs row count mismatch");
    Mat x = raw_solve_adjoint(rhs);
    for (int i = 0; i < refine_; ++i) x += raw_solve_adjoint(rhs - matvec_(x, true));
    return x;
}

Mat tl_solve(const Generator& gen, const Mat& rhs, bool adjoint, const GkoOptions& opts) {
    const auto f = TlFactorization::factor(gen, opts);
    return adjoint ? f.solve_adjoint(rhs) : f.solve(rhs);
}

Mat tl_solve(const ToeplitzMatrix& t, const Mat& rhs, bool adjoint, const GkoOptions& opts) {
    const auto f = TlFactorization::factor(t, opts);
    return adjoint ? f.solve_adjoint(rhs) : f.solve(rhs);
}

void write_pivot_csv(std::ostream& os, const CauchyLikeLU& lu) {
    os << "step,row,magnitude,scale\n";
    os.precision(17);
    for (const auto& p : lu.pivots()) os << p.step << ',' << p.row << ',' << p.magnitude << ',' << p.scale << '\n';
}

} // namespace toepexp
