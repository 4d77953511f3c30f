#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "toepexp/generator.hpp"
#include "toepexp/toeplitz.hpp"

namespace toepexp {

// Generator of the Sylvester displacement Z_1 A - A Z_{-1} = Gs Bs^*, where
// Z_delta = Z + delta e_1 e_n^*.
struct SylvesterGenerator {
    Mat Gs;
    Mat Bs;

    Index n() const noexcept { return Gs.rows(); }
    Index length() const noexcept { return Gs.cols(); }
};

// D1 C - C D2 = Gc Bc^* with D1 = diag(d1), D2 = diag(d2).
//   d1[j] = exp(2 pi i j / n)       (eigenvalues of Z_1)
//   d2[j] = exp(pi i (2j + 1) / n)  (eigenvalues of Z_{-1})
// C relates to A through C = F A Q^*, F the unitary DFT
// F[j][k] = exp(2 pi i jk/n)/sqrt(n), Q = F diag(exp(i pi k/n)).
struct CauchyLikeSystem {
    Vec d1;
    Vec d2;
    Mat Gc;
    Mat Bc;

    Index n() const noexcept { return d1.size(); }
    // C[i][j] = (Gc Bc^*)[i][j] / (d1[i] - d2[j])
    Mat dense() const;
};

// Uses the last column and row of A = T(G,B):
//   Z_1 A - A Z_{-1} = -grad(A) Z_{-1} + Z A e_n e_n^* + e_1 e_n^* A,
// the correction being the displacement of the Toeplitz matrix built from
// the last row and column. The result has length r + 2; `last_row` holds the
// entries A[n-1, 0..n-1].
SylvesterGenerator stein_to_sylvester(const Generator& gen, const Vec& last_col, const Vec& last_row);
// Extracts the last column and row with two fast products first.
SylvesterGenerator stein_to_sylvester(const Generator& gen);

CauchyLikeSystem sylvester_to_cauchy(const SylvesterGenerator& sg);

struct GkoOptions {
    // Pivots with |p| <= pivot_tol_factor * n * u * scale are treated as zero;
    // scale is the largest column magnitude met so far.
    double pivot_tol_factor = 1.0;
    // Re-orthonormalize the trailing G block (thin QR) after each step.
    bool reorthogonalize = false;
    // Fixed-precision refinement sweeps x += A^{-1}(b - A x) in the
    // Toeplitz-like solves; the residual uses the fast matvec.
    int refinement_steps = 1;
};

struct PivotRecord {
    Index step;
    Index row;        // original row index chosen at this step
    double magnitude; // |pivot|
    double scale;     // running column scale
};

// P C = L U computed by the generalized Schur (GKO) recursion with partial
// pivoting; L unit lower and U upper are stored together.
class CauchyLikeLU {
public:
    Index n() const noexcept { return lu_.rows(); }

    Mat solve(const Mat& rhs) const;         // C^{-1} rhs
    Mat solve_adjoint(const Mat& rhs) const; // C^{-*} rhs

    const std::vector<Index>& permutation() const noexcept { return perm_; }
    const std::vector<PivotRecord>& pivots() const noexcept { return pivots_; }
    const Mat& packed_lu() const noexcept { return lu_; }

private:
    friend CauchyLikeLU gko_factor(const CauchyLikeSystem&, const GkoOptions&);

    Mat lu_;
    std::vector<Index> perm_; // row i of P C is row perm_[i] of C
    std::vector<PivotRecord> pivots_;
};

CauchyLikeLU gko_factor(const CauchyLikeSystem& cls, const GkoOptions& opts = {});
Mat gko_solve(const CauchyLikeSystem& cls, const Mat& rhs, const GkoOptions& opts = {});

// Factorization of a Toeplitz-like matrix through its Cauchy-like transform;
// serves solves with A and with A^*.
class TlFactorization {
public:
    static TlFactorization factor(const Generator& gen, const GkoOptions& opts = {});
    static TlFactorization factor(const ToeplitzMatrix& t, const GkoOptions& opts = {});

    Index n() const noexcept { return lu_.n(); }
    Mat solve(const Mat& rhs) const;
    Mat solve_adjoint(const Mat& rhs) const;

    const CauchyLikeLU& cauchy_lu() const noexcept { return lu_; }

private:
    using Matvec = std::function<Mat(const Mat&, bool)>;
    TlFactorization(CauchyLikeLU lu, Matvec mv, int refine)
        : lu_(std::move(lu)), matvec_(std::move(mv)), refine_(refine) {}
    Mat raw_solve(const Mat& rhs) const;
    Mat raw_solve_adjoint(const Mat& rhs) const;

    CauchyLikeLU lu_;
    Matvec matvec_;
    int refine_ = 0;
};

Mat tl_solve(const Generator& gen, const Mat& rhs, bool adjoint = false, const GkoOptions& opts = {});
Mat tl_solve(const ToeplitzMatrix& t, const Mat& rhs, bool adjoint = false, const GkoOptions& opts = {});

// Unitary transforms used by the Cauchy-like conversion (exposed for tests).
Mat unitary_dft(const Mat& x);         // F x
Mat unitary_dft_adjoint(const Mat& x); // F^* x
Mat odd_phase(const Mat& x, bool conjugate); // diag(exp(+-i pi k/n)) x

// CSV dump "step,row,magnitude,scale" of the pivot sequence.
void write_pivot_csv(std::ostream& os, const CauchyLikeLU& lu);

} // namespace toepexp
