#pragma once

#include <memory>
#include <vector>

#include "toepexp/fft.hpp"
#include "toepexp/toeplitz.hpp"
#include "toepexp/types.hpp"

namespace toepexp {

// Stein displacement generator (G, B): the represented matrix A = T(G,B) is
// the unique solution of A - Z A Z^* = G B^*, Z the down-shift.
struct Generator {
    Mat G;
    Mat B;

    Generator() = default;
    Generator(Mat g, Mat b);

    Index n() const noexcept { return G.rows(); }
    Index length() const noexcept { return G.cols(); }

    static Generator zero(Index n, Index r = 0);
    // e_1 e_1^*: generator of I_n.
    static Generator identity(Index n);

    // Horizontal concatenation [G1 G2], [B1 B2]: generator of A1 + A2.
    Generator concat(const Generator& other) const;
    // Scales the represented matrix by alpha (G is scaled).
    Generator scaled(cplx alpha) const;
    // Generator of the adjoint matrix: (B, G).
    Generator adjoint() const { return Generator(B, G); }
};

// Canonical length-2 generator of a Toeplitz matrix: G = [t | e_1],
// B = [e_1 | (0, conj(t_{-1}), ..., conj(t_{-n+1}))].
Generator toeplitz_generator(const ToeplitzMatrix& t);

// A = sum_k Z^k G B^* (Z^*)^k, formed as D = G B^* followed by cumulative
// sums along every diagonal. O(r n^2).
Mat reconstruct(const Generator& gen);

// Diagonals -lower..upper of T(G,B). `diagonal(k)` returns diagonal k
// (k < 0 below the main diagonal) of length n - |k|.
struct Band {
    Index lower = 0;
    Index upper = 0;
    std::vector<Vec> diagonals; // diagonals[k + lower]

    const Vec& diagonal(Index k) const;
};

Band extract_band(const Generator& gen, Index lower, Index upper);

// Fast products with T(G,B) = sum_j L(g_j) U(b_j^*): the DFTs of all
// generator columns are computed once, each product costs 2r+2 FFTs.
class GeneratorOperator {
public:
    explicit GeneratorOperator(const Generator& gen);

    Index n() const noexcept { return n_; }
    Index length() const noexcept { return r_; }

    Vec apply(const Vec& x, bool adjoint = false) const;
    Mat apply(const Mat& x, bool adjoint = false) const;

private:
    Index n_;
    Index r_;
    Index m_;
    std::shared_ptr<const FftPlan> fft_;
    Mat ghat_; // DFT of zero-padded columns of G
    Mat bhat_; // DFT of zero-padded columns of B
};

Vec tl_matvec(const Generator& gen, const Vec& x, bool adjoint = false);
Mat tl_matvec(const Generator& gen, const Mat& x, bool adjoint = false);

struct CompressionReport {
    Index retained_rank = 0;
    RVec discarded_singular_values;
    RVec singular_values; // all singular values of G B^*
    double bound_2norm = 0.0;  // n * sigma_{r+1}
    double bound_fro = 0.0;    // n * sqrt(sum_{j>r} sigma_j^2)
};

struct CompressedGenerator {
    Generator generator;
    CompressionReport report;
};

// SVD truncation of G B^* through thin QR factors of G and B. Retains the
// singular values sigma_k > tol * sigma_1, at most max_rank of them
// (max_rank < 0: no cap). Cost O(r^2 n + r^3).
CompressedGenerator compress(const Generator& gen, double tol, Index max_rank = -1);

// Default truncation tolerance for generators of dimension n: n * u.
double default_compression_tol(Index n);

// Generator of a dense matrix: the displacement is truncated at tol * sigma_1
// through an adaptive randomized range finder (one power iteration), so the
// cost is O(n^2 r) for displacement rank r. Real input stays real.
CompressedGenerator generator_of_dense(const Mat& a, double tol);
CompressedGenerator generator_of_dense(const RMat& a, double tol);

// A - Z A Z^* (test and oracle utility).
Mat displacement_of_dense(const Mat& a);

// Number of singular values of M greater than rel_tol * sigma_1.
Index numerical_rank(const Mat& m, double rel_tol);
Index numerical_rank(const RMat& m, double rel_tol);

} // namespace toepexp
