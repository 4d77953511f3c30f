#pragma once

#include <cstdint>
#include <memory>
#include <mutex>

#include "toepexp/fft.hpp"
#include "toepexp/types.hpp"

namespace toepexp {

// Circulant embedding of a Toeplitz matrix: an m x m circulant (m a power of
// two >= 2n-1) whose leading n x n block is T. `eigenvalues` is the DFT of the
// circulant's first column.
struct CirculantPlan {
    Index n = 0;
    Index m = 0;
    Vec eigenvalues;
    std::shared_ptr<const FftPlan> fft;

    // y = T x (or T^* x), computed through the embedding.
    Vec apply(const Vec& x, bool adjoint = false) const;
    Mat apply(const Mat& x, bool adjoint = false) const;
};

// n x n Toeplitz matrix given by its first column (t_0, t_1, ..., t_{n-1})
// and first row (t_0, t_{-1}, ..., t_{-n+1}). Immutable; copies share the
// lazily built circulant plan.
class ToeplitzMatrix {
public:
    ToeplitzMatrix() = default;

    Index n() const noexcept { return col_.size(); }
    const Vec& col() const noexcept { return col_; }
    const Vec& row() const noexcept { return row_; }

    // Entry (i, j), 0-based.
    cplx operator()(Index i, Index j) const { return i >= j ? col_(i - j) : row_(j - i); }

    Mat dense() const;
    bool is_real() const;

    // T^* as a Toeplitz matrix (col/row conjugate-swapped).
    ToeplitzMatrix adjoint() const;
    ToeplitzMatrix scaled(cplx alpha) const;
    // T + alpha I
    ToeplitzMatrix shifted(cplx alpha) const;

    const CirculantPlan& plan() const;

private:
    friend ToeplitzMatrix make_toeplitz(Vec col, Vec row);

    struct PlanCache {
        std::once_flag once;
        CirculantPlan plan;
    };

    Vec col_;
    Vec row_;
    std::shared_ptr<PlanCache> cache_;
};

// Validates and builds a Toeplitz matrix. Throws DimensionError on empty or
// mismatched vectors, std::invalid_argument when col[0] != row[0].
ToeplitzMatrix make_toeplitz(Vec col, Vec row);

// Single-column Toeplitz matrix I_n.
ToeplitzMatrix identity_toeplitz(Index n);

// dense(T) x via FFT; `adjoint` selects T^* x.
Vec toeplitz_matvec(const ToeplitzMatrix& t, const Vec& x, bool adjoint = false);
Mat toeplitz_matvec(const ToeplitzMatrix& t, const Mat& x, bool adjoint = false);

// Exact 1-norm in O(n): sliding column sums.
double norm1(const ToeplitzMatrix& t);

// Power-method lower estimate of ||T||_2 using T and T^* products.
double norm2_estimate(const ToeplitzMatrix& t, int max_iters = 20, double tol = 1e-3,
                      std::uint64_t seed = 0x5eed);

} // namespace toepexp
