#pragma once

#include "toepexp/types.hpp"

namespace toepexp {

// Dense reference exponentials used as oracles and as the baseline in the
// benchmarks. All throw DimensionError above `limit` rows.
inline constexpr Index dense_limit_default = 4096;

// Diagonal Pade scaling and squaring with the degree ladder of expmt.
RMat dense_expm_reference(const RMat& a, Index limit = dense_limit_default);
Mat dense_expm_reference(const Mat& a, Index limit = dense_limit_default);

// Taylor series in long double with scaling and squaring; the extended
// precision oracle of the small-matrix experiment. Limit 512 by default.
Mat dense_expm_extended(const Mat& a, Index limit = 512);

// exp through an eigendecomposition; accurate for normal matrices.
RMat dense_expm_eig_symmetric(const RMat& a);
Mat dense_expm_eig(const Mat& a);

// Subdiagonal (k, m) Pade approximant evaluated densely, then rho squarings
// and the factor exp(shift). Mirrors sexpmt step for step.
Mat dense_sexpm(const Mat& a, int k, int m, int rho, double shift = 0.0);

// Relative condition number of exp in the Frobenius norm,
//   kappa = ||L_A|| ||A||_F / ||exp(A)||_F,
// with ||L_A|| estimated by power iteration on L_A^* L_A; each Frechet
// derivative comes from the exponential of [[A, E], [0, A]].
double expm_condition_estimate(const Mat& a, int iters = 8);

// Relative 1-norm condition number of exp, ||K||_1 ||A||_1 / ||exp(A)||_1
// with K the Kronecker form of L_A; ||K||_1 from Hager's estimator (a lower
// bound, usually exact).
double expm_condition_1norm(const Mat& a, int max_iters = 5);

// The same with ||K||_1 computed exactly from all n^2 columns (small n only).
double expm_condition_1norm_exact(const Mat& a);

} // namespace toepexp
