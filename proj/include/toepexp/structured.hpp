#pragma once

#include <functional>
#include <vector>

#include "toepexp/generator.hpp"
#include "toepexp/polynomial.hpp"
#include "toepexp/solver.hpp"
#include "toepexp/toeplitz.hpp"

namespace toepexp {

// x -> A x and x -> A^* x, applied blockwise to the columns of a matrix.
struct LinearOperator {
    Index n = 0;
    std::function<Mat(const Mat&)> apply;
    std::function<Mat(const Mat&)> apply_adjoint;

    static LinearOperator identity(Index n);
    static LinearOperator from(const ToeplitzMatrix& t);
    static LinearOperator from(const Generator& gen);
};

// A Toeplitz-like matrix carried both as a fast operator and a generator.
struct ToeplitzLike {
    LinearOperator op;
    Generator gen;

    static ToeplitzLike from(const ToeplitzMatrix& t);
    static ToeplitzLike from(const Generator& gen);
};

// (Z - I) A (Z - I)^{-1} X, or with A^* when `adjoint` is set. (Z - I)^{-1}
// is a negated running sum and (Z - I) a single differencing pass.
Mat apply_shifted_similarity(const LinearOperator& op, const Mat& x, bool adjoint = false);

// Length r1 + r2 + 1 generators of A1 A2, not compressed.
//   similarity: G = [P_{A1} G2 | G1 | -P_{A1} e1],  B = [B2 | P_{A2^*} B1 | P_{A2^*} e1]
//   shift:      G = [G1 | Z A1 Z^* G2 | -Z A1 e_n], B = [A2^* B1 | B2 | Z A2^* e_n]
// The shift form needs no running sums and keeps the rounding error near
// u ||A1|| ||A2||; the similarity form loses a factor up to n.
enum class ProductForm { shift, similarity };

Generator product_generator(const ToeplitzLike& a1, const ToeplitzLike& a2, ProductForm form = ProductForm::shift);

struct StructuredOptions {
    // Relative truncation tolerance for the eager compressions; < 0 selects
    // default_compression_tol(n).
    double tol = -1.0;
    // Disable to inspect the raw formula lengths.
    bool compress = true;
    GkoOptions gko;

    double tol_for(Index n) const { return tol >= 0 ? tol : default_compression_tol(n); }
};

// Length-2 generator of T^{-1} from two solves with T and two with T^*.
Generator inverse_generator(const ToeplitzMatrix& t, const StructuredOptions& opts = {});
Generator inverse_generator(const ToeplitzMatrix& t, const TlFactorization& fact,
                            const StructuredOptions& opts = {});

// Generators of T, T^2, ..., T^s through the nested recursion
//   G_{i+1} = [P_G^i G | ... | G | -P_G e1 | ... | -P_G^i e1]
//   B_{i+1} = [B | ... | P_B^i B | P_B^i e1 | ... | P_B e1],
// G_i has 3i - 1 columns before compression.
std::vector<Generator> power_generators(const ToeplitzMatrix& t, int s, const StructuredOptions& opts = {});

enum class PolyScheme { monomial, horner };

Generator poly_generator(const ToeplitzMatrix& t, const Polynomial& p, PolyScheme scheme = PolyScheme::horner,
                         const StructuredOptions& opts = {});

// Generator of q(T)^{-1} p(T), length len(p) + len(q) + 1 before the final
// compression.
Generator rational_generator(const ToeplitzMatrix& t, const Polynomial& p, const Polynomial& q,
                             const StructuredOptions& opts = {});

struct PartialFractionOptions {
    StructuredOptions structured;
    // For real T, fold conjugate pole pairs into one complex solve and take
    // 2 Re(G B^*).
    bool pair_conjugates = true;
};

// Generator of sum_i beta_i (T - alpha_i I)^{-1} + poly_part(T). Throws
// SingularSystemError carrying the failing pole index.
Generator partial_fraction_generator(const ToeplitzMatrix& t, const std::vector<cplx>& poles,
                                     const std::vector<cplx>& residues, const Polynomial& poly_part,
                                     const PartialFractionOptions& opts = {});

// One squaring step: product_generator(A, A) followed by compress(tol).
// Throws GeneratorCapExceeded when cap >= 0 and the compressed length is
// larger than cap.
CompressedGenerator square_generator(const Generator& gen, double tol, Index cap = -1);

} // namespace toepexp
