#pragma once

#include <utility>
#include <vector>

#include "toepexp/polynomial.hpp"

namespace toepexp {

// (k, m) Pade approximant r = p / q of exp(z), deg p = k, deg q = m.
struct PadeApproximant {
    int k = 0;
    int m = 0;
    Polynomial p;
    Polynomial q;

    cplx operator()(cplx z) const { return p(z) / q(z); }
};

// 0 <= k, m <= 13; throws std::out_of_range otherwise.
PadeApproximant pade_coefficients(int k, int m);

// r(z) = sum_i residues[i] / (z - poles[i]) + poly_part(z)
struct PartialFractionForm {
    std::vector<cplx> poles;
    std::vector<cplx> residues;
    Polynomial poly_part;

    cplx operator()(cplx z) const;
    // Index pairs (i, j), i < j, with poles[j] == conj(poles[i]) to 1e-10.
    std::vector<std::pair<std::size_t, std::size_t>> conjugate_pairs() const;
    // Evaluation folding each conjugate pair into 2 Re(beta / (x - alpha));
    // valid for real arguments only.
    double evaluate_paired(double x) const;
};

// Poles from the companion matrix of q (refined by Newton steps), residues
// p(alpha) / q'(alpha), polynomial part by long division. Throws
// std::domain_error when two poles are closer than 1e-8 max |alpha|.
PartialFractionForm pade_to_partial_fractions(const PadeApproximant& pade);

} // namespace toepexp
