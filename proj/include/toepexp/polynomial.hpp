#pragma once

#include <vector>

#include "toepexp/types.hpp"

namespace toepexp {

// Ascending coefficients a_0 + a_1 z + ... + a_s z^s.
struct Polynomial {
    std::vector<cplx> coeffs;

    Polynomial() = default;
    Polynomial(std::vector<cplx> c) : coeffs(std::move(c)) {}
    Polynomial(std::initializer_list<cplx> c) : coeffs(c) {}

    // Index of the last nonzero coefficient; -1 for the zero polynomial.
    int degree() const {
        for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
            if (coeffs[static_cast<std::size_t>(k)] != cplx(0.0)) return k;
        return -1;
    }

    cplx coeff(int k) const {
        return k >= 0 && k < static_cast<int>(coeffs.size()) ? coeffs[static_cast<std::size_t>(k)] : cplx(0.0);
    }

    cplx operator()(cplx z) const {
        cplx acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    Polynomial derivative() const {
        std::vector<cplx> d;
        for (std::size_t k = 1; k < coeffs.size(); ++k) d.push_back(coeffs[k] * static_cast<double>(k));
        return Polynomial(std::move(d));
    }
};

} // namespace toepexp
