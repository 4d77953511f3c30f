#include "doctest.h"

#include <cmath>

#include "toepexp/pade.hpp"

using namespace toepexp;

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// closed form p_{k,m}
double closed_form(int k, int m, int j) {
    return factorial(k + m - j) * factorial(k) / (factorial(k + m) * factorial(j) * factorial(k - j));
}

std::vector<cplx> test_points() {
    std::vector<cplx> z;
    for (int i = 0; i < 20; ++i) z.push_back(std::polar(0.2 + 0.04 * i, 0.9 * i));
    return z;
}

} // namespace

TEST_CASE("pade_coefficients: small cases by hand") {
    const auto a = pade_coefficients(1, 1);
    REQUIRE(a.p.coeffs.size() == 2);
    CHECK(std::abs(a.p.coeff(0) - 1.0) < 1e-16);
    CHECK(std::abs(a.p.coeff(1) - 0.5) < 1e-16);
    CHECK(std::abs(a.q.coeff(0) - 1.0) < 1e-16);
    CHECK(std::abs(a.q.coeff(1) + 0.5) < 1e-16);

    const auto b = pade_coefficients(0, 1);
    CHECK(b.p.coeffs.size() == 1);
    CHECK(std::abs(b.p.coeff(0) - 1.0) < 1e-16);
    CHECK(std::abs(b.q.coeff(1) + 1.0) < 1e-16);

    const auto c = pade_coefficients(5, 5);
    CHECK(std::abs(c(0.1) - std::exp(0.1)) <= 1e-13);

    CHECK_THROWS_AS(pade_coefficients(14, 1), std::out_of_range);
    CHECK_THROWS_AS(pade_coefficients(1, -1), std::out_of_range);
}

TEST_CASE("pade_coefficients agree with the closed form and the Taylor residual") {
    for (int k = 0; k <= 13; ++k) {
        for (int m = 0; m <= 13; ++m) {
            const auto a = pade_coefficients(k, m);
            CHECK(a.k == k);
            CHECK(a.m == m);
            CHECK(a.p.degree() == k);
            CHECK(a.q.degree() == m);
            for (int j = 0; j <= k; ++j)
                CHECK(std::abs(a.p.coeff(j) - closed_form(k, m, j)) <= 1e-15 * closed_form(k, m, j));
            for (int j = 0; j <= m; ++j) {
                const double expect = closed_form(m, k, j) * (j % 2 ? -1.0 : 1.0);
                CHECK(std::abs(a.q.coeff(j) - expect) <= 1e-15 * std::abs(expect));
            }
            if (k + m >= 1 && k + m <= 4) {
                // order check: residual shrinks like z^{k+m+1}
                const double z = 1e-3;
                const double res = std::abs(a(z) - std::exp(z));
                CHECK(res <= 2.0 * std::pow(z, k + m + 1) + 1e-16);
            }
        }
    }
}

TEST_CASE("partial fractions of (0,1) and (1,1)") {
    const auto pf = pade_to_partial_fractions(pade_coefficients(0, 1));
    REQUIRE(pf.poles.size() == 1);
    CHECK(std::abs(pf.poles[0] - 1.0) < 1e-14);
    CHECK(std::abs(pf.residues[0] + 1.0) < 1e-14);
    CHECK(pf.poly_part.coeffs.empty());

    const auto a = pade_coefficients(1, 1);
    const auto pf1 = pade_to_partial_fractions(a);
    REQUIRE(pf1.poles.size() == 1);
    CHECK(std::abs(pf1.poles[0] - 2.0) < 1e-14);
    for (cplx z : test_points()) CHECK(std::abs(pf1(z) - a(z)) <= 1e-12 * std::abs(a(z)));
}

TEST_CASE("partial fractions reproduce p/q") {
    for (int m = 1; m <= 9; ++m) {
        for (int k : {m - 1, m}) {
            const auto a = pade_coefficients(k, m);
            const auto pf = pade_to_partial_fractions(a);
            CHECK(pf.poles.size() == static_cast<std::size_t>(m));
            CHECK(pf.poly_part.degree() == (k >= m ? k - m : -1));
            // the expansion loses accuracy with the degree; k, m <= 5 is what sexpmt uses
            const double tol = m <= 5 ? 1e-12 : 1e-6;
            for (cplx z : test_points()) CHECK(std::abs(pf(z) - a(z)) <= tol * std::abs(a(z)));
        }
    }
}

TEST_CASE("(4,5) poles come in conjugate pairs; paired evaluation matches") {
    const auto a = pade_coefficients(4, 5);
    const auto pf = pade_to_partial_fractions(a);
    const auto pairs = pf.conjugate_pairs();
    CHECK(pairs.size() == 2);
    for (auto [i, j] : pairs) {
        CHECK(pf.poles[j] == std::conj(pf.poles[i]));
        CHECK(pf.residues[j] == std::conj(pf.residues[i]));
    }
    for (double x : {-8.0, -2.5, -1.0, -0.1, 0.0, 0.3, 1.0}) {
        const double direct = pf(x).real();
        CHECK(std::abs(pf.evaluate_paired(x) - direct) <= 1e-12 * std::abs(direct));
        CHECK(std::abs(pf(x).imag()) <= 1e-13 * std::abs(direct));
    }
}

TEST_CASE("clustered poles are rejected") {
    PadeApproximant bad;
    bad.k = 0;
    bad.m = 2;
    bad.p.coeffs = {1.0};
    bad.q.coeffs = {1.0, -2.0, 1.0}; // (1 - z)^2
    CHECK_THROWS_AS(pade_to_partial_fractions(bad), std::domain_error);
}
