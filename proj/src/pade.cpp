#include "toepexp/pade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace toepexp {

namespace {

using lcplx = std::complex<long double>;

lcplx horner_ld(const std::vector<cplx>& c, lcplx z) {
    lcplx acc = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + lcplx(it->real(), it->imag());
    return acc;
}

// q'(z), with the products k q_k kept in extended precision
lcplx derivative_ld(const std::vector<cplx>& c, lcplx z) {
    lcplx acc = 0.0L;
    for (std::size_t k = c.size(); k-- > 1;)
        acc = acc * z + lcplx(c[k].real(), c[k].imag()) * static_cast<long double>(k);
    return acc;
}

} // namespace

PadeApproximant pade_coefficients(int k, int m) {
    if (k < 0 || m < 0 || k > 13 || m > 13) throw std::out_of_range("pade_coefficients: degrees must lie in [0, 13]");
    PadeApproximant r;
    r.k = k;
    r.m = m;
    std::vector<cplx> p(static_cast<std::size_t>(k + 1)), q(static_cast<std::size_t>(m + 1));
    p[0] = q[0] = 1.0;
    for (int j = 1; j <= k; ++j)
        p[static_cast<std::size_t>(j)] =
            p[static_cast<std::size_t>(j - 1)] * static_cast<double>(k - j + 1) / static_cast<double>((k + m - j + 1) * j);
    for (int j = 1; j <= m; ++j)
        q[static_cast<std::size_t>(j)] = -q[static_cast<std::size_t>(j - 1)] * static_cast<double>(m - j + 1) /
                                         static_cast<double>((k + m - j + 1) * j);
    r.p = Polynomial(std::move(p));
    r.q = Polynomial(std::move(q));
    return r;
}

cplx PartialFractionForm::operator()(cplx z) const {
    cplx acc = poly_part(z);
    for (std::size_t i = 0; i < poles.size(); ++i) acc += residues[i] / (z - poles[i]);
    return acc;
}

std::vector<std::pair<std::size_t, std::size_t>> PartialFractionForm::conjugate_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::vector<bool> used(poles.size(), false);
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (used[i] || poles[i].imag() == 0.0) continue;
        const double tol = 1e-10 * std::max(1.0, std::abs(poles[i]));
        for (std::size_t j = i + 1; j < poles.size(); ++j) {
            if (!used[j] && std::abs(poles[j] - std::conj(poles[i])) <= tol) {
                used[i] = used[j] = true;
                out.emplace_back(i, j);
                break;
            }
        }
    }
    return out;
}

double PartialFractionForm::evaluate_paired(double x) const {
    const auto pairs = conjugate_pairs();
    std::vector<bool> in_pair(poles.size(), false);
    double acc = poly_part(x).real();
    for (const auto& [i, j] : pairs) {
        in_pair[i] = in_pair[j] = true;
        acc += 2.0 * (residues[i] / (x - poles[i])).real();
    }
    for (std::size_t i = 0; i < poles.size(); ++i)
        if (!in_pair[i]) acc += (residues[i] / (x - poles[i])).real();
    return acc;
}

PartialFractionForm pade_to_partial_fractions(const PadeApproximant& pade) {
    const int m = pade.q.degree();
    PartialFractionForm out;
    if (m < 0) throw std::domain_error("pade_to_partial_fractions: zero denominator");

    // long division p = s q + rem
    std::vector<cplx> rem = pade.p.coeffs;
    const int k = pade.p.degree();
    if (k >= m) {
        std::vector<cplx> s(static_cast<std::size_t>(k - m + 1), 0.0);
        const cplx lead = pade.q.coeff(m);
        for (int d = k; d >= m; --d) {
            const cplx c = rem[static_cast<std::size_t>(d)] / lead;
            s[static_cast<std::size_t>(d - m)] = c;
            for (int j = 0; j <= m; ++j) rem[static_cast<std::size_t>(d - m + j)] -= c * pade.q.coeff(j);
        }
        out.poly_part = Polynomial(std::move(s));
    }
    if (m == 0) return out;

    // companion matrix of the monic denominator
    Mat comp = Mat::Zero(m, m);
    const cplx lead = pade.q.coeff(m);
    for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) comp(i, m - 1) = -pade.q.coeff(i) / lead;
    Eigen::ComplexEigenSolver<Mat> es(comp, false);
    double maxabs = 0.0;
    for (int i = 0; i < m; ++i) {
        lcplx a(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
        for (int it = 0; it < 3; ++it) {
            const lcplx d = derivative_ld(pade.q.coeffs, a);
            if (d == lcplx(0.0L)) break;
            a -= horner_ld(pade.q.coeffs, a) / d;
        }
        out.poles.emplace_back(static_cast<double>(a.real()), static_cast<double>(a.imag()));
        maxabs = std::max(maxabs, std::abs(out.poles.back()));
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::abs(out.poles[static_cast<std::size_t>(i)] - out.poles[static_cast<std::size_t>(j)]) <
                1e-8 * maxabs)
                throw std::domain_error("pade_to_partial_fractions: clustered poles, simple-pole form invalid");

    // conjugate pairs of a real denominator are made exact
    bool real_q = true;
    for (const cplx& c : pade.q.coeffs) real_q = real_q && c.imag() == 0.0;
    if (real_q) {
        for (auto& a : out.poles)
            if (std::abs(a.imag()) <= 1e-14 * std::max(1.0, std::abs(a))) a = a.real();
        for (const auto& [i, j] : out.conjugate_pairs()) out.poles[j] = std::conj(out.poles[i]);
    }
    for (const cplx& a : out.poles) {
        const lcplx al(a.real(), a.imag());
        const lcplx b = horner_ld(rem, al) / derivative_ld(pade.q.coeffs, al);
        out.residues.emplace_back(static_cast<double>(b.real()), static_cast<double>(b.imag()));
    }
    if (real_q) {
        bool real_p = true;
        for (const cplx& c : pade.p.coeffs) real_p = real_p && c.imag() == 0.0;
        if (real_p) {
            for (std::size_t i = 0; i < out.poles.size(); ++i)
                if (out.poles[i].imag() == 0.0) out.residues[i] = out.residues[i].real();
            for (const auto& [i, j] : out.conjugate_pairs()) out.residues[j] = std::conj(out.residues[i]);
        }
    }
    return out;
}

} // namespace toepexp
