#include "toepexp/structured.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace toepexp {

namespace {

// (Z - I)^{-1} x = -cumsum(x)
Mat inv_shift_minus_identity(const Mat& x) {
    Mat w = -x;
    for (Index i = 1; i < w.rows(); ++i) w.row(i) += w.row(i - 1);
    return w;
}

// (Z - I) v
Mat shift_minus_identity(const Mat& v) {
    const Index n = v.rows();
    Mat out(n, v.cols());
    out.row(0) = -v.row(0);
    if (n > 1) out.bottomRows(n - 1) = v.topRows(n - 1) - v.bottomRows(n - 1);
    return out;
}

Mat e1_matrix(Index n, cplx value = 1.0) {
    Mat e = Mat::Zero(n, 1);
    e(0, 0) = value;
    return e;
}

Generator maybe_compress(const Generator& gen, const StructuredOptions& opts) {
    if (!opts.compress) return gen;
    return compress(gen, opts.tol_for(gen.n())).generator;
}

} // namespace

LinearOperator LinearOperator::identity(Index n) {
    return {n, [](const Mat& x) { return x; }, [](const Mat& x) { return x; }};
}

LinearOperator LinearOperator::from(const ToeplitzMatrix& t) {
    return {t.n(), [t](const Mat& x) { return toeplitz_matvec(t, x); },
            [t](const Mat& x) { return toeplitz_matvec(t, x, true); }};
}

LinearOperator LinearOperator::from(const Generator& gen) {
    auto op = std::make_shared<const GeneratorOperator>(gen);
    return {gen.n(), [op](const Mat& x) { return op->apply(x); },
            [op](const Mat& x) { return op->apply(x, true); }};
}

ToeplitzLike ToeplitzLike::from(const ToeplitzMatrix& t) { return {LinearOperator::from(t), toeplitz_generator(t)}; }

ToeplitzLike ToeplitzLike::from(const Generator& gen) { return {LinearOperator::from(gen), gen}; }

Mat apply_shifted_similarity(const LinearOperator& op, const Mat& x, bool adjoint) {
    const Mat w = inv_shift_minus_identity(x);
    return shift_minus_identity(adjoint ? op.apply_adjoint(w) : op.apply(w));
}

Generator product_generator(const ToeplitzLike& a1, const ToeplitzLike& a2, ProductForm form) {
    const Index n = a1.gen.n();
    if (a2.gen.n() != n || a1.op.n != n || a2.op.n != n)
        throw DimensionError("product_generator: dimension mismatch");
    const Index r2 = a2.gen.length();
    const Index r1 = a1.gen.length();
    Mat g(n, r1 + r2 + 1), b(n, r1 + r2 + 1);

    if (form == ProductForm::similarity) {
        // One batched product per operator: [G2 | e1] and [B1 | e1].
        Mat xg(n, r2 + 1);
        xg << a2.gen.G, e1_matrix(n);
        Mat xb(n, r1 + 1);
        xb << a1.gen.B, e1_matrix(n);
        const Mat pg = apply_shifted_similarity(a1.op, xg);
        const Mat pb = apply_shifted_similarity(a2.op, xb, true);
        g << pg.leftCols(r2), a1.gen.G, -pg.col(r2);
        b << a2.gen.B, pb.leftCols(r1), pb.col(r1);
        return Generator(std::move(g), std::move(b));
    }

    // grad(A1 A2) = G1 (A2^* B1)^* + (Z A1 Z^* G2) B2^* - (Z A1 e_n)(Z A2^* e_n)^*
    Mat xg = Mat::Zero(n, r2 + 1);
    xg.topLeftCorner(n - 1, r2) = a2.gen.G.bottomRows(n - 1);
    xg(n - 1, r2) = 1.0;
    Mat xb(n, r1 + 1);
    xb << a1.gen.B, Mat::Zero(n, 1);
    xb(n - 1, r1) = 1.0;
    const Mat ag = a1.op.apply(xg);
    const Mat ab = a2.op.apply_adjoint(xb);
    Mat zag = Mat::Zero(n, r2 + 1);
    zag.bottomRows(n - 1) = ag.topRows(n - 1);
    Vec zlast = Vec::Zero(n);
    zlast.tail(n - 1) = ab.col(r1).head(n - 1);
    g << a1.gen.G, zag.leftCols(r2), -zag.col(r2);
    b << ab.leftCols(r1), a2.gen.B, zlast;
    return Generator(std::move(g), std::move(b));
}

Generator inverse_generator(const ToeplitzMatrix& t, const StructuredOptions& opts) {
    return inverse_generator(t, TlFactorization::factor(t, opts.gko), opts);
}

Generator inverse_generator(const ToeplitzMatrix& t, const TlFactorization& fact, const StructuredOptions&) {
    const Index n = t.n();
    Mat ends = Mat::Zero(n, 2);
    ends(0, 0) = 1.0;
    ends(n - 1, 1) = 1.0;
    // first and last columns of T^{-1} and T^{-*}
    const Mat x = fact.solve(ends);
    const Mat xa = fact.solve_adjoint(ends);
    const cplx x0 = x(0, 0);
    if (std::abs(x0) > 1e-8 * x.col(0).cwiseAbs().maxCoeff()) {
        // grad(T^{-1}) = (x xa^* - Z y (Z ya)^*) / x0
        Mat g(n, 2), b(n, 2);
        g.col(0) = x.col(0) / x0;
        g.col(1).setZero();
        g.col(1).tail(n - 1) = -x.col(1).head(n - 1) / x0;
        b.col(0) = xa.col(0);
        b.col(1).setZero();
        b.col(1).tail(n - 1) = xa.col(1).head(n - 1);
        return Generator(std::move(g), std::move(b));
    }

    // T^{-1}_{00} vanishes: fall back to the shifted-similarity form
    const Generator tg = toeplitz_generator(t);
    Mat rg(n, 2), rb(n, 2);
    rg << -tg.G.col(0), e1_matrix(n);
    rb << e1_matrix(n), -tg.B.col(1);

    Mat g = shift_minus_identity(fact.solve(inv_shift_minus_identity(rg)));
    Mat b = shift_minus_identity(fact.solve_adjoint(inv_shift_minus_identity(rb)));
    g(0, 0) += 1.0;
    b(0, 1) += 1.0;
    return Generator(std::move(g), std::move(b));
}

std::vector<Generator> power_generators(const ToeplitzMatrix& t, int s, const StructuredOptions& opts) {
    if (s < 1) throw std::invalid_argument("power_generators: need s >= 1");
    const Index n = t.n();
    const LinearOperator op = LinearOperator::from(t);
    const Generator base = toeplitz_generator(t);

    // pg[k] = P_G^k G, pb[k] = P_B^k B
    std::vector<Mat> pg{base.G}, pb{base.B};
    for (int k = 1; k < s; ++k) {
        pg.push_back(apply_shifted_similarity(op, pg.back()));
        pb.push_back(apply_shifted_similarity(op, pb.back(), true));
    }

    std::vector<Generator> out;
    out.reserve(static_cast<std::size_t>(s));
    out.push_back(base);
    for (int i = 1; i < s; ++i) {
        const Index len = 3 * (i + 1) - 1;
        Mat g(n, len), b(n, len);
        Index at = 0;
        for (int k = 0; k <= i; ++k) {
            g.middleCols(at, 2) = pg[static_cast<std::size_t>(i - k)];
            b.middleCols(at, 2) = pb[static_cast<std::size_t>(k)];
            at += 2;
        }
        for (int k = 1; k <= i; ++k) {
            g.col(at) = -pg[static_cast<std::size_t>(k)].col(1);
            b.col(at) = pb[static_cast<std::size_t>(i + 1 - k)].col(0);
            ++at;
        }
        out.push_back(maybe_compress(Generator(std::move(g), std::move(b)), opts));
    }
    return out;
}

Generator poly_generator(const ToeplitzMatrix& t, const Polynomial& p, PolyScheme scheme,
                         const StructuredOptions& opts) {
    const Index n = t.n();
    const int s = p.degree();
    if (s < 0) return Generator::zero(n, 0);
    if (s == 0) return Generator(e1_matrix(n, p.coeff(0)), e1_matrix(n));

    if (scheme == PolyScheme::monomial) {
        const auto powers = power_generators(t, s, opts);
        Generator acc(e1_matrix(n, p.coeff(0)), e1_matrix(n));
        for (int k = 1; k <= s; ++k) {
            const cplx a = p.coeff(k);
            if (a == cplx(0.0)) continue;
            acc = acc.concat(powers[static_cast<std::size_t>(k - 1)].scaled(a));
        }
        return maybe_compress(acc, opts);
    }

    // recompress only once the length has doubled
    const ToeplitzLike tl = ToeplitzLike::from(t);
    Generator acc(e1_matrix(n, p.coeff(s)), e1_matrix(n));
    Index compressed_len = 1;
    for (int k = 1; k <= s; ++k) {
        Generator next = product_generator(tl, ToeplitzLike::from(acc));
        const cplx a = p.coeff(s - k);
        if (a != cplx(0.0)) next = next.concat(Generator(e1_matrix(n, a), e1_matrix(n)));
        if (k == s || next.length() > 2 * compressed_len + 4) {
            acc = maybe_compress(next, opts);
            compressed_len = acc.length();
        } else {
            acc = std::move(next);
        }
    }
    return acc;
}

Generator rational_generator(const ToeplitzMatrix& t, const Polynomial& p, const Polynomial& q,
                             const StructuredOptions& opts) {
    const Index n = t.n();
    if (q.degree() < 0) throw SingularSystemError("rational_generator: denominator is the zero polynomial", 0, 0.0);
    // numerator and denominator are always compressed, at no more than u;
    // `opts.compress` and `opts.tol` govern only the assembled result
    StructuredOptions inner = opts;
    inner.compress = true;
    inner.tol = std::min(opts.tol_for(n), unit_roundoff);
    const Generator gp = poly_generator(t, p, PolyScheme::horner, inner);
    const Generator gq = poly_generator(t, q, PolyScheme::horner, inner);
    const Index rp = gp.length();
    const Index rq = gq.length();

    const auto fact = TlFactorization::factor(gq, opts.gko);

    // grad(R) = Q^{-1} [Gp Bp^* - Gq (Z R^* Z^* Bq)^* + Z Q e_n (Z R^* e_n)^*]
    // from the commutator R Z - Z R = Q^{-1} (C_P - C_Q R)
    Mat en = Mat::Zero(n, 1);
    en(n - 1, 0) = 1.0;
    const Mat qn = GeneratorOperator(gq).apply(en);
    Mat xs(n, rp + rq + 1);
    xs.leftCols(rp) = gp.G;
    xs.middleCols(rp, rq) = -gq.G;
    xs.col(rp + rq).setZero();
    if (n > 1) xs.col(rp + rq).tail(n - 1) = qn.col(0).head(n - 1);
    Mat g = fact.solve(xs);

    Mat ys = Mat::Zero(n, rq + 1);
    if (n > 1) ys.topLeftCorner(n - 1, rq) = gq.B.bottomRows(n - 1);
    ys(n - 1, rq) = 1.0;
    Mat ry = fact.solve_adjoint(ys);
    if (rp > 0) ry = GeneratorOperator(gp).apply(ry, true);
    else ry.setZero();
    Mat b = Mat::Zero(n, rp + rq + 1);
    b.leftCols(rp) = gp.B;
    if (n > 1) b.rightCols(rq + 1).bottomRows(n - 1) = ry.topRows(n - 1);
    return maybe_compress(Generator(std::move(g), std::move(b)), opts);
}

Generator partial_fraction_generator(const ToeplitzMatrix& t, const std::vector<cplx>& poles,
                                     const std::vector<cplx>& residues, const Polynomial& poly_part,
                                     const PartialFractionOptions& opts) {
    if (poles.size() != residues.size())
        throw std::invalid_argument("partial_fraction_generator: poles and residues differ in length");
    const Index n = t.n();
    const bool real = opts.pair_conjugates && t.is_real();
    const StructuredOptions& so = opts.structured;

    auto term = [&](std::size_t i) {
        try {
            return inverse_generator(t.shifted(-poles[i]), so).scaled(residues[i]);
        } catch (const SingularSystemError& e) {
            std::ostringstream msg;
            msg << "partial fractions: pole " << i << " (" << poles[i].real() << (poles[i].imag() < 0 ? "" : "+")
                << poles[i].imag() << "i): " << e.what();
            throw SingularSystemError(msg.str(), e.step(), e.pivot_ratio(), static_cast<Index>(i));
        }
    };

    Generator acc = Generator::zero(n, 0);
    std::vector<bool> used(poles.size(), false);
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const cplx a = poles[i];
        const double scale = std::max(1.0, std::abs(a));
        if (real) {
            if (std::abs(a.imag()) <= 1e-14 * scale && std::abs(residues[i].imag()) <= 1e-14 * std::max(1.0, std::abs(residues[i]))) {
                const Generator g = term(i);
                Mat gg(n, 2 * g.length()), bb(n, 2 * g.length());
                gg << g.G.real().cast<cplx>(), g.G.imag().cast<cplx>();
                bb << g.B.real().cast<cplx>(), g.B.imag().cast<cplx>();
                acc = acc.concat(Generator(std::move(gg), std::move(bb)));
                continue;
            }
            std::size_t partner = poles.size();
            for (std::size_t j = i + 1; j < poles.size(); ++j) {
                if (!used[j] && std::abs(poles[j] - std::conj(a)) <= 1e-10 * scale &&
                    std::abs(residues[j] - std::conj(residues[i])) <= 1e-10 * std::max(1.0, std::abs(residues[i]))) {
                    partner = j;
                    break;
                }
            }
            if (partner < poles.size()) {
                used[partner] = true;
                const Generator g = term(i);
                Mat gg(n, 2 * g.length()), bb(n, 2 * g.length());
                gg << (2.0 * g.G.real()).cast<cplx>(), (2.0 * g.G.imag()).cast<cplx>();
                bb << g.B.real().cast<cplx>(), g.B.imag().cast<cplx>();
                acc = acc.concat(Generator(std::move(gg), std::move(bb)));
                continue;
            }
        }
        acc = acc.concat(term(i));
    }
    if (poly_part.degree() >= 0) acc = acc.concat(poly_generator(t, poly_part, PolyScheme::horner, so));
    return maybe_compress(acc, so);
}

CompressedGenerator square_generator(const Generator& gen, double tol, Index cap) {
    const ToeplitzLike a = ToeplitzLike::from(gen);
    CompressedGenerator out = compress(product_generator(a, a), tol);
    if (cap >= 0 && out.generator.length() > cap) throw GeneratorCapExceeded(out.generator.length(), cap);
    return out;
}

} // namespace toepexp
