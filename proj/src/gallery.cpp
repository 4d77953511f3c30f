#include "toepexp/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "toepexp/io.hpp"

namespace toepexp {

namespace {

double param(const GallerySpec& s, const std::string& key, double fallback) {
    auto it = s.params.find(key);
    return it == s.params.end() ? fallback : it->second;
}

double normal_pdf(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

ToeplitzMatrix from_real(const RVec& col, const RVec& row) {
    return make_toeplitz(col.cast<cplx>(), row.cast<cplx>());
}

ToeplitzMatrix symmetric(const RVec& col) { return from_real(col, col); }

} // namespace

double MertonParams::kappa() const { return std::exp(mu + 0.5 * sigma * sigma) - 1.0; }

void MertonParams::validate() const {
    if (!(xi_min < xi_max)) throw ConfigError("merton: need xi_min < xi_max");
    if (!(nu >= 0.0)) throw ConfigError("merton: nu must be nonnegative");
    if (!(lambda >= 0.0)) throw ConfigError("merton: lambda must be nonnegative");
    if (!(sigma > 0.0)) throw ConfigError("merton: sigma must be positive");
}

ToeplitzMatrix merton_matrix(Index n, const MertonParams& p) {
    if (n < 3) throw ConfigError("merton: need n >= 3");
    p.validate();
    const double h = (p.xi_max - p.xi_min) / static_cast<double>(n + 1);
    const double c = p.r - p.lambda * p.kappa() - 0.5 * p.nu * p.nu;
    const double diff = p.nu * p.nu / (2.0 * h * h);
    RVec col(n), row(n);
    col(0) = row(0) = -p.nu * p.nu / (h * h) - (p.r + p.lambda) + p.lambda * normal_pdf(0.0, p.mu, p.sigma) * h;
    for (Index j = 1; j < n; ++j) {
        const double x = static_cast<double>(j) * h;
        row(j) = p.lambda * normal_pdf(x, p.mu, p.sigma) * h;
        col(j) = p.lambda * normal_pdf(-x, p.mu, p.sigma) * h;
    }
    row(1) += diff + c / (2.0 * h);
    col(1) += diff - c / (2.0 * h);
    return from_real(col, row);
}

std::vector<std::string> gallery_names() {
    return {"identity", "tridiag",  "gaussian_random", "skew_oscillation", "complex_random_unit_norm",
            "laplacian", "merton",  "file",            "kms",              "prolate",
            "fiedler",  "grcar",    "parter",          "gaussian_kernel",  "triw",
            "cauchy_decay"};
}

ToeplitzMatrix build_gallery(const GallerySpec& spec) {
    const std::string& name = spec.name;
    const Index n = spec.n;
    if (name != "file" && n < 1) throw ConfigError("gallery: n must be positive");
    const double alpha = param(spec, "alpha", 1.0);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> nd;

    ToeplitzMatrix t;
    if (name == "identity") {
        t = identity_toeplitz(n);
    } else if (name == "tridiag") {
        RVec col = RVec::Zero(n), row = RVec::Zero(n);
        col(0) = row(0) = param(spec, "a", 2.0);
        if (n > 1) {
            col(1) = param(spec, "b", -1.0);
            row(1) = param(spec, "c", -1.0);
        }
        t = from_real(col, row);
    } else if (name == "gaussian_random") {
        RVec col(n), row(n);
        for (Index i = 0; i < n; ++i) col(i) = nd(rng);
        row(0) = col(0);
        for (Index i = 1; i < n; ++i) row(i) = nd(rng);
        t = from_real(col, row);
    } else if (name == "skew_oscillation") {
        RVec col = RVec::Zero(n), row = RVec::Zero(n);
        if (n > 1) {
            col(1) = 1.0;
            row(1) = -1.0;
        }
        t = from_real(col, row);
    } else if (name == "complex_random_unit_norm") {
        Vec col(n), row(n);
        for (Index i = 0; i < n; ++i) col(i) = cplx(nd(rng), nd(rng));
        row(0) = col(0);
        for (Index i = 1; i < n; ++i) row(i) = cplx(nd(rng), nd(rng));
        const ToeplitzMatrix raw = make_toeplitz(col, row);
        const double s = norm2_estimate(raw, 200, 1e-8, spec.seed ^ 0x9e3779b97f4a7c15ULL);
        t = s > 0 ? raw.scaled(1.0 / s) : raw;
    } else if (name == "laplacian") {
        RVec col = RVec::Zero(n);
        col(0) = -2.0;
        if (n > 1) col(1) = 1.0;
        t = symmetric(col);
    } else if (name == "merton") {
        MertonParams p;
        p.xi_min = param(spec, "xi_min", p.xi_min);
        p.xi_max = param(spec, "xi_max", p.xi_max);
        p.nu = param(spec, "nu", p.nu);
        p.r = param(spec, "r", p.r);
        p.lambda = param(spec, "lambda", p.lambda);
        p.mu = param(spec, "mu", p.mu);
        p.sigma = param(spec, "sigma", p.sigma);
        p.strike = param(spec, "strike", p.strike);
        t = merton_matrix(n, p);
    } else if (name == "file") {
        if (spec.path.empty()) throw ConfigError("gallery: 'file' needs a path");
        t = read_toeplitz_file(spec.path);
    } else if (name == "kms") {
        const double rho = param(spec, "rho", 0.5);
        RVec col(n);
        for (Index k = 0; k < n; ++k) col(k) = std::pow(rho, static_cast<double>(k));
        t = symmetric(col);
    } else if (name == "prolate") {
        const double w = param(spec, "w", 0.25);
        RVec col(n);
        col(0) = 2.0 * w;
        for (Index k = 1; k < n; ++k)
            col(k) = std::sin(2.0 * std::numbers::pi * w * static_cast<double>(k)) / (std::numbers::pi * static_cast<double>(k));
        t = symmetric(col);
    } else if (name == "fiedler") {
        RVec col(n);
        for (Index k = 0; k < n; ++k) col(k) = static_cast<double>(k) / static_cast<double>(n);
        t = symmetric(col);
    } else if (name == "grcar") {
        const Index kk = static_cast<Index>(param(spec, "k", 3.0));
        RVec col = RVec::Zero(n), row = RVec::Zero(n);
        col(0) = row(0) = 1.0;
        if (n > 1) col(1) = -1.0;
        for (Index j = 1; j <= kk && j < n; ++j) row(j) = 1.0;
        t = from_real(col, row);
    } else if (name == "parter") {
        RVec col(n), row(n);
        for (Index k = 0; k < n; ++k) {
            col(k) = 1.0 / (static_cast<double>(k) + 0.5);
            row(k) = 1.0 / (0.5 - static_cast<double>(k));
        }
        t = from_real(col, row);
    } else if (name == "gaussian_kernel") {
        const double a = param(spec, "a", 0.5);
        RVec col(n);
        for (Index k = 0; k < n; ++k) col(k) = std::exp(-a * static_cast<double>(k * k));
        t = symmetric(col);
    } else if (name == "triw") {
        const double w = param(spec, "w", -1.0);
        RVec col = RVec::Zero(n), row = RVec::Constant(n, w);
        col(0) = row(0) = 1.0;
        t = from_real(col, row);
    } else if (name == "cauchy_decay") {
        RVec col(n), row(n);
        for (Index k = 0; k < n; ++k) {
            const double d = 1.0 + static_cast<double>(k);
            col(k) = 1.0 / (d * d);
            row(k) = -0.5 / (d * d);
        }
        row(0) = col(0);
        t = from_real(col, row);
    } else {
        throw ConfigError("gallery: unknown matrix '" + name + "'");
    }
    return alpha == 1.0 ? t : t.scaled(alpha);
}

std::vector<GallerySpec> small_gallery(Index n) {
    std::vector<GallerySpec> out;
    auto add = [&](std::string name, std::map<std::string, double> params = {}, std::uint64_t seed = 0) {
        out.push_back({std::move(name), n, std::move(params), seed, ""});
    };
    add("identity");
    add("tridiag");
    add("gaussian_random", {}, 1);
    add("skew_oscillation");
    add("complex_random_unit_norm", {}, 7);
    add("laplacian");
    add("kms");
    add("prolate");
    add("fiedler");
    add("grcar");
    add("parter");
    add("gaussian_kernel");
    add("triw");
    add("merton");
    add("merton", {{"alpha", 10.0}});
    add("merton", {{"alpha", 100.0}});
    return out;
}

} // namespace toepexp
