#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "toepexp/toeplitz.hpp"

namespace toepexp {

// Merton jump-diffusion log-price model on [xi_min, xi_max]; jump sizes are
// normal with mean mu and standard deviation sigma.
struct MertonParams {
    double xi_min = -2.0;
    double xi_max = 2.0;
    double nu = 0.25;
    double r = 0.05;
    double lambda = 0.1;
    double mu = -0.9;
    double sigma = 0.45;
    double strike = 100.0; // payoff only; does not enter the operator

    double kappa() const;
    void validate() const;
};

// Central differences for the diffusion and drift, rectangle rule for the
// jump integral truncated to the grid, homogeneous Dirichlet boundary.
// h = (xi_max - xi_min) / (n + 1), c = r - lambda kappa - nu^2/2:
//   t_0        = -nu^2/h^2 - (r + lambda) + lambda phi(0) h
//   A[i][i+1]  =  nu^2/(2h^2) + c/(2h) + lambda phi(h) h
//   A[i][i-1]  =  nu^2/(2h^2) - c/(2h) + lambda phi(-h) h
//   A[i][i+-j] =  lambda phi(+-jh) h,  j >= 2
ToeplitzMatrix merton_matrix(Index n, const MertonParams& p);

// Named, deterministic test matrices.
//   identity, tridiag (a, b, c), gaussian_random, skew_oscillation,
//   complex_random_unit_norm, laplacian, merton, file,
//   kms (rho), prolate (w), fiedler, grcar, parter, gaussian_kernel (a),
//   triw (alpha), cauchy_decay.
// Every matrix is multiplied by params["alpha"] (default 1).
struct GallerySpec {
    std::string name;
    Index n = 0;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;
    std::string path; // for "file"
};

ToeplitzMatrix build_gallery(const GallerySpec& spec);

std::vector<std::string> gallery_names();

// The representative set used for the small-matrix accuracy study.
std::vector<GallerySpec> small_gallery(Index n);

} // namespace toepexp
