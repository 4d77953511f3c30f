#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toepexp/generator.hpp"
#include "toepexp/solver.hpp"
#include "toepexp/toeplitz.hpp"

namespace toepexp {

// Thresholds theta_m of the diagonal ladder, m in {3, 5, 7, 9, 13}.
struct ThetaTable {
    std::vector<int> degrees{3, 5, 7, 9, 13};
    std::vector<double> theta{1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                              2.097847961257068, 5.371920351148152};
};

struct ScalingChoice {
    int rho = 0;
    int k = 0; // numerator degree
    int m = 0; // denominator degree
};

// Smallest m with norm1 <= theta_m and rho = 0; otherwise the largest degree
// and rho = ceil(log2(norm1 / theta_max)).
ScalingChoice select_scaling_diagonal(double norm1_value, const ThetaTable& table = {});

// One rung of the subdiagonal ladder: used while ||T||_2 <= bound.
struct SubdiagonalRung {
    double bound;
    int k;
    int m;
    int rho;
};

std::vector<SubdiagonalRung> default_subdiagonal_ladder();

// First rung whose bound covers norm2_value; beyond the last bound the last
// rung is used.
ScalingChoice select_scaling_subdiagonal(double norm2_value, const std::vector<SubdiagonalRung>& ladder);

struct ExpmOptions {
    // Relative truncation tolerance of the compressions; < 0 selects n * u.
    double compression_tol = -1.0;
    // Tolerance of the single compression of the Pade approximant; < 0 selects
    // min(u, compression tolerance).
    double approximant_tol = -1.0;
    // Threshold for reported numerical ranks (relative to sigma_1).
    double rank_report_tol = 1e-10;
    // Generator length cap = cap_factor * sqrt(n) (never above n); <= 0 disables.
    double cap_factor = 4.0;
    // Switch to dense squaring once a squared generator is longer than cap.
    // When false a GeneratorCapExceeded error propagates instead.
    bool allow_dense_fallback = true;
    // The n/6 dense-squaring variant: switch once the length exceeds
    // gemm_fraction * n; <= 0 keeps the structured path.
    double gemm_fraction = 0.0;
    // Keep the dense exponential in the result when dense squaring ran.
    bool keep_dense = false;

    ThetaTable theta;
    std::vector<SubdiagonalRung> ladder = default_subdiagonal_ladder();
    int norm2_iters = 20;
    double norm2_tol = 1e-3;
    bool pair_conjugates = true;
    GkoOptions gko;

    double tol_for(Index n) const;
    double approximant_tol_for(Index n) const;
    // -1 when disabled
    Index cap_for(Index n) const;
    Index gemm_threshold_for(Index n) const;

    // JSON object; unknown keys raise ConfigError.
    static ExpmOptions from_json(const std::string& text);
    std::string to_json() const;
};

struct PhaseTimes {
    double norm = 0.0;
    double approximant = 0.0;
    double squaring = 0.0;
    double total = 0.0;
};

struct ExpmResult {
    Generator generator;
    int rho = 0;
    int pade_k = 0;
    int pade_m = 0;
    double norm_value = 0.0; // ||T||_1 (expmt) or the ||T - shift I||_2 estimate (sexpmt)
    double shift = 0.0;
    Index approximant_length = 0;
    // length after compression at each squaring step; -1 for a dense step
    std::vector<Index> rank_trace;
    // n sigma_{r+1} of every compression in the squaring phase
    std::vector<double> compression_bounds;
    // singular values of the final displacement (from the last compression)
    RVec final_singular_values;
    bool dense_fallback = false;
    int dense_from_step = -1;
    std::optional<Mat> dense;
    std::vector<std::string> warnings;
    PhaseTimes times;

    // Number of final singular values above rel_tol * sigma_1.
    Index numerical_rank(double rel_tol) const;
    double total_compression_bound() const;
};

// Diagonal Pade scaling and squaring on generators.
ExpmResult expmt(const ToeplitzMatrix& t, const ExpmOptions& opts = {});

// Subdiagonal Pade in partial fractions with a bounded number of squarings;
// intended for T - shift I with spectrum near the negative real axis.
ExpmResult sexpmt(const ToeplitzMatrix& t, double shift = 0.0, const ExpmOptions& opts = {});

Mat reconstruct(const ExpmResult& result);

// rho, degrees, rank trace, bounds, timings and warnings as JSON.
std::string diagnostics_json(const ExpmResult& result);

} // namespace toepexp
