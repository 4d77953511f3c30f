#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "toepexp/expm.hpp"
#include "toepexp/gallery.hpp"

namespace toepexp {

struct BenchRecord {
    std::string matrix; // gallery name, with alpha when scaled
    Index n = 0;
    double alpha = 1.0;
    std::string method; // expmt, sexpmt, expmt-GEMM, sexpmt-GEMM, dense
    double seconds = 0.0;
    Index final_rank = -1;
    std::vector<Index> rank_trace;
    int rho = -1;
    // relative Frobenius error vs the dense reference; NaN when not computed
    double error = std::numeric_limits<double>::quiet_NaN();
    // tolerance the error is judged against (NaN when none applies)
    double bound = std::numeric_limits<double>::quiet_NaN();
    bool dense_fallback = false;
    std::string status = "ok";
};

struct BenchReport {
    std::string experiment;
    std::vector<BenchRecord> records;
    std::map<std::string, double> summary;

    void write_csv(std::ostream& os) const;
    static BenchReport parse_csv(std::istream& is);
    std::string summary_json() const;
};

// log(t2 / t1) / log(n2 / n1)
double scaling_exponent(double n1, double t1, double n2, double t2);
// least-squares slope of log t against log n
double fitted_exponent(const std::vector<double>& n, const std::vector<double>& t);

// Config JSON (all keys optional except "experiment"):
//   experiment: tiny_errors | random_ranks | oscillation_table | merton_scaling | merton_ranks
//   sizes: [n, ...]         alphas: [alpha, ...]      methods: [name, ...]
//   gallery: [{name, n, params, seed, path}, ...]     (tiny_errors)
//   seed, repeats, compute_errors, dense_limit, rank_tol, shift
//   options: ExpmOptions object
struct BenchConfig {
    std::string experiment;
    std::vector<Index> sizes;
    std::vector<double> alphas;
    std::vector<std::string> methods;
    std::vector<GallerySpec> gallery;
    std::uint64_t seed = 11;
    int repeats = 1;
    bool compute_errors = true;
    Index dense_limit = 4096;
    double rank_tol = 1e-10;
    double shift = 0.0;
    ExpmOptions options;

    static BenchConfig from_json(const std::string& text);
    // defaults of the named experiment
    static BenchConfig defaults(const std::string& experiment);
};

BenchReport run_experiment(const BenchConfig& config);

// One method on one matrix; failures are recorded in `status`.
BenchRecord run_method(const ToeplitzMatrix& t, const std::string& method, const BenchConfig& config,
                       const std::string& matrix_id, double alpha);

std::vector<std::string> experiment_names();

} // namespace toepexp
