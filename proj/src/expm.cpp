#include "toepexp/expm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "toepexp/pade.hpp"
#include "toepexp/structured.hpp"

namespace toepexp {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void validate_degree(int d, const char* what) {
    if (d < 0 || d > 13) throw ConfigError(std::string(what) + ": Pade degrees must lie in [0, 13]");
}

void validate(const ThetaTable& t) {
    if (t.degrees.empty() || t.degrees.size() != t.theta.size())
        throw ConfigError("theta table: degrees and thresholds must be nonempty and of equal length");
    for (std::size_t i = 0; i < t.degrees.size(); ++i) {
        validate_degree(t.degrees[i], "theta table");
        if (!(t.theta[i] > 0.0)) throw ConfigError("theta table: thresholds must be positive");
        if (i > 0 && !(t.theta[i] > t.theta[i - 1])) throw ConfigError("theta table: thresholds must increase");
    }
}

void validate(const std::vector<SubdiagonalRung>& ladder) {
    if (ladder.empty()) throw ConfigError("subdiagonal ladder: empty");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        validate_degree(ladder[i].k, "subdiagonal ladder");
        validate_degree(ladder[i].m, "subdiagonal ladder");
        if (ladder[i].m < 1) throw ConfigError("subdiagonal ladder: denominator degree must be positive");
        if (ladder[i].rho < 0) throw ConfigError("subdiagonal ladder: rho must be nonnegative");
        if (i > 0 && !(ladder[i].bound > ladder[i - 1].bound))
            throw ConfigError("subdiagonal ladder: bounds must increase");
    }
}

// Dense squaring, real when the data are real.
struct DenseState {
    bool real = false;
    RMat r;
    Mat c;

    void load(const Mat& a, bool is_real) {
        real = is_real;
        if (real) r = a.real();
        else c = a;
    }
    void square() {
        if (real) r = r * r;
        else c = c * c;
    }
    Mat value() const { return real ? Mat(r.cast<cplx>()) : c; }
    CompressedGenerator generator(double tol) const { return real ? generator_of_dense(r, tol) : generator_of_dense(c, tol); }
};

void square_phase(ExpmResult& res, Generator gen, const CompressionReport& start_report, bool real,
                  const ExpmOptions& opts) {
    const Index n = gen.n();
    const double tol = opts.tol_for(n);
    const Index cap = opts.cap_for(n);
    const Index gemm = opts.gemm_threshold_for(n);
    const auto t0 = clock_type::now();

    RVec last_sv = start_report.singular_values;
    DenseState dense;
    bool in_dense = false;
    auto enter_dense = [&](int step, const std::string& why) {
        dense.load(reconstruct(gen), real);
        in_dense = true;
        res.dense_fallback = true;
        res.dense_from_step = step;
        if (!why.empty()) res.warnings.push_back(why);
    };

    if (gemm > 0 && gen.length() > gemm && res.rho > 0) enter_dense(0, "");
    for (int step = 0; step < res.rho; ++step) {
        if (in_dense) {
            dense.square();
            res.rank_trace.push_back(-1);
            continue;
        }
        try {
            CompressedGenerator cg = square_generator(gen, tol, cap);
            gen = std::move(cg.generator);
            res.rank_trace.push_back(gen.length());
            res.compression_bounds.push_back(cg.report.bound_2norm);
            last_sv = cg.report.singular_values;
        } catch (const GeneratorCapExceeded& e) {
            if (!opts.allow_dense_fallback) throw;
            std::ostringstream msg;
            msg << "squaring step " << step << ": " << e.what();
            enter_dense(step, msg.str());
            dense.square();
            res.rank_trace.push_back(-1);
            continue;
        }
        if (gemm > 0 && gen.length() > gemm && step + 1 < res.rho) enter_dense(step + 1, "");
    }

    if (in_dense) {
        CompressedGenerator cg = dense.generator(tol);
        res.generator = std::move(cg.generator);
        res.final_singular_values = cg.report.singular_values;
        res.compression_bounds.push_back(cg.report.bound_2norm);
        if (opts.keep_dense) res.dense = dense.value();
    } else {
        res.generator = std::move(gen);
        res.final_singular_values = last_sv;
    }
    res.times.squaring = seconds_since(t0);
}

} // namespace

ScalingChoice select_scaling_diagonal(double norm1_value, const ThetaTable& table) {
    validate(table);
    if (!(norm1_value >= 0.0)) throw std::invalid_argument("select_scaling_diagonal: norm must be nonnegative");
    for (std::size_t i = 0; i < table.degrees.size(); ++i)
        if (norm1_value <= table.theta[i]) return {0, table.degrees[i], table.degrees[i]};
    const double top = table.theta.back();
    const int rho = static_cast<int>(std::ceil(std::log2(norm1_value / top)));
    return {std::max(rho, 0), table.degrees.back(), table.degrees.back()};
}

std::vector<SubdiagonalRung> default_subdiagonal_ladder() {
    return {{0.125, 4, 5, 0}, {0.25, 4, 5, 1}, {0.5, 4, 5, 2}, {1.0, 4, 5, 3}, {1e300, 4, 5, 4}};
}

ScalingChoice select_scaling_subdiagonal(double norm2_value, const std::vector<SubdiagonalRung>& ladder) {
    validate(ladder);
    for (const auto& rung : ladder)
        if (norm2_value <= rung.bound) return {rung.rho, rung.k, rung.m};
    const auto& last = ladder.back();
    return {last.rho, last.k, last.m};
}

double ExpmOptions::tol_for(Index n) const { return compression_tol >= 0 ? compression_tol : default_compression_tol(n); }

double ExpmOptions::approximant_tol_for(Index n) const {
    return approximant_tol >= 0 ? approximant_tol : std::min(unit_roundoff, tol_for(n));
}

Index ExpmOptions::cap_for(Index n) const {
    if (cap_factor <= 0) return -1;
    const auto c = static_cast<Index>(std::floor(cap_factor * std::sqrt(static_cast<double>(n))));
    return std::max<Index>(1, std::min(c, n));
}

Index ExpmOptions::gemm_threshold_for(Index n) const {
    if (gemm_fraction <= 0) return -1;
    return std::max<Index>(1, static_cast<Index>(std::floor(gemm_fraction * static_cast<double>(n))));
}

ExpmOptions ExpmOptions::from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("options: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("options: expected a JSON object");
    ExpmOptions o;
    try {
        for (const auto& [key, val] : j.items()) {
            if (key == "compression_tol") o.compression_tol = val.get<double>();
            else if (key == "approximant_tol") o.approximant_tol = val.get<double>();
            else if (key == "rank_report_tol") o.rank_report_tol = val.get<double>();
            else if (key == "cap_factor") o.cap_factor = val.get<double>();
            else if (key == "allow_dense_fallback") o.allow_dense_fallback = val.get<bool>();
            else if (key == "gemm_fraction") o.gemm_fraction = val.get<double>();
            else if (key == "keep_dense") o.keep_dense = val.get<bool>();
            else if (key == "norm2_iters") o.norm2_iters = val.get<int>();
            else if (key == "norm2_tol") o.norm2_tol = val.get<double>();
            else if (key == "pair_conjugates") o.pair_conjugates = val.get<bool>();
            else if (key == "theta") {
                o.theta.degrees = val.at("degrees").get<std::vector<int>>();
                o.theta.theta = val.at("theta").get<std::vector<double>>();
            } else if (key == "ladder") {
                o.ladder.clear();
                for (const auto& r : val)
                    o.ladder.push_back({r.at("bound").get<double>(), r.at("k").get<int>(), r.at("m").get<int>(),
                                        r.at("rho").get<int>()});
            } else if (key == "gko") {
                for (const auto& [gk, gv] : val.items()) {
                    if (gk == "pivot_tol_factor") o.gko.pivot_tol_factor = gv.get<double>();
                    else if (gk == "reorthogonalize") o.gko.reorthogonalize = gv.get<bool>();
                    else if (gk == "refinement_steps") o.gko.refinement_steps = gv.get<int>();
                    else throw ConfigError("options: unknown gko key '" + gk + "'");
                }
            } else {
                throw ConfigError("options: unknown key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("options: ") + e.what());
    }
    if (o.norm2_iters < 1) throw ConfigError("options: norm2_iters must be >= 1");
    validate(o.theta);
    validate(o.ladder);
    return o;
}

std::string ExpmOptions::to_json() const {
    nlohmann::json j;
    j["compression_tol"] = compression_tol;
    j["approximant_tol"] = approximant_tol;
    j["rank_report_tol"] = rank_report_tol;
    j["cap_factor"] = cap_factor;
    j["allow_dense_fallback"] = allow_dense_fallback;
    j["gemm_fraction"] = gemm_fraction;
    j["keep_dense"] = keep_dense;
    j["norm2_iters"] = norm2_iters;
    j["norm2_tol"] = norm2_tol;
    j["pair_conjugates"] = pair_conjugates;
    j["theta"] = {{"degrees", theta.degrees}, {"theta", theta.theta}};
    j["ladder"] = nlohmann::json::array();
    for (const auto& r : ladder) j["ladder"].push_back({{"bound", r.bound}, {"k", r.k}, {"m", r.m}, {"rho", r.rho}});
    j["gko"] = {{"pivot_tol_factor", gko.pivot_tol_factor},
                {"reorthogonalize", gko.reorthogonalize},
                {"refinement_steps", gko.refinement_steps}};
    return j.dump(2);
}

Index ExpmResult::numerical_rank(double rel_tol) const {
    const RVec& s = final_singular_values;
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Index k = 0;
    while (k < s.size() && s(k) > rel_tol * s(0)) ++k;
    return k;
}

double ExpmResult::total_compression_bound() const {
    double acc = 0.0;
    for (double b : compression_bounds) acc += b;
    return acc;
}

ExpmResult expmt(const ToeplitzMatrix& t, const ExpmOptions& opts) {
    const auto t0 = clock_type::now();
    const Index n = t.n();
    ExpmResult res;

    auto tn = clock_type::now();
    res.norm_value = norm1(t);
    const ScalingChoice sc = select_scaling_diagonal(res.norm_value, opts.theta);
    res.rho = sc.rho;
    res.pade_k = sc.k;
    res.pade_m = sc.m;
    res.times.norm = seconds_since(tn);

    auto ta = clock_type::now();
    const ToeplitzMatrix ts = t.scaled(std::ldexp(1.0, -sc.rho));
    const PadeApproximant pade = pade_coefficients(sc.k, sc.m);
    StructuredOptions so;
    so.tol = opts.approximant_tol_for(n);
    so.gko = opts.gko;
    so.compress = false;
    const Generator raw = rational_generator(ts, pade.p, pade.q, so);
    CompressedGenerator approx = compress(raw, opts.approximant_tol_for(n));
    res.approximant_length = approx.generator.length();
    res.times.approximant = seconds_since(ta);

    square_phase(res, std::move(approx.generator), approx.report, t.is_real(), opts);
    res.times.total = seconds_since(t0);
    return res;
}

ExpmResult sexpmt(const ToeplitzMatrix& t, double shift, const ExpmOptions& opts) {
    const auto t0 = clock_type::now();
    const Index n = t.n();
    ExpmResult res;
    res.shift = shift;

    auto tn = clock_type::now();
    const ToeplitzMatrix tshift = shift != 0.0 ? t.shifted(-shift) : t;
    res.norm_value = norm2_estimate(tshift, opts.norm2_iters, opts.norm2_tol);
    const ScalingChoice sc = select_scaling_subdiagonal(res.norm_value, opts.ladder);
    res.rho = sc.rho;
    res.pade_k = sc.k;
    res.pade_m = sc.m;
    res.times.norm = seconds_since(tn);

    auto ta = clock_type::now();
    const ToeplitzMatrix ts = tshift.scaled(std::ldexp(1.0, -sc.rho));
    const PartialFractionForm pf = pade_to_partial_fractions(pade_coefficients(sc.k, sc.m));
    PartialFractionOptions po;
    po.structured.tol = opts.approximant_tol_for(n);
    po.structured.gko = opts.gko;
    po.structured.compress = false;
    po.pair_conjugates = opts.pair_conjugates;
    const Generator raw = partial_fraction_generator(ts, pf.poles, pf.residues, pf.poly_part, po);
    CompressedGenerator approx = compress(raw, opts.approximant_tol_for(n));
    res.approximant_length = approx.generator.length();
    res.times.approximant = seconds_since(ta);

    square_phase(res, std::move(approx.generator), approx.report, t.is_real(), opts);

    if (shift != 0.0) {
        const double f = std::exp(shift);
        res.generator.G *= f;
        if (res.dense) *res.dense *= f;
        res.final_singular_values *= f;
        for (double& b : res.compression_bounds) b *= f;
    }
    if (res.final_singular_values.size() > 0 &&
        res.total_compression_bound() > 1e-6 * res.final_singular_values(0) * static_cast<double>(n)) {
        std::ostringstream msg;
        msg << "accumulated compression bound " << res.total_compression_bound()
            << " is large; the spectrum of T - shift I may not lie near the negative real axis";
        res.warnings.push_back(msg.str());
    }
    res.times.total = seconds_since(t0);
    return res;
}

Mat reconstruct(const ExpmResult& result) {
    if (result.dense) return *result.dense;
    return reconstruct(result.generator);
}

std::string diagnostics_json(const ExpmResult& r) {
    nlohmann::json j;
    j["n"] = r.generator.n();
    j["length"] = r.generator.length();
    j["rho"] = r.rho;
    j["pade"] = {{"k", r.pade_k}, {"m", r.pade_m}};
    j["norm"] = r.norm_value;
    j["shift"] = r.shift;
    j["approximant_length"] = r.approximant_length;
    j["rank_trace"] = r.rank_trace;
    j["compression_bounds"] = r.compression_bounds;
    j["total_compression_bound"] = r.total_compression_bound();
    j["numerical_rank_1e-10"] = r.numerical_rank(1e-10);
    j["dense_fallback"] = r.dense_fallback;
    j["dense_from_step"] = r.dense_from_step;
    j["warnings"] = r.warnings;
    j["times"] = {{"norm", r.times.norm},
                  {"approximant", r.times.approximant},
                  {"squaring", r.times.squaring},
                  {"total", r.times.total}};
    return j.dump(2);
}

} // namespace toepexp
