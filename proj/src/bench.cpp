#include "toepexp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "toepexp/dense.hpp"

namespace toepexp {

namespace {

using nlohmann::json;
using clock_type = std::chrono::steady_clock;

const char* csv_header = "matrix,n,alpha,method,seconds,final_rank,rho,rank_trace,error,bound,dense_fallback,status";

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = c == ',' ? ';' : ' ';
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw ConfigError("bench csv: bad number '" + s + "'");
    }
}

std::string matrix_id(const std::string& name, double alpha) {
    if (alpha == 1.0) return name;
    std::ostringstream os;
    os << name << "*" << alpha;
    return os.str();
}

bool is_structured(const std::string& m) {
    return m == "expmt" || m == "sexpmt" || m == "expmt-GEMM" || m == "sexpmt-GEMM";
}

Mat reference_expm(const ToeplitzMatrix& t) {
    if (t.is_real()) return dense_expm_reference(RMat(t.dense().real())).cast<cplx>();
    return dense_expm_reference(t.dense());
}

BenchRecord record_for(const ToeplitzMatrix& t, const std::string& method, const BenchConfig& cfg,
                       const std::string& id, double alpha, const Mat* ref) {
    BenchRecord rec;
    rec.matrix = id;
    rec.n = t.n();
    rec.alpha = alpha;
    rec.method = method;
    try {
        if (method == "dense") {
            if (t.n() > cfg.dense_limit) throw DimensionError("dense reference above the dense limit");
            double best = std::numeric_limits<double>::infinity();
            for (int k = 0; k < std::max(1, cfg.repeats); ++k) {
                const auto t0 = clock_type::now();
                if (t.is_real()) {
                    const RMat e = dense_expm_reference(RMat(t.dense().real()), cfg.dense_limit);
                    (void)e;
                } else {
                    const Mat e = dense_expm_reference(t.dense(), cfg.dense_limit);
                    (void)e;
                }
                best = std::min(best, std::chrono::duration<double>(clock_type::now() - t0).count());
            }
            rec.seconds = best;
            return rec;
        }
        if (!is_structured(method)) throw ConfigError("unknown method '" + method + "'");

        ExpmOptions opts = cfg.options;
        if (method.ends_with("-GEMM")) opts.gemm_fraction = 1.0 / 6.0;
        const bool sub = method.starts_with("sexpmt");
        ExpmResult res;
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < std::max(1, cfg.repeats); ++k) {
            const auto t0 = clock_type::now();
            res = sub ? sexpmt(t, cfg.shift, opts) : expmt(t, opts);
            best = std::min(best, std::chrono::duration<double>(clock_type::now() - t0).count());
        }
        rec.seconds = best;
        rec.final_rank = res.numerical_rank(cfg.rank_tol);
        rec.rank_trace = res.rank_trace;
        rec.rho = res.rho;
        rec.dense_fallback = res.dense_fallback;
        if (ref) rec.error = (reconstruct(res) - *ref).norm() / ref->norm();
        if (!res.warnings.empty()) rec.status = "ok (" + sanitize(res.warnings.front()) + ")";
    } catch (const std::exception& e) {
        rec.status = "error: " + sanitize(e.what());
    }
    return rec;
}

void add_default(std::vector<std::string>& v, std::initializer_list<const char*> d) {
    if (v.empty())
        for (const char* s : d) v.emplace_back(s);
}

BenchReport tiny_errors(const BenchConfig& cfg) {
    BenchReport rep;
    const Index n = cfg.sizes.empty() ? 32 : cfg.sizes.front();
    const std::vector<GallerySpec> gallery = cfg.gallery.empty() ? small_gallery(n) : cfg.gallery;
    std::vector<std::string> methods = cfg.methods;
    add_default(methods, {"expmt"});
    double worst_ratio = 0.0, worst_oracle = 0.0;
    int within = 0, total = 0;
    for (const auto& spec : gallery) {
        const double alpha = spec.params.count("alpha") ? spec.params.at("alpha") : 1.0;
        const std::string id = matrix_id(spec.name, alpha);
        try {
            const ToeplitzMatrix t = build_gallery(spec);
            const Mat dense = t.dense();
            const Mat ref = dense_expm_extended(dense);
            const double kappa = dense.rows() <= 32 ? expm_condition_1norm_exact(dense) : expm_condition_1norm(dense);
            // cross-check of the extended-precision oracle
            worst_oracle = std::max(worst_oracle, (reference_expm(t) - ref).norm() / ref.norm() / (kappa * unit_roundoff));
            for (const auto& m : methods) {
                BenchRecord rec = record_for(t, m, cfg, id, alpha, &ref);
                rec.bound = 10.0 * kappa * unit_roundoff;
                if (std::isfinite(rec.error)) {
                    ++total;
                    const double ratio = rec.error / rec.bound;
                    worst_ratio = std::max(worst_ratio, ratio);
                    if (ratio <= 1.0) ++within;
                }
                rep.records.push_back(std::move(rec));
            }
        } catch (const std::exception& e) {
            BenchRecord rec;
            rec.matrix = id;
            rec.n = spec.n;
            rec.alpha = alpha;
            rec.method = "build";
            rec.status = "error: " + sanitize(e.what());
            rep.records.push_back(std::move(rec));
        }
    }
    rep.summary["worst_error_over_bound"] = worst_ratio;
    rep.summary["within_bound"] = within;
    rep.summary["measured"] = total;
    rep.summary["dense_vs_oracle_over_kappa_u"] = worst_oracle;
    return rep;
}

BenchReport random_ranks(const BenchConfig& cfg) {
    BenchReport rep;
    std::vector<std::string> methods = cfg.methods;
    add_default(methods, {"expmt", "expmt-GEMM"});
    for (Index n : cfg.sizes) {
        for (double alpha : cfg.alphas) {
            const ToeplitzMatrix t = build_gallery({"complex_random_unit_norm", n, {{"alpha", alpha}}, cfg.seed, ""});
            const bool err = cfg.compute_errors && n <= cfg.dense_limit;
            const Mat ref = err ? reference_expm(t) : Mat();
            for (const auto& m : methods) {
                BenchRecord rec = record_for(t, m, cfg, matrix_id("complex_random_unit_norm", alpha), alpha,
                                             err ? &ref : nullptr);
                Index mx = 0;
                for (Index r : rec.rank_trace) mx = std::max(mx, r);
                std::ostringstream key;
                key << "max_trace_" << m << "_n" << n << "_alpha" << alpha;
                rep.summary[key.str()] = static_cast<double>(mx);
                rep.records.push_back(std::move(rec));
            }
        }
    }
    return rep;
}

BenchReport oscillation_table(const BenchConfig& cfg) {
    BenchReport rep;
    std::vector<std::string> methods = cfg.methods;
    add_default(methods, {"dense", "expmt"});
    for (Index n : cfg.sizes) {
        for (double alpha : cfg.alphas) {
            const ToeplitzMatrix t = build_gallery({"skew_oscillation", n, {{"alpha", alpha}}, 0, ""});
            const std::string id = matrix_id("skew_oscillation", alpha);
            for (const auto& m : methods) {
                std::ostringstream key;
                key << "rank_" << m << "_n" << n << "_alpha" << alpha;
                if (m == "dense") {
                    BenchRecord rec;
                    rec.matrix = id;
                    rec.n = n;
                    rec.alpha = alpha;
                    rec.method = m;
                    try {
                        const auto t0 = clock_type::now();
                        const RMat e = dense_expm_reference(RMat(t.dense().real()), cfg.dense_limit);
                        rec.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
                        rec.final_rank = numerical_rank(RMat(displacement_of_dense(e.cast<cplx>()).real()), cfg.rank_tol);
                    } catch (const std::exception& ex) {
                        rec.status = "error: " + sanitize(ex.what());
                    }
                    rep.summary[key.str()] = static_cast<double>(rec.final_rank);
                    rep.records.push_back(std::move(rec));
                    continue;
                }
                BenchRecord rec = record_for(t, m, cfg, id, alpha, nullptr);
                rep.summary[key.str()] = static_cast<double>(rec.final_rank);
                rep.records.push_back(std::move(rec));
            }
        }
    }
    return rep;
}

BenchReport merton_scaling(const BenchConfig& cfg) {
    BenchReport rep;
    std::vector<std::string> methods = cfg.methods;
    add_default(methods, {"expmt", "sexpmt", "dense"});
    std::map<std::string, std::vector<double>> ns, ts;
    for (Index n : cfg.sizes) {
        GallerySpec spec{"merton", n, {}, 0, ""};
        const ToeplitzMatrix t = build_gallery(spec);
        const bool err = cfg.compute_errors && n <= cfg.dense_limit;
        const Mat ref = err ? reference_expm(t) : Mat();
        for (const auto& m : methods) {
            BenchRecord rec = record_for(t, m, cfg, "merton", 1.0, err ? &ref : nullptr);
            if (rec.status.starts_with("ok")) {
                ns[m].push_back(static_cast<double>(n));
                ts[m].push_back(rec.seconds);
            }
            rep.records.push_back(std::move(rec));
        }
    }
    for (const auto& [m, nv] : ns) {
        const auto& tv = ts[m];
        if (nv.size() < 2) continue;
        rep.summary["exponent_" + m] = scaling_exponent(nv.front(), tv.front(), nv.back(), tv.back());
        rep.summary["fitted_exponent_" + m] = fitted_exponent(nv, tv);
        rep.summary["seconds_" + m + "_largest"] = tv.back();
    }
    return rep;
}

BenchReport merton_ranks(const BenchConfig& cfg) {
    BenchReport rep;
    std::vector<std::string> methods = cfg.methods;
    add_default(methods, {"expmt", "sexpmt", "expmt-GEMM", "sexpmt-GEMM"});
    for (Index n : cfg.sizes) {
        for (double alpha : cfg.alphas) {
            const ToeplitzMatrix t = build_gallery({"merton", n, {{"alpha", alpha}}, 0, ""});
            const bool err = cfg.compute_errors && n <= cfg.dense_limit;
            const Mat ref = err ? reference_expm(t) : Mat();
            const double bound = 10.0 * unit_roundoff * t.dense().norm();
            Index lo = std::numeric_limits<Index>::max(), hi = 0;
            double worst = 0.0;
            for (const auto& m : methods) {
                BenchRecord rec = record_for(t, m, cfg, matrix_id("merton", alpha), alpha, err ? &ref : nullptr);
                rec.bound = bound;
                if (rec.final_rank >= 0) {
                    lo = std::min(lo, rec.final_rank);
                    hi = std::max(hi, rec.final_rank);
                }
                if (std::isfinite(rec.error)) worst = std::max(worst, rec.error / bound);
                rep.records.push_back(std::move(rec));
            }
            std::ostringstream key;
            key << "_n" << n << "_alpha" << alpha;
            rep.summary["rank_spread" + key.str()] = hi >= lo ? static_cast<double>(hi - lo) : 0.0;
            rep.summary["worst_error_over_bound" + key.str()] = worst;
        }
    }
    return rep;
}

} // namespace

void BenchReport::write_csv(std::ostream& os) const {
    os << csv_header << '\n';
    os.precision(17);
    for (const auto& r : records) {
        os << sanitize(r.matrix) << ',' << r.n << ',' << r.alpha << ',' << r.method << ',' << r.seconds << ','
           << r.final_rank << ',' << r.rho << ',';
        for (std::size_t i = 0; i < r.rank_trace.size(); ++i) os << (i ? ";" : "") << r.rank_trace[i];
        os << ',';
        if (std::isnan(r.error)) os << "nan";
        else os << r.error;
        os << ',';
        if (std::isnan(r.bound)) os << "nan";
        else os << r.bound;
        os << ',' << (r.dense_fallback ? 1 : 0) << ',' << sanitize(r.status) << '\n';
    }
}

BenchReport BenchReport::parse_csv(std::istream& is) {
    BenchReport rep;
    std::string line;
    if (!std::getline(is, line) || line != csv_header) throw ConfigError("bench csv: missing or unexpected header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 12) throw ConfigError("bench csv: expected 12 fields");
        BenchRecord r;
        r.matrix = f[0];
        r.n = static_cast<Index>(to_double(f[1]));
        r.alpha = to_double(f[2]);
        r.method = f[3];
        r.seconds = to_double(f[4]);
        r.final_rank = static_cast<Index>(to_double(f[5]));
        r.rho = static_cast<int>(to_double(f[6]));
        if (!f[7].empty())
            for (const auto& s : split(f[7], ';')) r.rank_trace.push_back(static_cast<Index>(to_double(s)));
        r.error = to_double(f[8]);
        r.bound = to_double(f[9]);
        r.dense_fallback = f[10] == "1";
        r.status = f[11];
        rep.records.push_back(std::move(r));
    }
    return rep;
}

std::string BenchReport::summary_json() const {
    json j;
    j["experiment"] = experiment;
    j["records"] = records.size();
    j["summary"] = json::object();
    for (const auto& [k, v] : summary) j["summary"][k] = v;
    json failures = json::array();
    for (const auto& r : records)
        if (!r.status.starts_with("ok")) failures.push_back({{"matrix", r.matrix}, {"method", r.method}, {"status", r.status}});
    j["failures"] = failures;
    return j.dump(2);
}

double scaling_exponent(double n1, double t1, double n2, double t2) { return std::log(t2 / t1) / std::log(n2 / n1); }

double fitted_exponent(const std::vector<double>& n, const std::vector<double>& t) {
    if (n.size() != t.size() || n.size() < 2) throw std::invalid_argument("fitted_exponent: need two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(n[i]), y = std::log(t[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

std::vector<std::string> experiment_names() {
    return {"tiny_errors", "random_ranks", "oscillation_table", "merton_scaling", "merton_ranks"};
}

BenchConfig BenchConfig::defaults(const std::string& experiment) {
    BenchConfig c;
    c.experiment = experiment;
    if (experiment == "tiny_errors") {
        c.sizes = {32};
    } else if (experiment == "random_ranks") {
        c.sizes = {2000};
        c.alphas = {1, 10, 100};
        c.compute_errors = false;
    } else if (experiment == "oscillation_table") {
        c.sizes = {2000};
        c.alphas = {1, 10};
    } else if (experiment == "merton_scaling") {
        c.sizes = {1024, 2048, 4096};
        c.compute_errors = false;
    } else if (experiment == "merton_ranks") {
        c.sizes = {512};
        c.alphas = {1};
    } else {
        throw ConfigError("bench: unknown experiment '" + experiment + "'");
    }
    return c;
}

BenchConfig BenchConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bench config: ") + e.what());
    }
    if (!j.is_object() || !j.contains("experiment")) throw ConfigError("bench config: need an object with 'experiment'");
    BenchConfig c;
    try {
        c = defaults(j.at("experiment").get<std::string>());
        for (const auto& [key, val] : j.items()) {
            if (key == "experiment") continue;
            if (key == "sizes") c.sizes = val.get<std::vector<Index>>();
            else if (key == "alphas") c.alphas = val.get<std::vector<double>>();
            else if (key == "methods") c.methods = val.get<std::vector<std::string>>();
            else if (key == "seed") c.seed = val.get<std::uint64_t>();
            else if (key == "repeats") c.repeats = val.get<int>();
            else if (key == "compute_errors") c.compute_errors = val.get<bool>();
            else if (key == "dense_limit") c.dense_limit = val.get<Index>();
            else if (key == "rank_tol") c.rank_tol = val.get<double>();
            else if (key == "shift") c.shift = val.get<double>();
            else if (key == "options") c.options = ExpmOptions::from_json(val.dump());
            else if (key == "gallery") {
                c.gallery.clear();
                for (const auto& g : val) {
                    GallerySpec s;
                    s.name = g.at("name").get<std::string>();
                    s.n = g.value("n", Index(32));
                    if (g.contains("params")) s.params = g.at("params").get<std::map<std::string, double>>();
                    s.seed = g.value("seed", std::uint64_t(0));
                    s.path = g.value("path", std::string());
                    c.gallery.push_back(std::move(s));
                }
            } else {
                throw ConfigError("bench config: unknown key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bench config: ") + e.what());
    }
    for (const auto& m : c.methods)
        if (m != "dense" && !is_structured(m)) throw ConfigError("bench config: unknown method '" + m + "'");
    if (c.sizes.empty()) throw ConfigError("bench config: 'sizes' must not be empty");
    for (Index n : c.sizes)
        if (n < 1) throw ConfigError("bench config: sizes must be positive");
    if ((c.experiment != "tiny_errors" && c.experiment != "merton_scaling") && c.alphas.empty())
        throw ConfigError("bench config: 'alphas' must not be empty");
    return c;
}

BenchRecord run_method(const ToeplitzMatrix& t, const std::string& method, const BenchConfig& config,
                       const std::string& id, double alpha) {
    const bool err = config.compute_errors && t.n() <= config.dense_limit && method != "dense";
    const Mat ref = err ? reference_expm(t) : Mat();
    return record_for(t, method, config, id, alpha, err ? &ref : nullptr);
}

BenchReport run_experiment(const BenchConfig& cfg) {
    BenchReport rep;
    if (cfg.experiment == "tiny_errors") rep = tiny_errors(cfg);
    else if (cfg.experiment == "random_ranks") rep = random_ranks(cfg);
    else if (cfg.experiment == "oscillation_table") rep = oscillation_table(cfg);
    else if (cfg.experiment == "merton_scaling") rep = merton_scaling(cfg);
    else if (cfg.experiment == "merton_ranks") rep = merton_ranks(cfg);
    else throw ConfigError("bench: unknown experiment '" + cfg.experiment + "'");
    rep.experiment = cfg.experiment;
    return rep;
}

} // namespace toepexp
