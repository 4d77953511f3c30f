#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "toepexp/bench.hpp"
#include "toepexp/expm.hpp"
#include "toepexp/gallery.hpp"
#include "toepexp/io.hpp"

using namespace toepexp;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

std::map<std::string, double> parse_params(const std::vector<std::string>& kv) {
    std::map<std::string, double> out;
    for (const auto& s : kv) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + s + "'");
        try {
            out[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--param: bad value in '" + s + "'");
        }
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text << '\n';
}

struct ExpmArgs {
    std::string input;
    std::string options;
    std::string output;
    std::string diagnostics;
    double shift = 0.0;
};

void run_expm(const ExpmArgs& a, bool sub) {
    const ToeplitzMatrix t = read_toeplitz_file(a.input);
    const ExpmOptions opts = a.options.empty() ? ExpmOptions{} : ExpmOptions::from_json(read_text_file(a.options));
    const ExpmResult res = sub ? sexpmt(t, a.shift, opts) : expmt(t, opts);
    if (a.output.empty() || a.output == "-") std::cout << generator_to_json(res.generator) << '\n';
    else write_generator_file(a.output, res.generator);
    if (!a.diagnostics.empty()) write_text(a.diagnostics, diagnostics_json(res));
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toeplitz matrix exponentials through displacement generators"};
    app.require_subcommand(1);

    GallerySpec gspec;
    std::vector<std::string> gparams;
    std::string gout;
    auto* gal = app.add_subcommand("gallery", "emit a gallery matrix as JSON (or CSV by extension)");
    gal->add_option("name", gspec.name, "matrix name")->required();
    gal->add_option("-n,--n", gspec.n, "dimension")->required();
    gal->add_option("-p,--param", gparams, "key=value parameter (alpha, Merton fields, ...)");
    gal->add_option("-s,--seed", gspec.seed, "seed for random members");
    gal->add_option("--path", gspec.path, "input file for 'file'");
    gal->add_option("-o,--output", gout, "output path (default stdout)");

    ExpmArgs ea, sa;
    auto* ex = app.add_subcommand("expmt", "diagonal Pade scaling and squaring");
    auto* sx = app.add_subcommand("sexpmt", "subdiagonal Pade in partial fractions");
    for (auto [cmd, args] : {std::pair{ex, &ea}, std::pair{sx, &sa}}) {
        cmd->add_option("input", args->input, "Toeplitz matrix (.json or .csv)")->required();
        cmd->add_option("--options", args->options, "options JSON");
        cmd->add_option("-o,--output", args->output, "generator output (.json or .bin; default stdout JSON)");
        cmd->add_option("-d,--diagnostics", args->diagnostics, "diagnostics JSON sidecar");
    }
    sx->add_option("--shift", sa.shift, "exp(T) = e^shift exp(T - shift I)");

    std::string rin, rout;
    auto* rc = app.add_subcommand("reconstruct", "generator to dense CSV");
    rc->add_option("input", rin, "generator (.json or .bin)")->required();
    rc->add_option("-o,--output", rout, "CSV output (default stdout)");

    std::string experiment, config, bout, bsummary;
    auto* bn = app.add_subcommand("bench", "run an experiment");
    bn->add_option("experiment", experiment, "experiment name")
        ->required()
        ->check(CLI::IsMember(experiment_names()));
    bn->add_option("-c,--config", config, "config JSON");
    bn->add_option("-o,--output", bout, "CSV output (default stdout)");
    bn->add_option("--summary", bsummary, "JSON summary (default <output>.json, or stderr)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*gal) {
            gspec.params = parse_params(gparams);
            const ToeplitzMatrix t = build_gallery(gspec);
            if (gout.empty() || gout == "-") std::cout << toeplitz_to_json(t) << '\n';
            else write_toeplitz_file(gout, t);
        } else if (*ex) {
            run_expm(ea, false);
        } else if (*sx) {
            run_expm(sa, true);
        } else if (*rc) {
            const Mat a = reconstruct(read_generator_file(rin));
            if (rout.empty() || rout == "-") {
                write_dense_csv(std::cout, a);
            } else {
                std::ofstream out(rout);
                if (!out) throw ConfigError("cannot write '" + rout + "'");
                write_dense_csv(out, a);
            }
        } else if (*bn) {
            BenchConfig cfg = BenchConfig::defaults(experiment);
            if (!config.empty()) {
                std::string text = read_text_file(config);
                auto j = nlohmann::json::parse(text, nullptr, false);
                if (j.is_discarded() || !j.is_object()) throw ConfigError("bench config: not a JSON object");
                if (j.contains("experiment") && j["experiment"] != experiment)
                    throw ConfigError("bench config: experiment mismatch with the command line");
                j["experiment"] = experiment;
                cfg = BenchConfig::from_json(j.dump());
            }
            const BenchReport rep = run_experiment(cfg);
            if (bout.empty() || bout == "-") {
                rep.write_csv(std::cout);
            } else {
                std::ofstream out(bout);
                if (!out) throw ConfigError("cannot write '" + bout + "'");
                rep.write_csv(out);
            }
            std::string sp = bsummary;
            if (sp.empty() && !bout.empty() && bout != "-") sp = bout + ".json";
            if (sp.empty()) std::cerr << rep.summary_json() << '\n';
            else write_text(sp, rep.summary_json());
        }
    } catch (const std::invalid_argument& e) { // ConfigError, DimensionError
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
