// Command line front end. Subcommands are thin wrappers that translate
// flags into the structured argument map consumed by bfgrow::execute and
// route the result to stdout or a file. Diagnostics go to stderr only.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bfgrow/commands.hpp"
#include "bfgrow/errors.hpp"
#include "bfgrow/rng.hpp"

namespace {

using nlohmann::json;

double parse_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw bfgrow::ParseError(what + ": '" + text + "' is not a number");
    }
    if (used != text.size()) {
        throw bfgrow::ParseError(what + ": '" + text + "' is not a number");
    }
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

// Grid syntax: either a comma list "1.5,2,4" or a range "start:stop:step"
// inclusive of stop up to a small rounding allowance.
std::vector<double> parse_grid(const std::string& text,
                               const std::string& what) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw bfgrow::ParseError(what +
                                     ": range form must be start:stop:step");
        }
        const double start = parse_number(parts[0], what);
        const double stop = parse_number(parts[1], what);
        const double step = parse_number(parts[2], what);
        if (step <= 0 || stop < start) {
            throw bfgrow::ParseError(
                what + ": range needs step > 0 and stop >= start");
        }
        for (int k = 0;; ++k) {
            const double value = start + k * step;
            if (value > stop + 1e-9 * step) break;
            grid.push_back(value);
        }
    } else {
        for (const std::string& part : split(text, ',')) {
            grid.push_back(parse_number(part, what));
        }
    }
    if (grid.empty()) {
        throw bfgrow::ParseError(what + ": empty grid");
    }
    return grid;
}

// Sample size grids additionally accept a doubling range "200:3200:double".
std::vector<std::int64_t> parse_n_grid(const std::string& text) {
    const std::string what = "--n-grid";
    std::vector<std::int64_t> grid;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw bfgrow::ParseError(
                what + ": range form must be start:stop:step or "
                       "start:stop:double");
        }
        const auto start =
            static_cast<std::int64_t>(parse_number(parts[0], what));
        const auto stop =
            static_cast<std::int64_t>(parse_number(parts[1], what));
        if (start < 2 || stop < start) {
            throw bfgrow::ParseError(what +
                                     ": need 2 <= start and start <= stop");
        }
        if (parts[2] == "double") {
            for (std::int64_t n = start; n <= stop; n *= 2) {
                grid.push_back(n);
            }
        } else {
            const auto step =
                static_cast<std::int64_t>(parse_number(parts[2], what));
            if (step <= 0) {
                throw bfgrow::ParseError(what + ": step must be positive");
            }
            for (std::int64_t n = start; n <= stop; n += step) {
                grid.push_back(n);
            }
        }
    } else {
        for (const std::string& part : split(text, ',')) {
            grid.push_back(
                static_cast<std::int64_t>(parse_number(part, what)));
        }
    }
    return grid;
}

// Regime flag syntax is positional: "a,b" or "a,b,r" or "a,b,r,s".
json parse_regime(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() < 2 || parts.size() > 4) {
        throw bfgrow::ParseError(
            "--regime: expected a,b with optional trailing r and s");
    }
    json regime;
    regime["a"] = parse_number(parts[0], "--regime a");
    regime["b"] = parse_number(parts[1], "--regime b");
    if (parts.size() >= 3) regime["r"] = parse_number(parts[2], "--regime r");
    if (parts.size() == 4) regime["s"] = parse_number(parts[3], "--regime s");
    return regime;
}

// Relative output paths land in the directory named by BFGROW_OUTPUT_DIR
// when that variable is set; absolute paths are used as given.
std::filesystem::path resolve_output_path(const std::string& out) {
    std::filesystem::path path(out);
    if (path.is_absolute()) return path;
    if (const char* dir = std::getenv("BFGROW_OUTPUT_DIR")) {
        if (*dir != '\0') return std::filesystem::path(dir) / path;
    }
    return path;
}

struct OutputOptions {
    std::string format = "json";
    std::string out;
};

void add_output_options(CLI::App* cmd, OutputOptions& opts) {
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--out", opts.out,
                    "Write output to this file instead of stdout");
}

int emit(const bfgrow::CommandResult& result, const OutputOptions& opts) {
    for (const std::string& warning : result.warnings) {
        std::cerr << "warning: " << warning << '\n';
    }
    const std::string body = opts.format == "csv"
                                 ? result.to_csv()
                                 : result.to_json().dump(2) + "\n";
    if (opts.out.empty()) {
        std::cout << body;
        return 0;
    }
    const std::filesystem::path path = resolve_output_path(opts.out);
    std::ofstream file(path);
    if (!file) {
        throw bfgrow::FileNotFound("cannot open for writing: " +
                                   path.string());
    }
    file << body;
    if (!file.good()) {
        throw bfgrow::Error("write failed: " + path.string());
    }
    std::cerr << "wrote " << path.string() << '\n';
    return 0;
}

struct QuadratureFlags {
    std::int64_t nodes = 0;
    std::int64_t refinements = -1;
    double rel_tol = 0.0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--quad-nodes", nodes,
                        "Initial quadrature node count");
        cmd->add_option("--quad-refinements", refinements,
                        "Maximum node-doubling refinements");
        cmd->add_option("--quad-tol", rel_tol,
                        "Quadrature relative tolerance");
    }

    void apply(json& args) const {
        json cfg;
        if (nodes > 0) cfg["initial_nodes"] = nodes;
        if (refinements >= 0) cfg["max_refinements"] = refinements;
        if (rel_tol > 0) cfg["rel_tol"] = rel_tol;
        if (!cfg.is_null()) args["quadrature"] = cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Bayes factors and BIC for nested linear models with growing "
        "dimension"};
    app.require_subcommand(1);

    // --- compare -----------------------------------------------------------
    auto* compare = app.add_subcommand(
        "compare", "Score a nested model pair on a CSV dataset");
    std::string cmp_data, cmp_response, cmp_regime, cmp_delta_lim;
    std::int64_t cmp_nested_cols = 0;
    bool cmp_linear = false;
    OutputOptions cmp_out;
    QuadratureFlags cmp_quad;
    compare->add_option("--data", cmp_data, "CSV file with predictors")
        ->required();
    compare->add_option("--response", cmp_response, "Response column name")
        ->required();
    compare
        ->add_option("--nested-cols", cmp_nested_cols,
                     "Leading predictor columns forming the nested model")
        ->required();
    compare->add_option("--regime", cmp_regime,
                        "Growth regime a,b[,r[,s]] for the consistency "
                        "verdict");
    compare->add_option("--delta-lim", cmp_delta_lim,
                        "Limiting distance to classify at (default: plug-in "
                        "estimate)");
    compare->add_flag("--linear", cmp_linear,
                      "Also report Bayes factors on the linear scale");
    cmp_quad.add_to(compare);
    add_output_options(compare, cmp_out);

    // --- threshold ---------------------------------------------------------
    auto* threshold = app.add_subcommand(
        "threshold", "Tabulate consistency thresholds over parameter grids");
    std::string thr_r, thr_s, thr_t;
    std::int64_t thr_m = 1;
    OutputOptions thr_out;
    threshold->add_option("--r", thr_r,
                          "Grid of dimension ratios r (list or "
                          "start:stop:step)");
    threshold->add_option("--s", thr_s,
                          "Grid of nested ratios s (needs --r)");
    threshold->add_option("--t", thr_t, "Grid of prior scales t");
    threshold
        ->add_option("--berger-replicates", thr_m,
                     "Replicates per group for the --t table")
        ->capture_default_str();
    add_output_options(threshold, thr_out);

    // --- simulate ----------------------------------------------------------
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo Bayes factor trajectories over a sample "
                    "size grid");
    double sim_b = 0.0, sim_a = 0.0, sim_delta = 0.0;
    std::string sim_r, sim_s, sim_n_grid;
    std::int64_t sim_replicates = 0;
    std::int64_t sim_seed = static_cast<std::int64_t>(bfgrow::kDefaultSeed);
    std::int64_t sim_workers = 1;
    bool sim_null = false;
    OutputOptions sim_out;
    simulate->add_option("--b", sim_b, "Full-dimension growth exponent b")
        ->required();
    simulate->add_option("--a", sim_a, "Nested-dimension growth exponent a")
        ->capture_default_str();
    simulate->add_option("--r", sim_r, "Dimension ratio n/p (used when b=1)");
    simulate->add_option("--s", sim_s, "Nested ratio n/i (used when a=1)");
    simulate
        ->add_option("--delta", sim_delta,
                     "Model distance delta held fixed along the grid")
        ->required();
    simulate
        ->add_option("--n-grid", sim_n_grid,
                     "Sample sizes: list, start:stop:step, or "
                     "start:stop:double")
        ->required();
    simulate->add_option("--replicates", sim_replicates, "Replicate count")
        ->required();
    simulate->add_option("--seed", sim_seed, "Base RNG seed")
        ->capture_default_str();
    simulate->add_flag("--null", sim_null,
                       "Sample under the nested model instead of the "
                       "alternative");
    simulate->add_option("--workers", sim_workers, "Worker thread count")
        ->capture_default_str();
    add_output_options(simulate, sim_out);

    // --- anova -------------------------------------------------------------
    auto* anova = app.add_subcommand(
        "anova", "Test factor effects against the grand-mean model");
    std::string anv_data, anv_response, anv_factors, anv_regime,
        anv_delta_lim;
    bool anv_no_three_way = false, anv_linear = false;
    OutputOptions anv_out;
    QuadratureFlags anv_quad;
    anova->add_option("--data", anv_data, "CSV file with factor columns")
        ->required();
    anova->add_option("--response", anv_response, "Response column name")
        ->required();
    anova
        ->add_option("--factors", anv_factors,
                     "Comma-separated factor column names (1 to 3)")
        ->required();
    anova->add_flag("--no-three-way", anv_no_three_way,
                    "Drop the three-factor interaction");
    anova->add_option("--regime", anv_regime,
                      "Growth regime a,b[,r[,s]] for the consistency "
                      "verdict");
    anova->add_option("--delta-lim", anv_delta_lim,
                      "Limiting distance to classify at");
    anova->add_flag("--linear", anv_linear,
                    "Also report Bayes factors on the linear scale");
    anv_quad.add_to(anova);
    add_output_options(anova, anv_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (compare->parsed()) {
            json args{{"data", cmp_data},
                      {"response", cmp_response},
                      {"nested_cols", cmp_nested_cols}};
            if (!cmp_regime.empty()) args["regime"] = parse_regime(cmp_regime);
            if (!cmp_delta_lim.empty()) {
                args["delta_lim"] = parse_number(cmp_delta_lim, "--delta-lim");
            }
            if (cmp_linear) args["linear"] = true;
            cmp_quad.apply(args);
            return emit(bfgrow::execute("compare", args), cmp_out);
        }
        if (threshold->parsed()) {
            json args;
            if (!thr_r.empty()) args["r_grid"] = parse_grid(thr_r, "--r");
            if (!thr_s.empty()) args["s_grid"] = parse_grid(thr_s, "--s");
            if (!thr_t.empty()) args["t_grid"] = parse_grid(thr_t, "--t");
            if (!thr_t.empty()) args["berger_replicates"] = thr_m;
            return emit(bfgrow::execute("threshold", args), thr_out);
        }
        if (simulate->parsed()) {
            json args{{"b", sim_b},
                      {"a", sim_a},
                      {"delta", sim_delta},
                      {"n_grid", parse_n_grid(sim_n_grid)},
                      {"replicates", sim_replicates},
                      {"seed", sim_seed},
                      {"workers", sim_workers}};
            if (!sim_r.empty()) args["r"] = parse_number(sim_r, "--r");
            if (!sim_s.empty()) args["s"] = parse_number(sim_s, "--s");
            if (sim_null) args["null"] = true;
            return emit(bfgrow::execute("simulate", args), sim_out);
        }
        if (anova->parsed()) {
            json args{{"data", anv_data}, {"response", anv_response}};
            json factors = json::array();
            for (const std::string& name : split(anv_factors, ',')) {
                factors.push_back(name);
            }
            args["factors"] = factors;
            if (anv_no_three_way) args["include_three_way"] = false;
            if (!anv_regime.empty()) args["regime"] = parse_regime(anv_regime);
            if (!anv_delta_lim.empty()) {
                args["delta_lim"] = parse_number(anv_delta_lim, "--delta-lim");
            }
            if (anv_linear) args["linear"] = true;
            anv_quad.apply(args);
            return emit(bfgrow::execute("anova", args), anv_out);
        }
    } catch (const bfgrow::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
