#include "bfgrow/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "bfgrow/asymptotics.hpp"
#include "bfgrow/bayes_factor.hpp"
#include "bfgrow/dataset.hpp"
#include "bfgrow/designs.hpp"
#include "bfgrow/errors.hpp"
#include "bfgrow/experiment.hpp"
#include "bfgrow/linear_model.hpp"

namespace bfgrow {

namespace {

using nlohmann::json;

// ---- schema helpers -------------------------------------------------------

void check_keys(const json& args, const std::string& command,
                const std::set<std::string>& allowed) {
    if (!args.is_object()) {
        throw SchemaError(command + ": arguments must be a map");
    }
    for (const auto& item : args.items()) {
        if (!allowed.count(item.key())) {
            throw SchemaError(command + ": unknown argument '" + item.key() +
                              "'");
        }
    }
}

const json& need(const json& args, const std::string& command,
                 const std::string& key) {
    if (!args.contains(key)) {
        throw SchemaError(command + ": missing required argument '" + key +
                          "'");
    }
    return args.at(key);
}

std::string need_string(const json& args, const std::string& command,
                        const std::string& key) {
    const json& v = need(args, command, key);
    if (!v.is_string()) {
        throw SchemaError(command + ": argument '" + key +
                          "' must be a string");
    }
    return v.get<std::string>();
}

double as_number(const json& v, const std::string& command,
                 const std::string& key) {
    if (!v.is_number()) {
        throw SchemaError(command + ": argument '" + key +
                          "' must be a number");
    }
    return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& command,
                        const std::string& key) {
    if (!v.is_number_integer()) {
        throw SchemaError(command + ": argument '" + key +
                          "' must be an integer");
    }
    return v.get<std::int64_t>();
}

double opt_number(const json& args, const std::string& command,
                  const std::string& key, double fallback) {
    if (!args.contains(key)) return fallback;
    return as_number(args.at(key), command, key);
}

std::int64_t opt_integer(const json& args, const std::string& command,
                         const std::string& key, std::int64_t fallback) {
    if (!args.contains(key)) return fallback;
    return as_integer(args.at(key), command, key);
}

bool opt_bool(const json& args, const std::string& command,
              const std::string& key, bool fallback) {
    if (!args.contains(key)) return fallback;
    const json& v = args.at(key);
    if (!v.is_boolean()) {
        throw SchemaError(command + ": argument '" + key +
                          "' must be a boolean");
    }
    return v.get<bool>();
}

std::vector<double> need_number_array(const json& args,
                                      const std::string& command,
                                      const std::string& key) {
    const json& v = need(args, command, key);
    if (!v.is_array() || v.empty()) {
        throw SchemaError(command + ": argument '" + key +
                          "' must be a non-empty array");
    }
    std::vector<double> out;
    for (const json& item : v) out.push_back(as_number(item, command, key));
    return out;
}

GrowthRegime regime_from_json(const json& spec, const std::string& command) {
    check_keys(spec, command + ".regime", {"a", "b", "r", "s"});
    const double a = as_number(need(spec, command, "a"), command, "regime.a");
    const double b = as_number(need(spec, command, "b"), command, "regime.b");
    std::optional<double> r, s;
    if (spec.contains("r")) r = as_number(spec.at("r"), command, "regime.r");
    if (spec.contains("s")) s = as_number(spec.at("s"), command, "regime.s");
    return GrowthRegime(a, b, r, s);
}

QuadratureConfig quadrature_from_json(const json& args,
                                      const std::string& command) {
    QuadratureConfig cfg;
    if (!args.contains("quadrature")) return cfg;
    const json& spec = args.at("quadrature");
    check_keys(spec, command + ".quadrature",
               {"initial_nodes", "max_refinements", "rel_tol"});
    cfg.initial_nodes = static_cast<int>(
        opt_integer(spec, command, "initial_nodes", cfg.initial_nodes));
    cfg.max_refinements = static_cast<int>(
        opt_integer(spec, command, "max_refinements", cfg.max_refinements));
    cfg.rel_tol = opt_number(spec, command, "rel_tol", cfg.rel_tol);
    return cfg;
}

// ---- output helpers -------------------------------------------------------

json linear_value(double log_value) {
    if (log_value >= 745.0) return "inf";
    if (log_value <= -745.0) return "0";
    const double value = std::exp(log_value);
    if (!std::isfinite(value)) return "inf";
    if (value == 0.0) return "0";
    return value;
}

const char* verdict_name(Consistency verdict) {
    switch (verdict) {
        case Consistency::ConsistentUnderBoth:
            return "consistent-under-both";
        case Consistency::InconsistentUnderAlternative:
            return "inconsistent-under-alternative";
        case Consistency::BoundaryIndeterminate:
            return "boundary-indeterminate";
    }
    return "boundary-indeterminate";
}

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string csv_field(const json& v) {
    std::string text;
    if (v.is_string()) {
        text = v.get<std::string>();
    } else if (v.is_boolean()) {
        text = v.get<bool>() ? "true" : "false";
    } else if (v.is_number_integer()) {
        text = std::to_string(v.get<std::int64_t>());
    } else if (v.is_number()) {
        text = format_double(v.get<double>());
    } else if (v.is_null()) {
        text = "";
    } else {
        text = v.dump();
    }
    if (text.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (const char ch : text) {
            if (ch == '"') quoted += "\"\"";
            else quoted += ch;
        }
        quoted += "\"";
        return quoted;
    }
    return text;
}

// Flattens nested objects with underscore-joined keys; arrays are skipped
// (they belong to the structured JSON form only).
void flatten_outputs(const json& value, const std::string& prefix,
                     std::vector<std::pair<std::string, json>>& out) {
    for (const auto& item : value.items()) {
        const std::string key =
            prefix.empty() ? item.key() : prefix + "_" + item.key();
        if (item.value().is_object()) {
            flatten_outputs(item.value(), key, out);
        } else if (!item.value().is_array()) {
            out.emplace_back(key, item.value());
        }
    }
}

// ---- classification shared by compare and anova ---------------------------

void attach_classification(const json& args, const std::string& command,
                           const ModelFit& fit, std::int64_t n, std::int64_t p,
                           std::int64_t i, CommandResult& result) {
    if (!args.contains("regime")) {
        if (args.contains("delta_lim")) {
            throw SchemaError(command +
                              ": 'delta_lim' requires a 'regime' argument");
        }
        return;
    }
    const GrowthRegime regime =
        regime_from_json(args.at("regime"), command);
    double delta_lim;
    std::string source;
    if (args.contains("delta_lim")) {
        delta_lim = as_number(args.at("delta_lim"), command, "delta_lim");
        source = "user";
    } else {
        // Method-of-moments plug-in: the expected gap between the residual
        // sums of squares is sigma^2 * ((p - i) + n * delta).
        const double sigma_sq =
            fit.rss_full / static_cast<double>(n - p);
        const double gap = fit.rss_reduced - fit.rss_full -
                           static_cast<double>(p - i) * sigma_sq;
        delta_lim = std::max(0.0, gap / (static_cast<double>(n) * sigma_sq));
        source = "plug-in";
        result.warnings.push_back(
            "delta_lim estimated from the data by a moment plug-in; the "
            "asymptotic classification is approximate at finite n");
    }
    const ConsistencyVerdict verdict = classify(regime, delta_lim);
    result.outputs["classification"] = {
        {"verdict", verdict_name(verdict.verdict)},
        {"threshold", verdict.threshold_used},
        {"margin", verdict.margin},
        {"delta_lim", delta_lim},
        {"delta_lim_source", source},
    };
}

// ---- compare --------------------------------------------------------------

json scored_fit_outputs(const NestedModelPair& pair, const ModelFit& fit,
                        const BayesFactorResult& bf) {
    return json{
        {"n", pair.n()},
        {"p", pair.p()},
        {"i", pair.i()},
        {"rss_reduced", fit.rss_reduced},
        {"rss_full", fit.rss_full},
        {"bip", fit.bip},
        {"log_bip", fit.log_bip},
        {"log_bf_intrinsic", bf.log_bf_intrinsic},
        {"log_bic", bf.log_bic},
        {"nodes_used", bf.nodes_used},
        {"converged", bf.converged},
        {"est_error", bf.est_error},
    };
}

CommandResult run_compare(const json& args) {
    const std::string command = "compare";
    check_keys(args, command,
               {"data", "response", "nested_cols", "regime", "delta_lim",
                "linear", "quadrature"});
    const std::string data = need_string(args, command, "data");
    const std::string response = need_string(args, command, "response");
    const std::int64_t nested_cols =
        as_integer(need(args, command, "nested_cols"), command, "nested_cols");
    const bool linear = opt_bool(args, command, "linear", false);
    const QuadratureConfig qcfg = quadrature_from_json(args, command);

    const Dataset dataset = parse_dataset(data, response);
    const NestedModelPair pair =
        build_nested_pair(dataset.x, static_cast<Eigen::Index>(nested_cols));
    const ModelFit fit = bip_statistic(pair, dataset.y);
    const BayesFactorResult bf =
        log_intrinsic_bf(pair.n(), pair.p(), pair.i(), fit.log_bip, qcfg);

    CommandResult result;
    result.command = command;
    result.inputs_echo = args;
    result.outputs = scored_fit_outputs(pair, fit, bf);
    if (!bf.converged) {
        result.warnings.push_back(
            "quadrature did not reach tolerance; estimated log-scale error " +
            format_double(bf.est_error));
    }
    if (linear) {
        result.outputs["bf_intrinsic"] = linear_value(bf.log_bf_intrinsic);
        result.outputs["bf_schwarz"] = linear_value(bf.log_bic);
    }
    attach_classification(args, command, fit, pair.n(), pair.p(), pair.i(),
                          result);
    return result;
}

// ---- threshold ------------------------------------------------------------

CommandResult run_threshold(const json& args) {
    const std::string command = "threshold";
    check_keys(args, command,
               {"r_grid", "s_grid", "t_grid", "berger_replicates"});
    if (!args.contains("r_grid") && !args.contains("t_grid")) {
        throw SchemaError(
            "threshold: need at least one of 'r_grid' or 't_grid'");
    }
    if (args.contains("s_grid") && !args.contains("r_grid")) {
        throw SchemaError("threshold: 's_grid' requires 'r_grid'");
    }

    CommandResult result;
    result.command = command;
    result.inputs_echo = args;
    json rows = json::array();
    if (args.contains("r_grid")) {
        const auto r_grid = need_number_array(args, command, "r_grid");
        for (const double r : r_grid) {
            rows.push_back(
                {{"quantity", "delta_r"}, {"r", r}, {"value", delta_r(r)}});
        }
        if (args.contains("s_grid")) {
            const auto s_grid = need_number_array(args, command, "s_grid");
            int skipped = 0;
            for (const double r : r_grid) {
                for (const double s : s_grid) {
                    if (!(s > r)) {
                        ++skipped;
                        continue;
                    }
                    rows.push_back({{"quantity", "delta_rs"},
                                    {"r", r},
                                    {"s", s},
                                    {"value", delta_rs(r, s)}});
                }
            }
            if (skipped > 0) {
                result.warnings.push_back(
                    "skipped " + std::to_string(skipped) +
                    " (r, s) pairs with s <= r");
            }
        }
    }
    if (args.contains("t_grid")) {
        const auto t_grid = need_number_array(args, command, "t_grid");
        const std::int64_t m =
            opt_integer(args, command, "berger_replicates", 1);
        for (const double t : t_grid) {
            rows.push_back({{"quantity", "berger_R"},
                            {"t", t},
                            {"m", m},
                            {"value", berger_bound_R(t, m)}});
        }
    }
    result.outputs["rows"] = std::move(rows);
    return result;
}

// ---- simulate ---------------------------------------------------------------

CommandResult run_simulate(const json& args) {
    const std::string command = "simulate";
    check_keys(args, command,
               {"a", "b", "r", "s", "delta", "n_grid", "replicates", "seed",
                "null", "workers"});

    const double b = as_number(need(args, command, "b"), command, "b");
    const double a = opt_number(args, command, "a", 0.0);
    std::optional<double> r, s;
    if (args.contains("r")) r = as_number(args.at("r"), command, "r");
    if (args.contains("s")) s = as_number(args.at("s"), command, "s");

    const json& grid = need(args, command, "n_grid");
    if (!grid.is_array() || grid.empty()) {
        throw SchemaError("simulate: 'n_grid' must be a non-empty array");
    }
    std::vector<std::int64_t> n_grid;
    for (const json& item : grid) {
        n_grid.push_back(as_integer(item, command, "n_grid"));
    }
    const ExperimentConfig cfg{
        GrowthRegime(a, b, r, s),
        as_number(need(args, command, "delta"), command, "delta"),
        std::move(n_grid),
        as_integer(need(args, command, "replicates"), command, "replicates"),
        static_cast<std::uint64_t>(opt_integer(
            args, command, "seed", static_cast<std::int64_t>(kDefaultSeed))),
        opt_bool(args, command, "null", false)};
    const int workers =
        static_cast<int>(opt_integer(args, command, "workers", 1));
    if (workers < 1) {
        throw SchemaError("simulate: 'workers' must be >= 1");
    }

    const std::vector<TrajectoryRecord> records = run_experiment(cfg, workers);

    CommandResult result;
    result.command = command;
    result.inputs_echo = args;
    result.inputs_echo["seed"] = cfg.seed;
    result.inputs_echo["a"] = a;
    result.inputs_echo["null"] = cfg.null_sampling;
    json trajectories = json::array();
    for (const TrajectoryRecord& record : records) {
        json points = json::array();
        for (const GridPointResult& pt : record.points) {
            points.push_back({{"n", pt.n},
                              {"p", pt.p},
                              {"i", pt.i},
                              {"delta", pt.delta},
                              {"log_bf", pt.log_bf},
                              {"log_bic", pt.log_bic},
                              {"bip", pt.bip}});
        }
        trajectories.push_back({{"seed", record.seed},
                                {"stream_id", record.stream_id},
                                {"points", std::move(points)}});
    }
    result.outputs["seed"] = cfg.seed;
    result.outputs["trajectories"] = std::move(trajectories);
    return result;
}

// ---- anova ------------------------------------------------------------------

// Effect-coded design from factor level columns: intercept, per-factor
// sum-to-zero main effects, all two-factor interactions, and optionally the
// full interaction of three factors. Mirrors the balanced builder but works
// from observed (possibly unbalanced) level assignments.
Eigen::MatrixXd effect_design_from_levels(
    const std::vector<std::vector<std::int64_t>>& levels,
    const std::vector<std::int64_t>& level_counts, bool include_three_way) {
    const std::size_t n_factors = level_counts.size();
    const std::size_t n = levels.front().size();

    // Per-factor effect scores for each row, one column per non-last level.
    std::vector<Eigen::MatrixXd> scores;
    for (std::size_t f = 0; f < n_factors; ++f) {
        const std::int64_t lc = level_counts[f];
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(
            static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(lc - 1));
        for (std::size_t row = 0; row < n; ++row) {
            const std::int64_t level = levels[f][row];
            if (level < lc - 1) {
                block(static_cast<Eigen::Index>(row),
                      static_cast<Eigen::Index>(level)) = 1.0;
            } else {
                block.row(static_cast<Eigen::Index>(row)).setConstant(-1.0);
            }
        }
        scores.push_back(std::move(block));
    }

    std::vector<Eigen::VectorXd> columns;
    columns.push_back(
        Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
    for (const Eigen::MatrixXd& block : scores) {
        for (Eigen::Index c = 0; c < block.cols(); ++c) {
            columns.push_back(block.col(c));
        }
    }
    for (std::size_t f = 0; f < n_factors; ++f) {
        for (std::size_t g = f + 1; g < n_factors; ++g) {
            for (Eigen::Index cf = 0; cf < scores[f].cols(); ++cf) {
                for (Eigen::Index cg = 0; cg < scores[g].cols(); ++cg) {
                    columns.push_back(scores[f].col(cf).cwiseProduct(
                        scores[g].col(cg)));
                }
            }
        }
    }
    if (include_three_way && n_factors == 3) {
        for (Eigen::Index c0 = 0; c0 < scores[0].cols(); ++c0) {
            for (Eigen::Index c1 = 0; c1 < scores[1].cols(); ++c1) {
                for (Eigen::Index c2 = 0; c2 < scores[2].cols(); ++c2) {
                    columns.push_back(scores[0]
                                          .col(c0)
                                          .cwiseProduct(scores[1].col(c1))
                                          .cwiseProduct(scores[2].col(c2)));
                }
            }
        }
    }

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n),
                           static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        design.col(static_cast<Eigen::Index>(c)) = columns[c];
    }
    return design;
}

CommandResult run_anova(const json& args) {
    const std::string command = "anova";
    check_keys(args, command,
               {"data", "response", "factors", "include_three_way", "linear",
                "quadrature", "regime", "delta_lim"});
    const std::string data = need_string(args, command, "data");
    const std::string response = need_string(args, command, "response");
    const json& factor_names = need(args, command, "factors");
    if (!factor_names.is_array() || factor_names.empty() ||
        factor_names.size() > 3) {
        throw SchemaError("anova: 'factors' must list 1 to 3 column names");
    }
    const bool include_three_way =
        opt_bool(args, command, "include_three_way", true);
    const bool linear = opt_bool(args, command, "linear", false);
    const QuadratureConfig qcfg = quadrature_from_json(args, command);

    const RawCsv csv = read_csv_file(data);
    const auto column_index = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(csv.header.begin(), csv.header.end(), name);
        if (it == csv.header.end()) {
            throw MissingColumn("anova: column '" + name +
                                "' not found in: " + data);
        }
        return static_cast<std::size_t>(it - csv.header.begin());
    };

    const std::size_t response_idx = column_index(response);
    Eigen::VectorXd y(static_cast<Eigen::Index>(csv.rows.size()));
    for (std::size_t row = 0; row < csv.rows.size(); ++row) {
        char* tail = nullptr;
        const std::string& cell = csv.rows[row][response_idx];
        const double value = std::strtod(cell.c_str(), &tail);
        if (cell.empty() || tail != cell.c_str() + cell.size() ||
            !std::isfinite(value)) {
            throw ParseError("anova: response cell at data row " +
                             std::to_string(row + 1) + " is not numeric: '" +
                             cell + "'");
        }
        y[static_cast<Eigen::Index>(row)] = value;
    }

    // Factor levels become 0-based indices in sorted order of their labels.
    std::vector<std::vector<std::int64_t>> levels;
    std::vector<std::int64_t> level_counts;
    json factor_echo = json::array();
    for (const json& name_json : factor_names) {
        if (!name_json.is_string()) {
            throw SchemaError("anova: factor names must be strings");
        }
        const std::string name = name_json.get<std::string>();
        const std::size_t idx = column_index(name);
        std::set<std::string> label_set;
        for (const auto& row : csv.rows) label_set.insert(row[idx]);
        if (label_set.size() < 2) {
            throw ConfigError("anova: factor '" + name +
                              "' has fewer than 2 levels");
        }
        const std::vector<std::string> labels(label_set.begin(),
                                              label_set.end());
        std::vector<std::int64_t> column;
        column.reserve(csv.rows.size());
        for (const auto& row : csv.rows) {
            const auto it =
                std::lower_bound(labels.begin(), labels.end(), row[idx]);
            column.push_back(it - labels.begin());
        }
        levels.push_back(std::move(column));
        level_counts.push_back(static_cast<std::int64_t>(labels.size()));
        factor_echo.push_back(
            {{"name", name},
             {"levels", static_cast<std::int64_t>(labels.size())}});
    }

    Eigen::MatrixXd design =
        effect_design_from_levels(levels, level_counts, include_three_way);
    const NestedModelPair pair = build_nested_pair(design, 1);
    const ModelFit fit = bip_statistic(pair, y);
    const BayesFactorResult bf =
        log_intrinsic_bf(pair.n(), pair.p(), pair.i(), fit.log_bip, qcfg);

    CommandResult result;
    result.command = command;
    result.inputs_echo = args;
    result.inputs_echo["include_three_way"] = include_three_way;
    result.outputs = scored_fit_outputs(pair, fit, bf);
    result.outputs["factors"] = std::move(factor_echo);
    result.outputs["parameter_count"] = pair.p();
    if (!bf.converged) {
        result.warnings.push_back(
            "quadrature did not reach tolerance; estimated log-scale error " +
            format_double(bf.est_error));
    }
    if (linear) {
        result.outputs["bf_intrinsic"] = linear_value(bf.log_bf_intrinsic);
        result.outputs["bf_schwarz"] = linear_value(bf.log_bic);
    }
    attach_classification(args, command, fit, pair.n(), pair.p(), pair.i(),
                          result);
    return result;
}

}  // namespace

json CommandResult::to_json() const {
    return json{{"command", command},
                {"inputs_echo", inputs_echo},
                {"outputs", outputs},
                {"warnings", warnings}};
}

std::string CommandResult::to_csv() const {
    std::ostringstream out;
    if (command == "simulate") {
        out << "n,p,i,delta,log_bf,log_bic,bip\n";
        for (const json& trajectory : outputs.at("trajectories")) {
            for (const json& pt : trajectory.at("points")) {
                out << pt.at("n").get<std::int64_t>() << ','
                    << pt.at("p").get<std::int64_t>() << ','
                    << pt.at("i").get<std::int64_t>() << ','
                    << format_double(pt.at("delta").get<double>()) << ','
                    << format_double(pt.at("log_bf").get<double>()) << ','
                    << format_double(pt.at("log_bic").get<double>()) << ','
                    << format_double(pt.at("bip").get<double>()) << '\n';
            }
        }
        return out.str();
    }
    if (command == "threshold") {
        out << "quantity,r,s,t,m,value\n";
        for (const json& row : outputs.at("rows")) {
            const auto field = [&](const char* key) -> std::string {
                return row.contains(key) ? csv_field(row.at(key)) : "";
            };
            out << field("quantity") << ',' << field("r") << ',' << field("s")
                << ',' << field("t") << ',' << field("m") << ','
                << field("value") << '\n';
        }
        return out.str();
    }
    // Scalar commands flatten to a one-row table.
    std::vector<std::pair<std::string, json>> fields;
    flatten_outputs(outputs, "", fields);
    for (std::size_t k = 0; k < fields.size(); ++k) {
        out << (k ? "," : "") << csv_field(fields[k].first);
    }
    out << '\n';
    for (std::size_t k = 0; k < fields.size(); ++k) {
        out << (k ? "," : "") << csv_field(fields[k].second);
    }
    out << '\n';
    return out.str();
}

CommandResult execute(const std::string& command, const json& args) {
    if (command == "compare") return run_compare(args);
    if (command == "threshold") return run_threshold(args);
    if (command == "simulate") return run_simulate(args);
    if (command == "anova") return run_anova(args);
    throw SchemaError("unknown command '" + command +
                      "'; expected compare, threshold, simulate, or anova");
}

}  // namespace bfgrow
