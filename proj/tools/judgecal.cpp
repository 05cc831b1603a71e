// Copyright 2026 The judgecal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// judgecal: calibrated aggregation of ternary judge votes.
//
// Single binary with subcommands. Every command resolves its configuration
// (flags > environment > defaults), writes its outputs into --out-dir with
// fixed file names, and drops a manifest.json recording the resolved config,
// the seed, and content digests of every input file. Outputs carry no
// timestamps, so a rerun with identical inputs is byte-identical.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "judgecal/baselines.hpp"
#include "judgecal/btd.hpp"
#include "judgecal/calibrate.hpp"
#include "judgecal/data_io.hpp"
#include "judgecal/errors.hpp"
#include "judgecal/metaeval.hpp"
#include "judgecal/rng.hpp"
#include "judgecal/types.hpp"

#ifndef JUDGECAL_VERSION
#define JUDGECAL_VERSION "0.0.0"
#endif

namespace {

using judgecal::Aggregator;
using judgecal::DavidsonParams;
using judgecal::EvalItem;
using judgecal::FitConfig;
using judgecal::ItemLabel;
using judgecal::ItemVotes;
using judgecal::NumericError;
using judgecal::ParamBox;
using judgecal::Prediction;
using judgecal::SignificanceConfig;
using judgecal::Smoothing;
using judgecal::SoftReducer;
using judgecal::SplitConfig;
using judgecal::TernaryDistribution;
using judgecal::ValidationError;
using judgecal::Verdict;
using judgecal::VoteCounts;
using nlohmann::json;

// Deterministic, locale-independent float rendering for CSV cells.
std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

// Content digest recorded in manifests: 64-bit FNV-1a over the raw bytes.
std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();
    char hex[32];
    std::snprintf(hex, sizeof(hex), "fnv1a64:%016" PRIx64,
                  judgecal::fnv1a64(bytes));
    return hex;
}

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& config, std::uint64_t seed,
                    const std::map<std::string, std::string>& input_paths) {
    json inputs = json::object();
    for (const auto& [role, path] : input_paths) {
        inputs[role] = digest_file(path);
    }
    const json manifest = {{"command", command},
                           {"config", config},
                           {"inputs", inputs},
                           {"seed", seed},
                           {"tool_version", JUDGECAL_VERSION}};
    judgecal::write_text_atomic(join_path(out_dir, "manifest.json"),
                                manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Shared option bundles.

struct CommonSeed {
    std::uint64_t seed = 0;
    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Root seed for all derived randomness")
            ->envname("JUDGECAL_SEED");
    }
};

struct SmoothingFlags {
    Smoothing smoothing;
    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha", smoothing.alpha,
                        "Additive smoothing for the polarity feature");
        cmd->add_option("--kappa", smoothing.kappa,
                        "Additive smoothing for the decisiveness feature");
    }
};

struct FitFlags {
    int restarts = 8;
    int max_iterations = 200;
    double tolerance = 1e-8;
    std::vector<double> box_values;

    void attach(CLI::App* cmd) {
        cmd->add_option("--restarts", restarts, "Optimizer restarts");
        cmd->add_option("--max-iters", max_iterations,
                        "Iteration cap per restart");
        cmd->add_option("--tol", tolerance,
                        "Projected-gradient convergence tolerance");
        cmd->add_option("--box", box_values,
                        "Parameter box as beta_lo,beta_hi,nu_lo,nu_hi,"
                        "gamma_lo,gamma_hi")
            ->delimiter(',')
            ->expected(6);
    }

    FitConfig resolve(std::uint64_t seed) const {
        FitConfig config;
        if (!box_values.empty()) {
            config.box = ParamBox{box_values[0], box_values[1], box_values[2],
                                  box_values[3], box_values[4], box_values[5]};
        }
        config.box.validate();
        config.restarts = restarts;
        config.max_iterations = max_iterations;
        config.gradient_tolerance = tolerance;
        config.seed = seed;
        return config;
    }

    json snapshot() const {
        const FitConfig config = resolve(0);
        return {{"restarts", config.restarts},
                {"max_iterations", config.max_iterations},
                {"tolerance", config.gradient_tolerance},
                {"box",
                 {config.box.beta_lo, config.box.beta_hi, config.box.nu_lo,
                  config.box.nu_hi, config.box.gamma_lo, config.box.gamma_hi}}};
    }
};

SoftReducer parse_reducer(const std::string& name) {
    if (name == "min") return SoftReducer::Minimum;
    if (name == "mean") return SoftReducer::Mean;
    if (name == "product") return SoftReducer::Product;
    throw ValidationError("unknown reducer '" + name +
                          "'; expected min, mean, or product");
}

Aggregator make_method(const std::string& name, const Smoothing& smoothing,
                       SoftReducer reducer) {
    if (name == "btd") return judgecal::make_btd_aggregator(smoothing);
    if (name == "sc") return judgecal::make_sc_aggregator();
    if (name == "soft-sc") return judgecal::make_soft_sc_aggregator(reducer);
    if (name == "ci-sc") return judgecal::make_ci_sc_aggregator();
    if (name == "median") return judgecal::make_median_aggregator();
    throw ValidationError("unknown method '" + name +
                          "'; expected btd, sc, soft-sc, ci-sc, or median");
}

DavidsonParams read_params_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path + "' for reading");
    }
    const json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw judgecal::ParseError("'" + path +
                                   "' is not a JSON parameter object");
    }
    DavidsonParams params;
    for (const char* key : {"beta", "nu", "gamma"}) {
        if (!doc.contains(key) || !doc[key].is_number()) {
            throw judgecal::ParseError("'" + path +
                                       "' lacks a numeric field '" +
                                       std::string(key) + "'");
        }
    }
    params.beta = doc["beta"].get<double>();
    params.nu = doc["nu"].get<double>();
    params.gamma = doc["gamma"].get<double>();
    return params;
}

std::vector<EvalItem> load_eval_items(const std::string& votes_path,
                                      const std::string& labels_path) {
    const std::vector<ItemVotes> votes = judgecal::read_votes(votes_path);
    const std::vector<ItemLabel> labels = judgecal::read_labels(labels_path);
    return judgecal::build_eval_items(votes, labels);
}

double mean_of(const std::vector<double>& values) {
    double total = 0.0;
    for (double v : values) total += v;
    return total / static_cast<double>(values.size());
}

// 95% half-width via normal approximation over splits (1.96 * SE).
double ci95_half_width(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const double mean = mean_of(values);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateCmd {
    std::string votes_path, labels_path, out_dir;
    CommonSeed seed;
    SmoothingFlags smoothing;
    FitFlags fit;

    int run() const {
        smoothing.smoothing.validate();
        const std::vector<EvalItem> items =
            load_eval_items(votes_path, labels_path);
        std::vector<judgecal::CalibrationItem> calibration;
        calibration.reserve(items.size());
        for (const EvalItem& item : items) {
            calibration.push_back(
                {judgecal::compute_features(item.counts, smoothing.smoothing),
                 item.truth});
        }

        std::vector<judgecal::RestartTrace> trace;
        const judgecal::FitResult result = judgecal::fit_drps(
            calibration, fit.resolve(seed.seed), &trace);

        std::ostringstream table;
        table << "restart,start_beta,start_nu,start_gamma,beta,nu,gamma,"
                 "objective,converged,iterations\n";
        for (const judgecal::RestartTrace& row : trace) {
            table << row.index << ',' << format_double(row.start.beta) << ','
                  << format_double(row.start.nu) << ','
                  << format_double(row.start.gamma) << ','
                  << format_double(row.solution.beta) << ','
                  << format_double(row.solution.nu) << ','
                  << format_double(row.solution.gamma) << ','
                  << format_double(row.objective) << ','
                  << (row.converged ? 1 : 0) << ',' << row.iterations << '\n';
        }
        std::cout << table.str();
        std::cout << "selected restart " << result.restart_index
                  << ": objective " << format_double(result.objective) << "\n";

        const json params = {{"beta", result.params.beta},
                             {"nu", result.params.nu},
                             {"gamma", result.params.gamma},
                             {"objective", result.objective},
                             {"converged", result.converged}};
        judgecal::write_text_atomic(join_path(out_dir, "params.json"),
                                    params.dump(2) + "\n");
        judgecal::write_text_atomic(join_path(out_dir, "restarts.csv"),
                                    table.str());

        json config = fit.snapshot();
        config["alpha"] = smoothing.smoothing.alpha;
        config["kappa"] = smoothing.smoothing.kappa;
        write_manifest(out_dir, "calibrate", config, seed.seed,
                       {{"votes", votes_path}, {"labels", labels_path}});
        return 0;
    }
};

// ---------------------------------------------------------------------------
// aggregate

struct AggregateCmd {
    std::string votes_path, out_dir, method = "btd", params_path;
    std::string reducer_name = "mean";
    SmoothingFlags smoothing;

    int run() const {
        smoothing.smoothing.validate();
        const SoftReducer reducer = parse_reducer(reducer_name);
        const Aggregator aggregator =
            make_method(method, smoothing.smoothing, reducer);

        DavidsonParams params;
        const DavidsonParams* params_ptr = nullptr;
        if (aggregator.needs_calibration) {
            if (params_path.empty()) {
                throw ValidationError(
                    "method 'btd' needs --params pointing at a fitted "
                    "parameter file");
            }
            params = read_params_file(params_path);
            params_ptr = &params;
        }

        const std::vector<ItemVotes> votes = judgecal::read_votes(votes_path);
        if (votes.empty()) {
            throw judgecal::EmptyInput("'" + votes_path + "' has no votes");
        }

        std::vector<Prediction> predictions;
        predictions.reserve(votes.size());
        for (const ItemVotes& group : votes) {
            EvalItem item;
            item.item_id = group.item_id;
            for (const judgecal::VoteRecord& record : group.records) {
                item.votes.push_back({judgecal::canonicalize(record),
                                      record.order, record.confidence});
            }
            item.counts = judgecal::tally(group.records);
            Prediction prediction;
            prediction.item_id = group.item_id;
            prediction.label = aggregator.predict(item, params_ptr);
            if (params_ptr) {
                prediction.dist = judgecal::davidson_probs(
                    judgecal::compute_features(item.counts,
                                               smoothing.smoothing),
                    params);
            }
            predictions.push_back(std::move(prediction));
        }
        judgecal::write_predictions(join_path(out_dir, "predictions.jsonl"),
                                    predictions);

        json config = {{"method", method},
                       {"reducer", reducer_name},
                       {"alpha", smoothing.smoothing.alpha},
                       {"kappa", smoothing.smoothing.kappa}};
        std::map<std::string, std::string> inputs = {{"votes", votes_path}};
        if (!params_path.empty()) {
            inputs["params"] = params_path;
            config["params_file"] = params_path;
        }
        write_manifest(out_dir, "aggregate", config, 0, inputs);
        std::cout << "wrote " << predictions.size() << " predictions\n";
        return 0;
    }
};

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateCmd {
    std::string votes_path, labels_path, out_dir;
    std::vector<std::string> methods = {"btd", "sc"};
    std::string reducer_name = "mean";
    double ratio = 0.05;
    int splits = 100;
    int resamples = 100;
    double tau = 0.05;
    CommonSeed seed;
    SmoothingFlags smoothing;
    FitFlags fit;

    int run() const {
        smoothing.smoothing.validate();
        const SoftReducer reducer = parse_reducer(reducer_name);
        std::vector<Aggregator> aggregators;
        for (const std::string& name : methods) {
            aggregators.push_back(
                make_method(name, smoothing.smoothing, reducer));
        }

        const std::vector<EvalItem> items =
            load_eval_items(votes_path, labels_path);
        SplitConfig split{ratio, splits,
                          judgecal::derive_seed(seed.seed, "splits")};
        const FitConfig fit_config =
            fit.resolve(judgecal::derive_seed(seed.seed, "fits"));
        const judgecal::SplitsResult result =
            judgecal::run_splits(items, aggregators, split, fit_config);

        std::ostringstream per_split;
        per_split << "method,split,mae,pa\n";
        for (std::size_t m = 0; m < aggregators.size(); ++m) {
            for (int s = 0; s < splits; ++s) {
                per_split << result.method_ids[m] << ',' << s << ','
                          << format_double(result.mae_per_split[m][s]) << ','
                          << format_double(result.pa_per_split[m][s]) << '\n';
            }
        }
        judgecal::write_text_atomic(join_path(out_dir, "splits.csv"),
                                    per_split.str());

        const std::size_t num_methods = aggregators.size();
        SignificanceConfig significance{
            resamples, tau, judgecal::derive_seed(seed.seed, "significance")};

        // Pairwise p-values from pooled sign-flip resampling, once for the
        // ordinal losses (MAE) and once for mismatch losses (PA).
        auto p_matrix = [&](auto&& losses_of) {
            std::vector<std::vector<std::vector<double>>> losses;
            losses.reserve(num_methods);
            for (std::size_t m = 0; m < num_methods; ++m) {
                losses.push_back(losses_of(m));
            }
            std::vector<std::vector<double>> p(
                num_methods, std::vector<double>(num_methods, 1.0));
            for (std::size_t a = 0; a < num_methods; ++a) {
                for (std::size_t b = a + 1; b < num_methods; ++b) {
                    const double value = judgecal::pooled_permutation_test(
                        losses[a], losses[b], significance);
                    p[a][b] = value;
                    p[b][a] = value;
                }
            }
            return p;
        };
        const auto mae_p = p_matrix([&](std::size_t m) {
            return judgecal::per_split_abs_losses(result, items, m);
        });
        const auto pa_p = p_matrix([&](std::size_t m) {
            return judgecal::per_split_mismatch_losses(result, items, m);
        });

        std::vector<double> mae_means(num_methods), pa_means(num_methods);
        for (std::size_t m = 0; m < num_methods; ++m) {
            mae_means[m] = mean_of(result.mae_per_split[m]);
            pa_means[m] = mean_of(result.pa_per_split[m]);
        }
        const auto mae_ranked = judgecal::rank_methods(
            result.method_ids, mae_means, mae_p, tau, /*lower_is_better=*/true);
        const auto pa_ranked = judgecal::rank_methods(
            result.method_ids, pa_means, pa_p, tau, /*lower_is_better=*/false);

        auto metric_block = [&](const std::vector<double>& means,
                                const std::vector<std::vector<double>>& p,
                                const std::vector<judgecal::RankedMethod>&
                                    ranked,
                                auto&& per_split_of) {
            json block;
            json mean_map = json::object(), ci_map = json::object();
            json rank_map = json::object();
            json cluster = json::array();
            for (std::size_t m = 0; m < num_methods; ++m) {
                const std::string& id = result.method_ids[m];
                mean_map[id] = means[m];
                ci_map[id] = ci95_half_width(per_split_of(m));
                rank_map[id] = {{"rank", ranked[m].rank},
                                {"in_top_cluster", ranked[m].in_top_cluster}};
                if (ranked[m].in_top_cluster) cluster.push_back(id);
            }
            block["mean"] = mean_map;
            block["ci95_half_width"] = ci_map;
            block["ranking"] = rank_map;
            block["top_cluster"] = cluster;
            block["p_values"] = p;
            return block;
        };
        json summary;
        summary["methods"] = result.method_ids;
        summary["num_splits"] = splits;
        summary["calibration_ratio"] = ratio;
        summary["mae"] = metric_block(
            mae_means, mae_p, mae_ranked,
            [&](std::size_t m) { return result.mae_per_split[m]; });
        summary["pa"] = metric_block(
            pa_means, pa_p, pa_ranked,
            [&](std::size_t m) { return result.pa_per_split[m]; });
        judgecal::write_text_atomic(join_path(out_dir, "summary.json"),
                                    summary.dump(2) + "\n");

        for (std::size_t m = 0; m < num_methods; ++m) {
            std::cout << result.method_ids[m]
                      << ": mae=" << format_double(mae_means[m])
                      << " pa=" << format_double(pa_means[m]) << " rank="
                      << mae_ranked[m].rank
                      << (mae_ranked[m].in_top_cluster ? " (top cluster)" : "")
                      << "\n";
        }

        json config = fit.snapshot();
        config["methods"] = methods;
        config["reducer"] = reducer_name;
        config["ratio"] = ratio;
        config["splits"] = splits;
        config["resamples"] = resamples;
        config["tau"] = tau;
        config["alpha"] = smoothing.smoothing.alpha;
        config["kappa"] = smoothing.smoothing.kappa;
        write_manifest(out_dir, "evaluate", config, seed.seed,
                       {{"votes", votes_path}, {"labels", labels_path}});
        return 0;
    }
};

// ---------------------------------------------------------------------------
// sweep

struct SweepCmd {
    std::string votes_path, labels_path, out_dir, method = "btd";
    std::string reducer_name = "mean";
    std::vector<int> sizes;
    int splits = 100;
    CommonSeed seed;
    SmoothingFlags smoothing;
    FitFlags fit;

    int run() const {
        smoothing.smoothing.validate();
        const Aggregator aggregator = make_method(
            method, smoothing.smoothing, parse_reducer(reducer_name));
        const std::vector<EvalItem> items =
            load_eval_items(votes_path, labels_path);
        // calibration_ratio is unused by the sweep (sizes are explicit)
        // but the config still validates it, so keep a legal placeholder.
        SplitConfig split{0.5, splits,
                          judgecal::derive_seed(seed.seed, "splits")};
        const FitConfig fit_config =
            fit.resolve(judgecal::derive_seed(seed.seed, "fits"));
        const std::vector<double> means = judgecal::calibration_size_sweep(
            items, aggregator, sizes, split, fit_config);

        std::ostringstream csv;
        csv << "size,mean_mae\n";
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            csv << sizes[i] << ',' << format_double(means[i]) << '\n';
        }
        judgecal::write_text_atomic(join_path(out_dir, "sweep.csv"),
                                    csv.str());
        std::cout << csv.str();

        json config = fit.snapshot();
        config["method"] = method;
        config["reducer"] = reducer_name;
        config["sizes"] = sizes;
        config["splits"] = splits;
        config["alpha"] = smoothing.smoothing.alpha;
        config["kappa"] = smoothing.smoothing.kappa;
        write_manifest(out_dir, "sweep", config, seed.seed,
                       {{"votes", votes_path}, {"labels", labels_path}});
        return 0;
    }
};

// ---------------------------------------------------------------------------
// transfer

struct TransferCmd {
    std::vector<std::string> task_specs;
    std::string out_dir;
    double ratio = 0.05;
    int splits = 100;
    CommonSeed seed;
    SmoothingFlags smoothing;
    FitFlags fit;

    int run() const {
        smoothing.smoothing.validate();
        std::vector<judgecal::TransferTask> tasks;
        std::map<std::string, std::string> inputs;
        for (const std::string& spec : task_specs) {
            const std::size_t eq = spec.find('=');
            const std::size_t comma = spec.find(',', eq == std::string::npos
                                                         ? 0
                                                         : eq + 1);
            if (eq == std::string::npos || comma == std::string::npos) {
                throw ValidationError(
                    "task spec '" + spec +
                    "' must look like name=votes.jsonl,labels.jsonl");
            }
            const std::string name = spec.substr(0, eq);
            const std::string votes_path =
                spec.substr(eq + 1, comma - eq - 1);
            const std::string labels_path = spec.substr(comma + 1);
            tasks.push_back(
                {name, load_eval_items(votes_path, labels_path)});
            inputs[name + ".votes"] = votes_path;
            inputs[name + ".labels"] = labels_path;
        }

        SplitConfig split{ratio, splits,
                          judgecal::derive_seed(seed.seed, "splits")};
        const FitConfig fit_config =
            fit.resolve(judgecal::derive_seed(seed.seed, "fits"));
        const std::vector<std::vector<double>> delta =
            judgecal::transfer_matrix(tasks, split, fit_config,
                                      smoothing.smoothing);

        std::ostringstream csv;
        csv << "source";
        for (const judgecal::TransferTask& task : tasks) {
            csv << ',' << task.name;
        }
        csv << '\n';
        for (std::size_t s = 0; s < tasks.size(); ++s) {
            csv << tasks[s].name;
            for (std::size_t t = 0; t < tasks.size(); ++t) {
                csv << ',' << format_double(delta[s][t]);
            }
            csv << '\n';
        }
        judgecal::write_text_atomic(join_path(out_dir, "transfer.csv"),
                                    csv.str());
        std::cout << csv.str();

        json config = fit.snapshot();
        config["tasks"] = task_specs;
        config["ratio"] = ratio;
        config["splits"] = splits;
        config["alpha"] = smoothing.smoothing.alpha;
        config["kappa"] = smoothing.smoothing.kappa;
        write_manifest(out_dir, "transfer", config, seed.seed, inputs);
        return 0;
    }
};

// ---------------------------------------------------------------------------
// loo

struct LooCmd {
    std::string ratings_path, predictions_path, out_dir;

    int run() const {
        const std::vector<ItemLabel> ratings =
            judgecal::read_labels(ratings_path);
        const judgecal::RatingsMatrix matrix =
            judgecal::build_ratings_matrix(ratings);

        std::map<std::string, Verdict> by_item;
        for (const Prediction& p :
             judgecal::read_predictions(predictions_path)) {
            if (!by_item.emplace(p.item_id, p.label).second) {
                throw judgecal::DuplicateLabel(
                    "item '" + p.item_id + "' predicted more than once");
            }
        }
        std::vector<Verdict> aligned;
        aligned.reserve(matrix.item_ids.size());
        for (const std::string& item_id : matrix.item_ids) {
            const auto found = by_item.find(item_id);
            if (found == by_item.end()) {
                throw ValidationError("no prediction for item '" + item_id +
                                      "'");
            }
            aligned.push_back(found->second);
        }

        const std::vector<judgecal::RaterComparison> rows =
            judgecal::leave_one_out(matrix, aligned);
        int wins = 0;
        std::ostringstream csv;
        csv << "rater_id,human_pa,system_pa,win\n";
        for (const judgecal::RaterComparison& row : rows) {
            csv << row.rater_id << ',' << format_double(row.human_pa) << ','
                << format_double(row.system_pa) << ',' << (row.win ? 1 : 0)
                << '\n';
            wins += row.win ? 1 : 0;
        }
        csv << "wins_total,,," << wins << '\n';
        judgecal::write_text_atomic(join_path(out_dir, "loo.csv"), csv.str());
        std::cout << csv.str();
        std::cout << "system wins " << wins << " of " << rows.size()
                  << " raters\n";

        write_manifest(out_dir, "loo", json::object(), 0,
                       {{"ratings", ratings_path},
                        {"predictions", predictions_path}});
        return 0;
    }
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateCmd {
    std::string out_dir;
    int items = 0;
    int votes_per_item = 0;
    double beta = 1.0, nu = 1.0, gamma = 1.0;
    std::vector<double> concentration = {2.0, 2.0, 2.0};
    double order_bias = 0.0;
    CommonSeed seed;

    int run() const {
        judgecal::GeneratorConfig config;
        config.theta_true = {beta, nu, gamma};
        config.num_items = items;
        config.votes_per_item = votes_per_item;
        config.dirichlet_concentration = {concentration[0], concentration[1],
                                          concentration[2]};
        config.order_bias = order_bias;
        config.seed = seed.seed;
        const judgecal::SyntheticDataset dataset =
            judgecal::generate_synthetic(config);

        judgecal::write_votes(join_path(out_dir, "votes.jsonl"),
                              dataset.votes);
        judgecal::write_labels(join_path(out_dir, "labels.jsonl"),
                               dataset.labels);
        judgecal::write_truth_dists(join_path(out_dir, "truth_dists.jsonl"),
                                    dataset.items);
        std::cout << "wrote " << dataset.votes.size() << " votes over "
                  << dataset.items.size() << " items\n";

        const json snapshot = {{"items", items},
                               {"votes_per_item", votes_per_item},
                               {"beta", beta},
                               {"nu", nu},
                               {"gamma", gamma},
                               {"concentration", concentration},
                               {"order_bias", order_bias}};
        write_manifest(out_dir, "simulate", snapshot, seed.seed, {});
        return 0;
    }
};

// ---------------------------------------------------------------------------
// regions

struct RegionsCmd {
    std::string out_dir, params_path;
    int n = 20;
    double beta = 1.0, nu = 1.0, gamma = 1.0;
    std::vector<std::string> methods = {"sc", "btd"};
    SmoothingFlags smoothing;

    int run() const {
        smoothing.smoothing.validate();
        if (n < 1) throw ValidationError("--n must be at least 1");
        DavidsonParams params{beta, nu, gamma};
        if (!params_path.empty()) params = read_params_file(params_path);

        std::ostringstream csv;
        csv << "c_plus,c_minus,c_tie";
        for (const std::string& name : methods) csv << ',' << name;
        csv << '\n';
        for (int c_plus = 0; c_plus <= n; ++c_plus) {
            for (int c_minus = 0; c_minus + c_plus <= n; ++c_minus) {
                const VoteCounts counts{c_plus, c_minus,
                                        n - c_plus - c_minus};
                csv << c_plus << ',' << c_minus << ',' << counts.tie;
                for (const std::string& name : methods) {
                    Verdict verdict;
                    if (name == "sc") {
                        verdict = judgecal::majority_vote(counts);
                    } else if (name == "btd") {
                        verdict = judgecal::bayes_action(
                            judgecal::davidson_probs(
                                judgecal::compute_features(
                                    counts, smoothing.smoothing),
                                params));
                    } else {
                        throw ValidationError(
                            "regions supports methods sc and btd, got '" +
                            name + "'");
                    }
                    csv << ',' << judgecal::verdict_value(verdict);
                }
                csv << '\n';
            }
        }
        judgecal::write_text_atomic(join_path(out_dir, "regions.csv"),
                                    csv.str());
        std::cout << "wrote decision regions for n=" << n << " ("
                  << (n + 1) * (n + 2) / 2 << " cells)\n";

        json config = {{"n", n},
                       {"methods", methods},
                       {"beta", params.beta},
                       {"nu", params.nu},
                       {"gamma", params.gamma},
                       {"alpha", smoothing.smoothing.alpha},
                       {"kappa", smoothing.smoothing.kappa}};
        std::map<std::string, std::string> inputs;
        if (!params_path.empty()) inputs["params"] = params_path;
        write_manifest(out_dir, "regions", config, 0, inputs);
        return 0;
    }
};

// ---------------------------------------------------------------------------
// order-report

struct OrderReportCmd {
    std::string votes_path, labels_path, out_dir, params_path;
    std::string method = "sc";
    SmoothingFlags smoothing;

    int run() const {
        smoothing.smoothing.validate();
        const std::vector<EvalItem> items =
            load_eval_items(votes_path, labels_path);

        std::function<Verdict(const VoteCounts&)> aggregate;
        if (method == "sc") {
            aggregate = [](const VoteCounts& counts) {
                return judgecal::majority_vote(counts);
            };
        } else if (method == "btd") {
            if (params_path.empty()) {
                throw ValidationError(
                    "method 'btd' needs --params pointing at a fitted "
                    "parameter file");
            }
            const DavidsonParams params = read_params_file(params_path);
            const Smoothing s = smoothing.smoothing;
            aggregate = [params, s](const VoteCounts& counts) {
                return judgecal::bayes_action(judgecal::davidson_probs(
                    judgecal::compute_features(counts, s), params));
            };
        } else {
            throw ValidationError(
                "order-report supports methods sc and btd, got '" + method +
                "'");
        }

        const judgecal::OrderBalanceReport report =
            judgecal::order_balance_report(items, aggregate);
        std::ostringstream csv;
        csv << "strategy,mae\n";
        csv << "first_only," << format_double(report.first_only_mae) << '\n';
        csv << "second_only," << format_double(report.second_only_mae)
            << '\n';
        csv << "balanced," << format_double(report.balanced_mae) << '\n';
        judgecal::write_text_atomic(join_path(out_dir, "order.csv"),
                                    csv.str());
        std::cout << csv.str();

        json config = {{"method", method},
                       {"alpha", smoothing.smoothing.alpha},
                       {"kappa", smoothing.smoothing.kappa}};
        std::map<std::string, std::string> inputs = {
            {"votes", votes_path}, {"labels", labels_path}};
        if (!params_path.empty()) {
            inputs["params"] = params_path;
            config["params_file"] = params_path;
        }
        write_manifest(out_dir, "order-report", config, 0, inputs);
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"judgecal: calibrated aggregation of ternary judge votes"};
    app.set_version_flag("--version", JUDGECAL_VERSION);
    app.require_subcommand(1);

    CalibrateCmd calibrate;
    auto* cal = app.add_subcommand(
        "calibrate", "Fit Davidson parameters by minimizing mean DRPS");
    cal->add_option("--votes", calibrate.votes_path, "Votes file (JSONL)")
        ->required();
    cal->add_option("--labels", calibrate.labels_path, "Gold labels (JSONL)")
        ->required();
    cal->add_option("--out-dir", calibrate.out_dir, "Output directory")
        ->required();
    calibrate.seed.attach(cal);
    calibrate.smoothing.attach(cal);
    calibrate.fit.attach(cal);

    AggregateCmd aggregate;
    auto* agg = app.add_subcommand(
        "aggregate", "Turn each item's votes into a single verdict");
    agg->add_option("--votes", aggregate.votes_path, "Votes file (JSONL)")
        ->required();
    agg->add_option("--out-dir", aggregate.out_dir, "Output directory")
        ->required();
    agg->add_option("--method", aggregate.method,
                    "btd, sc, soft-sc, ci-sc, or median");
    agg->add_option("--params", aggregate.params_path,
                    "Fitted parameter file (required for btd)");
    agg->add_option("--reducer", aggregate.reducer_name,
                    "soft-sc reducer: min, mean, or product");
    aggregate.smoothing.attach(agg);

    EvaluateCmd evaluate;
    auto* eval = app.add_subcommand(
        "evaluate",
        "Score methods over repeated calibration/evaluation splits");
    eval->add_option("--votes", evaluate.votes_path, "Votes file (JSONL)")
        ->required();
    eval->add_option("--labels", evaluate.labels_path, "Gold labels (JSONL)")
        ->required();
    eval->add_option("--out-dir", evaluate.out_dir, "Output directory")
        ->required();
    eval->add_option("--methods", evaluate.methods,
                     "Comma-separated method list")
        ->delimiter(',');
    eval->add_option("--reducer", evaluate.reducer_name,
                     "soft-sc reducer: min, mean, or product");
    eval->add_option("--ratio", evaluate.ratio,
                     "Calibration fraction per split");
    eval->add_option("--splits", evaluate.splits, "Number of random splits");
    eval->add_option("--resamples", evaluate.resamples,
                     "Sign-flip resamples per split");
    eval->add_option("--tau", evaluate.tau, "Significance level");
    evaluate.seed.attach(eval);
    evaluate.smoothing.attach(eval);
    evaluate.fit.attach(eval);

    SweepCmd sweep;
    auto* sw = app.add_subcommand(
        "sweep", "Mean MAE as a function of calibration-set size");
    sw->add_option("--votes", sweep.votes_path, "Votes file (JSONL)")
        ->required();
    sw->add_option("--labels", sweep.labels_path, "Gold labels (JSONL)")
        ->required();
    sw->add_option("--out-dir", sweep.out_dir, "Output directory")
        ->required();
    sw->add_option("--sizes", sweep.sizes, "Calibration sizes to sweep")
        ->delimiter(',')
        ->required();
    sw->add_option("--method", sweep.method, "Method under test");
    sw->add_option("--reducer", sweep.reducer_name,
                   "soft-sc reducer: min, mean, or product");
    sw->add_option("--splits", sweep.splits, "Random draws per size");
    sweep.seed.attach(sw);
    sweep.smoothing.attach(sw);
    sweep.fit.attach(sw);

    TransferCmd transfer;
    auto* tr = app.add_subcommand(
        "transfer", "Cross-task calibration transfer (delta MAE matrix)");
    tr->add_option("--task", transfer.task_specs,
                   "Task spec name=votes.jsonl,labels.jsonl (repeatable)")
        ->required();
    tr->add_option("--out-dir", transfer.out_dir, "Output directory")
        ->required();
    tr->add_option("--ratio", transfer.ratio,
                   "Calibration fraction per split");
    tr->add_option("--splits", transfer.splits, "Number of random splits");
    transfer.seed.attach(tr);
    transfer.smoothing.attach(tr);
    transfer.fit.attach(tr);

    LooCmd loo;
    auto* lo = app.add_subcommand(
        "loo", "Leave-one-rater-out comparison against system predictions");
    lo->add_option("--ratings", loo.ratings_path,
                   "Multi-rater labels file (JSONL with rater_id)")
        ->required();
    lo->add_option("--predictions", loo.predictions_path,
                   "System predictions (JSONL)")
        ->required();
    lo->add_option("--out-dir", loo.out_dir, "Output directory")->required();

    SimulateCmd simulate;
    auto* sim = app.add_subcommand(
        "simulate", "Generate a synthetic corpus from the ternary vote model");
    sim->add_option("--out-dir", simulate.out_dir, "Output directory")
        ->required();
    sim->add_option("--items", simulate.items, "Number of items")->required();
    sim->add_option("--votes-per-item", simulate.votes_per_item,
                    "Votes per item")
        ->required();
    sim->add_option("--beta", simulate.beta, "True polarity weight");
    sim->add_option("--nu", simulate.nu, "True tie propensity");
    sim->add_option("--gamma", simulate.gamma, "True decisiveness weight");
    sim->add_option("--concentration", simulate.concentration,
                    "Dirichlet concentration minus,tie,plus")
        ->delimiter(',')
        ->expected(3);
    sim->add_option("--order-bias", simulate.order_bias,
                    "First-position preference in [-1, 1]");
    simulate.seed.attach(sim);

    RegionsCmd regions;
    auto* reg = app.add_subcommand(
        "regions", "Verdict of each method over all vote tallies of size n");
    reg->add_option("--out-dir", regions.out_dir, "Output directory")
        ->required();
    reg->add_option("--n", regions.n, "Total votes per tally");
    reg->add_option("--methods", regions.methods,
                    "Comma-separated subset of sc,btd")
        ->delimiter(',');
    reg->add_option("--params", regions.params_path,
                    "Fitted parameter file (overrides --beta/--nu/--gamma)");
    reg->add_option("--beta", regions.beta, "Polarity weight");
    reg->add_option("--nu", regions.nu, "Tie propensity");
    reg->add_option("--gamma", regions.gamma, "Decisiveness weight");
    regions.smoothing.attach(reg);

    OrderReportCmd order_report;
    auto* ord = app.add_subcommand(
        "order-report",
        "MAE using first-order-only, second-order-only, and balanced votes");
    ord->add_option("--votes", order_report.votes_path, "Votes file (JSONL)")
        ->required();
    ord->add_option("--labels", order_report.labels_path,
                    "Gold labels (JSONL)")
        ->required();
    ord->add_option("--out-dir", order_report.out_dir, "Output directory")
        ->required();
    ord->add_option("--method", order_report.method, "sc or btd");
    ord->add_option("--params", order_report.params_path,
                    "Fitted parameter file (required for btd)");
    order_report.smoothing.attach(ord);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (cal->parsed()) return calibrate.run();
        if (agg->parsed()) return aggregate.run();
        if (eval->parsed()) return evaluate.run();
        if (sw->parsed()) return sweep.run();
        if (tr->parsed()) return transfer.run();
        if (lo->parsed()) return loo.run();
        if (sim->parsed()) return simulate.run();
        if (reg->parsed()) return regions.run();
        if (ord->parsed()) return order_report.run();
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
