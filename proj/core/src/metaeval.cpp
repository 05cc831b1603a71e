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

#include "judgecal/metaeval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "judgecal/btd.hpp"
#include "judgecal/errors.hpp"
#include "judgecal/rng.hpp"

namespace judgecal {
namespace {

int label_index(Verdict v) { return verdict_value(v) + 1; }

void validate_split_config(const SplitConfig& config) {
    if (!(config.calibration_ratio > 0.0) ||
        !(config.calibration_ratio < 1.0)) {
        throw ValidationError("calibration_ratio must lie in (0, 1)");
    }
    if (config.num_splits < 1) {
        throw ValidationError("num_splits must be at least 1");
    }
}

std::size_t calibration_size(double ratio, std::size_t num_items) {
    return static_cast<std::size_t>(
        std::floor(ratio * static_cast<double>(num_items)));
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& sorted,
                                    std::size_t n) {
    std::vector<std::size_t> rest;
    rest.reserve(n - sorted.size());
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (cursor < sorted.size() && sorted[cursor] == i) {
            ++cursor;
        } else {
            rest.push_back(i);
        }
    }
    return rest;
}

std::vector<CalibrationItem> calibration_items(
    std::span<const EvalItem> items, const std::vector<std::size_t>& indices,
    const Smoothing& smoothing) {
    std::vector<CalibrationItem> out;
    out.reserve(indices.size());
    for (std::size_t index : indices) {
        out.push_back({compute_features(items[index].counts, smoothing),
                       items[index].truth});
    }
    return out;
}

std::vector<ConfidentVote> confident_votes(const EvalItem& item) {
    std::vector<ConfidentVote> votes;
    votes.reserve(item.votes.size());
    for (const CanonicalVote& vote : item.votes) {
        if (!vote.confidence) {
            throw MissingConfidence("item '" + item.item_id +
                                    "' has a vote without a confidence score");
        }
        votes.push_back({vote.label, *vote.confidence});
    }
    return votes;
}

// Sign-flip statistics for one difference vector; flips come from rng.
double flipped_mean(const std::vector<double>& diffs, std::mt19937_64& rng) {
    double total = 0.0;
    for (double diff : diffs) {
        total += (rng() & 1u) ? diff : -diff;
    }
    return total / static_cast<double>(diffs.size());
}

void validate_significance(const SignificanceConfig& config) {
    if (config.resamples_per_split < 1) {
        throw ValidationError("resamples_per_split must be at least 1");
    }
    if (!(config.tau > 0.0) || !(config.tau < 1.0)) {
        throw ValidationError("tau must lie in (0, 1)");
    }
}

}  // namespace

double mae(std::span<const LabeledPrediction> predictions) {
    if (predictions.empty()) {
        throw EmptyInput("mae requires at least one prediction");
    }
    double total = 0.0;
    for (const LabeledPrediction& p : predictions) {
        total += absolute_error(p.predicted, p.truth);
    }
    return total / static_cast<double>(predictions.size());
}

double pairwise_accuracy(std::span<const LabeledPrediction> predictions) {
    if (predictions.empty()) {
        throw EmptyInput("pairwise accuracy requires at least one prediction");
    }
    double hits = 0.0;
    for (const LabeledPrediction& p : predictions) {
        if (p.predicted == p.truth) hits += 1.0;
    }
    return hits / static_cast<double>(predictions.size());
}

std::vector<EvalItem> build_eval_items(std::span<const ItemVotes> votes,
                                       std::span<const ItemLabel> labels) {
    std::unordered_map<std::string, Verdict> truth;
    for (const ItemLabel& label : labels) {
        if (!truth.emplace(label.item_id, label.truth).second) {
            throw DuplicateLabel("item '" + label.item_id +
                                 "' has more than one gold label; evaluation "
                                 "needs exactly one per item");
        }
    }
    std::vector<EvalItem> items;
    items.reserve(votes.size());
    for (const ItemVotes& group : votes) {
        const auto it = truth.find(group.item_id);
        if (it == truth.end()) {
            throw ValidationError("item '" + group.item_id +
                                  "' has votes but no gold label");
        }
        EvalItem item;
        item.item_id = group.item_id;
        item.votes.reserve(group.records.size());
        for (const VoteRecord& record : group.records) {
            item.votes.push_back(
                {canonicalize(record), record.order, record.confidence});
        }
        item.counts = tally(group.records);
        item.truth = it->second;
        items.push_back(std::move(item));
    }
    return items;
}

Aggregator make_btd_aggregator(const Smoothing& smoothing) {
    Aggregator aggregator;
    aggregator.id = "btd";
    aggregator.needs_calibration = true;
    aggregator.smoothing = smoothing;
    aggregator.predict = [smoothing](const EvalItem& item,
                                     const DavidsonParams* params) {
        if (!params) {
            throw std::logic_error("btd aggregation needs fitted parameters");
        }
        return bayes_action(
            davidson_probs(compute_features(item.counts, smoothing), *params));
    };
    return aggregator;
}

Aggregator make_sc_aggregator() {
    Aggregator aggregator;
    aggregator.id = "sc";
    aggregator.predict = [](const EvalItem& item, const DavidsonParams*) {
        return majority_vote(item.counts);
    };
    return aggregator;
}

Aggregator make_soft_sc_aggregator(SoftReducer reducer) {
    Aggregator aggregator;
    aggregator.id = "soft-sc";
    aggregator.predict = [reducer](const EvalItem& item,
                                   const DavidsonParams*) {
        return soft_sc(confident_votes(item), reducer);
    };
    return aggregator;
}

Aggregator make_ci_sc_aggregator() {
    Aggregator aggregator;
    aggregator.id = "ci-sc";
    aggregator.predict = [](const EvalItem& item, const DavidsonParams*) {
        return ci_sc(confident_votes(item));
    };
    return aggregator;
}

Aggregator make_median_aggregator() {
    Aggregator aggregator;
    aggregator.id = "median";
    aggregator.predict = [](const EvalItem& item, const DavidsonParams*) {
        if (item.votes.size() != 2) {
            throw ValidationError("median aggregation needs exactly two votes "
                                  "per item; item '" + item.item_id + "' has " +
                                  std::to_string(item.votes.size()));
        }
        return rounded_median(item.votes[0].label, item.votes[1].label);
    };
    return aggregator;
}

SplitsResult run_splits(std::span<const EvalItem> items,
                        const std::vector<Aggregator>& methods,
                        const SplitConfig& split, const FitConfig& fit) {
    validate_split_config(split);
    if (items.empty()) throw EmptyInput("run_splits requires items");
    if (methods.empty()) throw EmptyInput("run_splits requires methods");

    const std::size_t n = items.size();
    const std::size_t cal_size = calibration_size(split.calibration_ratio, n);
    if (cal_size < 1 || cal_size >= n) {
        throw InsufficientData(
            "calibration ratio " + std::to_string(split.calibration_ratio) +
            " of " + std::to_string(n) +
            " items leaves no usable calibration/evaluation split");
    }

    SplitsResult result;
    for (const Aggregator& method : methods) {
        result.method_ids.push_back(method.id);
    }
    result.calibration_indices.reserve(split.num_splits);
    result.eval_indices.reserve(split.num_splits);
    result.predictions.assign(methods.size(), {});
    result.mae_per_split.assign(methods.size(), {});
    result.pa_per_split.assign(methods.size(), {});

    for (int s = 0; s < split.num_splits; ++s) {
        auto rng = make_engine(split.seed, "split", static_cast<std::uint64_t>(s));
        std::vector<std::size_t> cal = sample_without_replacement(rng, n, cal_size);
        std::vector<std::size_t> eval = complement(cal, n);

        for (std::size_t m = 0; m < methods.size(); ++m) {
            const Aggregator& method = methods[m];
            DavidsonParams fitted;
            const DavidsonParams* params = nullptr;
            if (method.needs_calibration) {
                FitConfig per_split = fit;
                per_split.seed =
                    derive_seed(fit.seed, "fit", static_cast<std::uint64_t>(s));
                fitted = fit_drps(
                             calibration_items(items, cal, method.smoothing),
                             per_split)
                             .params;
                params = &fitted;
            }
            std::vector<Verdict> predictions;
            predictions.reserve(eval.size());
            double abs_total = 0.0;
            double hits = 0.0;
            for (std::size_t index : eval) {
                const Verdict predicted = method.predict(items[index], params);
                predictions.push_back(predicted);
                abs_total += absolute_error(predicted, items[index].truth);
                if (predicted == items[index].truth) hits += 1.0;
            }
            const double count = static_cast<double>(eval.size());
            result.predictions[m].push_back(std::move(predictions));
            result.mae_per_split[m].push_back(abs_total / count);
            result.pa_per_split[m].push_back(hits / count);
        }

        result.calibration_indices.push_back(std::move(cal));
        result.eval_indices.push_back(std::move(eval));
    }
    return result;
}

std::vector<std::vector<double>> per_split_abs_losses(
    const SplitsResult& result, std::span<const EvalItem> items,
    std::size_t method_index) {
    std::vector<std::vector<double>> losses;
    losses.reserve(result.eval_indices.size());
    for (std::size_t s = 0; s < result.eval_indices.size(); ++s) {
        const auto& eval = result.eval_indices[s];
        const auto& predictions = result.predictions[method_index][s];
        std::vector<double> split_losses(eval.size());
        for (std::size_t k = 0; k < eval.size(); ++k) {
            split_losses[k] =
                absolute_error(predictions[k], items[eval[k]].truth);
        }
        losses.push_back(std::move(split_losses));
    }
    return losses;
}

std::vector<std::vector<double>> per_split_mismatch_losses(
    const SplitsResult& result, std::span<const EvalItem> items,
    std::size_t method_index) {
    std::vector<std::vector<double>> losses;
    losses.reserve(result.eval_indices.size());
    for (std::size_t s = 0; s < result.eval_indices.size(); ++s) {
        const auto& eval = result.eval_indices[s];
        const auto& predictions = result.predictions[method_index][s];
        std::vector<double> split_losses(eval.size());
        for (std::size_t k = 0; k < eval.size(); ++k) {
            split_losses[k] =
                predictions[k] == items[eval[k]].truth ? 0.0 : 1.0;
        }
        losses.push_back(std::move(split_losses));
    }
    return losses;
}

double paired_permutation_test(std::span<const double> losses_a,
                               std::span<const double> losses_b,
                               const SignificanceConfig& config) {
    validate_significance(config);
    if (losses_a.size() != losses_b.size()) {
        throw LengthMismatch("paired test needs aligned loss vectors, got " +
                             std::to_string(losses_a.size()) + " and " +
                             std::to_string(losses_b.size()));
    }
    if (losses_a.empty()) {
        throw EmptyInput("paired test needs at least one loss pair");
    }

    std::vector<double> diffs(losses_a.size());
    double observed = 0.0;
    for (std::size_t i = 0; i < losses_a.size(); ++i) {
        diffs[i] = losses_a[i] - losses_b[i];
        observed += diffs[i];
    }
    observed /= static_cast<double>(diffs.size());

    auto rng = make_engine(config.seed, "permutation", 0);
    int extreme = 0;
    for (int r = 0; r < config.resamples_per_split; ++r) {
        if (std::abs(flipped_mean(diffs, rng)) >= std::abs(observed)) {
            ++extreme;
        }
    }
    return (1.0 + extreme) / (1.0 + config.resamples_per_split);
}

double pooled_permutation_test(const std::vector<std::vector<double>>& losses_a,
                               const std::vector<std::vector<double>>& losses_b,
                               const SignificanceConfig& config) {
    validate_significance(config);
    if (losses_a.size() != losses_b.size()) {
        throw LengthMismatch("pooled test needs the same number of splits");
    }
    if (losses_a.empty()) {
        throw EmptyInput("pooled test needs at least one split");
    }

    std::vector<std::vector<double>> diffs(losses_a.size());
    double pooled_sum = 0.0;
    std::size_t pooled_count = 0;
    for (std::size_t s = 0; s < losses_a.size(); ++s) {
        if (losses_a[s].size() != losses_b[s].size()) {
            throw LengthMismatch("pooled test split " + std::to_string(s) +
                                 " has unaligned loss vectors");
        }
        if (losses_a[s].empty()) {
            throw EmptyInput("pooled test split " + std::to_string(s) +
                             " is empty");
        }
        diffs[s].resize(losses_a[s].size());
        for (std::size_t i = 0; i < losses_a[s].size(); ++i) {
            diffs[s][i] = losses_a[s][i] - losses_b[s][i];
            pooled_sum += diffs[s][i];
        }
        pooled_count += losses_a[s].size();
    }
    const double observed = pooled_sum / static_cast<double>(pooled_count);

    // Every split contributes resamples_per_split statistics to one pooled
    // null distribution; flips depend only on (seed, split), so the p-value
    // is symmetric in the two methods.
    int extreme = 0;
    for (std::size_t s = 0; s < diffs.size(); ++s) {
        auto rng = make_engine(config.seed, "permutation-split",
                               static_cast<std::uint64_t>(s));
        for (int r = 0; r < config.resamples_per_split; ++r) {
            if (std::abs(flipped_mean(diffs[s], rng)) >= std::abs(observed)) {
                ++extreme;
            }
        }
    }
    const double total =
        static_cast<double>(diffs.size()) * config.resamples_per_split;
    return (1.0 + extreme) / (1.0 + total);
}

std::vector<RankedMethod> rank_methods(
    const std::vector<std::string>& ids, const std::vector<double>& means,
    const std::vector<std::vector<double>>& p_values, double tau,
    bool lower_is_better) {
    if (ids.size() != means.size() || ids.size() != p_values.size()) {
        throw LengthMismatch("method ids, means, and p-values must align");
    }
    if (ids.empty()) throw EmptyInput("ranking requires at least one method");

    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return lower_is_better ? means[a] < means[b]
                                                : means[a] > means[b];
                     });

    std::vector<std::size_t> cluster = {order[0]};
    for (std::size_t k = 1; k < order.size(); ++k) {
        const std::size_t candidate = order[k];
        const bool admitted = std::all_of(
            cluster.begin(), cluster.end(), [&](std::size_t member) {
                return p_values[candidate][member] >= tau;
            });
        if (!admitted) break;
        cluster.push_back(candidate);
    }

    std::vector<RankedMethod> ranked(ids.size());
    for (std::size_t position = 0; position < order.size(); ++position) {
        const std::size_t index = order[position];
        const bool member =
            std::find(cluster.begin(), cluster.end(), index) != cluster.end();
        ranked[index] = {ids[index], means[index],
                         member ? 1 : static_cast<int>(position) + 1, member};
    }
    return ranked;
}

std::vector<std::string> top_cluster(
    const std::vector<std::pair<std::string, double>>& method_means,
    const std::vector<std::vector<double>>& p_values, double tau,
    bool lower_is_better) {
    std::vector<std::string> ids;
    std::vector<double> means;
    for (const auto& [id, mean] : method_means) {
        ids.push_back(id);
        means.push_back(mean);
    }
    const std::vector<RankedMethod> ranked =
        rank_methods(ids, means, p_values, tau, lower_is_better);

    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return lower_is_better ? means[a] < means[b]
                                                : means[a] > means[b];
                     });
    std::vector<std::string> cluster;
    for (std::size_t index : order) {
        if (ranked[index].in_top_cluster) cluster.push_back(ids[index]);
    }
    return cluster;
}

RatingsMatrix build_ratings_matrix(std::span<const ItemLabel> labels) {
    if (labels.empty()) throw EmptyInput("ratings matrix requires labels");

    RatingsMatrix matrix;
    std::unordered_map<std::string, std::size_t> item_index;
    std::unordered_map<std::string, std::size_t> rater_index;
    std::vector<std::vector<std::optional<Verdict>>> cells;

    for (const ItemLabel& label : labels) {
        if (!label.rater_id) {
            throw ValidationError("item '" + label.item_id +
                                  "' has a label without rater_id; the "
                                  "ratings matrix needs attributed labels");
        }
        const auto [item_slot, new_item] =
            item_index.try_emplace(label.item_id, matrix.item_ids.size());
        if (new_item) {
            matrix.item_ids.push_back(label.item_id);
            cells.emplace_back();
        }
        const auto [rater_slot, new_rater] =
            rater_index.try_emplace(*label.rater_id, matrix.rater_ids.size());
        if (new_rater) matrix.rater_ids.push_back(*label.rater_id);

        auto& row = cells[item_slot->second];
        if (row.size() <= rater_slot->second) {
            row.resize(matrix.rater_ids.size());
        }
        if (row[rater_slot->second]) {
            throw DuplicateLabel("item '" + label.item_id +
                                 "' has two labels from rater '" +
                                 *label.rater_id + "'");
        }
        row[rater_slot->second] = label.truth;
    }

    matrix.ratings.resize(matrix.item_ids.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        cells[i].resize(matrix.rater_ids.size());
        matrix.ratings[i].reserve(matrix.rater_ids.size());
        for (std::size_t r = 0; r < matrix.rater_ids.size(); ++r) {
            if (!cells[i][r]) {
                throw InsufficientData("item '" + matrix.item_ids[i] +
                                       "' is missing a label from rater '" +
                                       matrix.rater_ids[r] + "'");
            }
            matrix.ratings[i].push_back(*cells[i][r]);
        }
    }
    return matrix;
}

std::vector<RaterComparison> leave_one_out(
    const RatingsMatrix& ratings, std::span<const Verdict> system_predictions) {
    const std::size_t num_items = ratings.item_ids.size();
    const std::size_t num_raters = ratings.rater_ids.size();
    if (num_raters < 3) {
        throw TooFewRaters("leave-one-out needs at least 3 raters, got " +
                           std::to_string(num_raters));
    }
    if (system_predictions.size() != num_items) {
        throw LengthMismatch("system predictions must align with matrix items");
    }

    std::vector<RaterComparison> comparisons;
    comparisons.reserve(num_raters);
    for (std::size_t held_out = 0; held_out < num_raters; ++held_out) {
        double human_hits = 0.0, system_hits = 0.0;
        for (std::size_t i = 0; i < num_items; ++i) {
            VoteCounts counts;
            for (std::size_t r = 0; r < num_raters; ++r) {
                if (r == held_out) continue;
                switch (ratings.ratings[i][r]) {
                    case Verdict::Plus: ++counts.plus; break;
                    case Verdict::Minus: ++counts.minus; break;
                    case Verdict::Tie: ++counts.tie; break;
                }
            }
            const Verdict truth = majority_vote(counts);
            if (ratings.ratings[i][held_out] == truth) human_hits += 1.0;
            if (system_predictions[i] == truth) system_hits += 1.0;
        }
        const double denom = static_cast<double>(num_items);
        const double human_pa = human_hits / denom;
        const double system_pa = system_hits / denom;
        comparisons.push_back({ratings.rater_ids[held_out], human_pa,
                               system_pa, system_pa > human_pa});
    }
    return comparisons;
}

std::vector<std::vector<double>> transfer_matrix(
    const std::vector<TransferTask>& tasks, const SplitConfig& split,
    const FitConfig& fit, const Smoothing& smoothing) {
    validate_split_config(split);
    if (tasks.size() < 2) {
        throw InsufficientData("transfer analysis needs at least 2 tasks");
    }

    const std::size_t num_tasks = tasks.size();
    const int num_splits = split.num_splits;

    struct TaskSplit {
        DavidsonParams params;
        std::vector<std::size_t> eval;
    };
    // [task][split]: parameters fitted in-domain plus the evaluation subset.
    std::vector<std::vector<TaskSplit>> task_splits(num_tasks);
    for (std::size_t k = 0; k < num_tasks; ++k) {
        const auto& items = tasks[k].items;
        if (items.empty()) {
            throw EmptyInput("task '" + tasks[k].name + "' has no items");
        }
        const std::size_t cal_size =
            calibration_size(split.calibration_ratio, items.size());
        if (cal_size < 1 || cal_size >= items.size()) {
            throw InsufficientData("task '" + tasks[k].name +
                                   "' is too small for the calibration ratio");
        }
        const std::uint64_t task_seed =
            derive_seed(split.seed, "transfer-task", static_cast<std::uint64_t>(k));
        const std::uint64_t task_fit_seed =
            derive_seed(fit.seed, "transfer-task", static_cast<std::uint64_t>(k));
        task_splits[k].reserve(num_splits);
        for (int s = 0; s < num_splits; ++s) {
            auto rng = make_engine(task_seed, "split", static_cast<std::uint64_t>(s));
            std::vector<std::size_t> cal =
                sample_without_replacement(rng, items.size(), cal_size);
            std::vector<std::size_t> eval = complement(cal, items.size());
            FitConfig per_split = fit;
            per_split.seed =
                derive_seed(task_fit_seed, "fit", static_cast<std::uint64_t>(s));
            const FitResult fitted = fit_drps(
                calibration_items(items, cal, smoothing), per_split);
            task_splits[k].push_back({fitted.params, std::move(eval)});
        }
    }

    auto eval_mae = [&](const std::vector<EvalItem>& items,
                        const std::vector<std::size_t>& eval,
                        const DavidsonParams& params) {
        double total = 0.0;
        for (std::size_t index : eval) {
            const Verdict predicted = bayes_action(davidson_probs(
                compute_features(items[index].counts, smoothing), params));
            total += absolute_error(predicted, items[index].truth);
        }
        return total / static_cast<double>(eval.size());
    };

    std::vector<std::vector<double>> delta(
        num_tasks, std::vector<double>(num_tasks, 0.0));
    for (std::size_t target = 0; target < num_tasks; ++target) {
        for (int s = 0; s < num_splits; ++s) {
            const auto& in_domain = task_splits[target][s];
            const double baseline =
                eval_mae(tasks[target].items, in_domain.eval, in_domain.params);
            for (std::size_t source = 0; source < num_tasks; ++source) {
                if (source == target) continue;  // diagonal stays exactly zero
                const double transferred =
                    eval_mae(tasks[target].items, in_domain.eval,
                             task_splits[source][s].params);
                delta[source][target] += transferred - baseline;
            }
        }
        for (std::size_t source = 0; source < num_tasks; ++source) {
            delta[source][target] /= static_cast<double>(num_splits);
        }
    }
    return delta;
}

ConfusionReport confusion_report(
    std::span<const LabeledPrediction> predictions) {
    if (predictions.empty()) {
        throw EmptyInput("confusion report requires predictions");
    }
    ConfusionReport report;
    for (const LabeledPrediction& p : predictions) {
        ++report.counts[label_index(p.truth)][label_index(p.predicted)];
        ++report.predicted_histogram[label_index(p.predicted)];
    }
    for (int truth = 0; truth < 3; ++truth) {
        const int row_total = report.counts[truth][0] + report.counts[truth][1] +
                              report.counts[truth][2];
        for (int predicted = 0; predicted < 3; ++predicted) {
            report.row_percent[truth][predicted] =
                row_total == 0
                    ? 0.0
                    : 100.0 * report.counts[truth][predicted] / row_total;
        }
    }
    return report;
}

std::vector<double> calibration_size_sweep(std::span<const EvalItem> items,
                                           const Aggregator& method,
                                           std::span<const int> sizes,
                                           const SplitConfig& split,
                                           const FitConfig& fit) {
    validate_split_config(split);
    if (sizes.empty()) throw EmptyInput("sweep requires at least one size");
    int max_size = 0;
    for (int size : sizes) {
        if (size < 1) throw ValidationError("sweep sizes must be >= 1");
        max_size = std::max(max_size, size);
    }
    if (static_cast<std::size_t>(max_size) + 1 > items.size()) {
        throw InsufficientData(
            "sweep needs max(sizes) + 1 <= item count; got max size " +
            std::to_string(max_size) + " with " +
            std::to_string(items.size()) + " items");
    }

    // One pool of max_size items; its complement is the fixed evaluation
    // set shared by every size.
    auto pool_rng = make_engine(split.seed, "sweep-pool");
    const std::vector<std::size_t> pool = sample_without_replacement(
        pool_rng, items.size(), static_cast<std::size_t>(max_size));
    const std::vector<std::size_t> eval = complement(pool, items.size());

    std::vector<double> means;
    means.reserve(sizes.size());
    for (int size : sizes) {
        const std::uint64_t size_seed =
            derive_seed(split.seed, "sweep-size", static_cast<std::uint64_t>(size));
        const std::uint64_t size_fit_seed =
            derive_seed(fit.seed, "sweep-size", static_cast<std::uint64_t>(size));
        double total = 0.0;
        for (int draw = 0; draw < split.num_splits; ++draw) {
            auto rng = make_engine(size_seed, "draw", static_cast<std::uint64_t>(draw));
            const std::vector<std::size_t> within_pool =
                sample_without_replacement(rng, pool.size(),
                                           static_cast<std::size_t>(size));
            std::vector<std::size_t> subset;
            subset.reserve(within_pool.size());
            for (std::size_t index : within_pool) subset.push_back(pool[index]);

            DavidsonParams fitted;
            const DavidsonParams* params = nullptr;
            if (method.needs_calibration) {
                FitConfig per_draw = fit;
                per_draw.seed = derive_seed(size_fit_seed, "fit",
                                            static_cast<std::uint64_t>(draw));
                fitted = fit_drps(
                             calibration_items(items, subset, method.smoothing),
                             per_draw)
                             .params;
                params = &fitted;
            }
            double abs_total = 0.0;
            for (std::size_t index : eval) {
                abs_total += absolute_error(method.predict(items[index], params),
                                            items[index].truth);
            }
            total += abs_total / static_cast<double>(eval.size());
        }
        means.push_back(total / static_cast<double>(split.num_splits));
    }
    return means;
}

OrderBalanceReport order_balance_report(
    std::span<const EvalItem> items,
    const std::function<Verdict(const VoteCounts&)>& aggregate) {
    if (items.empty()) throw EmptyInput("order balance requires items");

    auto tally_votes = [](std::span<const Verdict> labels) {
        VoteCounts counts;
        for (Verdict label : labels) {
            switch (label) {
                case Verdict::Plus: ++counts.plus; break;
                case Verdict::Minus: ++counts.minus; break;
                case Verdict::Tie: ++counts.tie; break;
            }
        }
        return counts;
    };

    double first_total = 0.0, second_total = 0.0, balanced_total = 0.0;
    for (const EvalItem& item : items) {
        std::vector<Verdict> first_order, second_order;
        for (const CanonicalVote& vote : item.votes) {
            (vote.order == PresentationOrder::AB ? first_order : second_order)
                .push_back(vote.label);
        }
        if (first_order.empty() || second_order.empty()) {
            throw MissingOrder("item '" + item.item_id +
                               "' lacks votes under order " +
                               (first_order.empty() ? "AB" : "BA"));
        }
        // Equal budget m for all three strategies; the balanced mix splits
        // it ceil/floor across the two orders.
        const std::size_t budget =
            std::min(first_order.size(), second_order.size());
        const std::size_t balanced_first = (budget + 1) / 2;

        std::vector<Verdict> balanced(first_order.begin(),
                                      first_order.begin() + balanced_first);
        balanced.insert(balanced.end(), second_order.begin(),
                        second_order.begin() + (budget - balanced_first));

        const Verdict first_verdict = aggregate(
            tally_votes({first_order.data(), budget}));
        const Verdict second_verdict = aggregate(
            tally_votes({second_order.data(), budget}));
        const Verdict balanced_verdict = aggregate(tally_votes(balanced));

        first_total += absolute_error(first_verdict, item.truth);
        second_total += absolute_error(second_verdict, item.truth);
        balanced_total += absolute_error(balanced_verdict, item.truth);
    }
    const double n = static_cast<double>(items.size());
    return {first_total / n, second_total / n, balanced_total / n};
}

}  // namespace judgecal
