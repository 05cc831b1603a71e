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

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "judgecal/baselines.hpp"
#include "judgecal/calibrate.hpp"
#include "judgecal/data_io.hpp"

namespace judgecal {

struct LabeledPrediction {
    std::string item_id;
    Verdict predicted = Verdict::Tie;
    Verdict truth = Verdict::Tie;
};

// Mean |predicted - truth| over items; in [0, 2]. Zero iff
// pairwise_accuracy is one.
double mae(std::span<const LabeledPrediction> predictions);

// Fraction of exact verdict matches; in [0, 1].
double pairwise_accuracy(std::span<const LabeledPrediction> predictions);

struct SplitConfig {
    double calibration_ratio = 0.05;  // in (0, 1); resulting size must be >= 1
    int num_splits = 100;
    std::uint64_t seed = 0;
};

struct SignificanceConfig {
    int resamples_per_split = 100;
    double tau = 0.05;  // cluster admission threshold
    std::uint64_t seed = 0;
};

// One canonicalized vote kept with the bookkeeping the baselines need.
struct CanonicalVote {
    Verdict label = Verdict::Tie;
    PresentationOrder order = PresentationOrder::AB;
    std::optional<double> confidence;
};

// One evaluation item: votes joined with its gold verdict.
struct EvalItem {
    std::string item_id;
    std::vector<CanonicalVote> votes;
    VoteCounts counts;
    Verdict truth = Verdict::Tie;
};

// Joins grouped votes with gold labels. Every voted item needs exactly one
// gold label; labels without votes are ignored.
std::vector<EvalItem> build_eval_items(std::span<const ItemVotes> votes,
                                       std::span<const ItemLabel> labels);

// A method binding for the evaluation harness. Calibrated methods receive
// the parameters fitted on the current calibration split (fitted on count
// features built with the binding's smoothing); others get nullptr.
struct Aggregator {
    std::string id;
    bool needs_calibration = false;
    Smoothing smoothing{};
    std::function<Verdict(const EvalItem&, const DavidsonParams*)> predict;
};

Aggregator make_btd_aggregator(const Smoothing& smoothing = {});
Aggregator make_sc_aggregator();
Aggregator make_soft_sc_aggregator(SoftReducer reducer = SoftReducer::Mean);
Aggregator make_ci_sc_aggregator();
// Requires exactly two votes per item.
Aggregator make_median_aggregator();

// Outcome of the repeated-split protocol. Indices address the items span
// passed to run_splits; predictions[m][s][k] is method m's verdict on item
// eval_indices[s][k] in split s.
struct SplitsResult {
    std::vector<std::string> method_ids;
    std::vector<std::vector<std::size_t>> calibration_indices;  // [split]
    std::vector<std::vector<std::size_t>> eval_indices;         // [split]
    std::vector<std::vector<std::vector<Verdict>>> predictions; // [method][split]
    std::vector<std::vector<double>> mae_per_split;             // [method][split]
    std::vector<std::vector<double>> pa_per_split;              // [method][split]
};

// For each split: draw the calibration subset without replacement at
// split.calibration_ratio, fit calibrated methods on it, and score every
// method on the complement. Fit seeds derive from (fit.seed, split index)
// and subset draws from (split.seed, split index) only, so scores do not
// depend on the order methods are listed in.
SplitsResult run_splits(std::span<const EvalItem> items,
                        const std::vector<Aggregator>& methods,
                        const SplitConfig& split, const FitConfig& fit);

// Per-split per-item losses for method_index, aligned with eval_indices.
std::vector<std::vector<double>> per_split_abs_losses(
    const SplitsResult& result, std::span<const EvalItem> items,
    std::size_t method_index);
std::vector<std::vector<double>> per_split_mismatch_losses(
    const SplitsResult& result, std::span<const EvalItem> items,
    std::size_t method_index);

// Paired sign-flip permutation test on aligned per-item losses. The
// statistic is the mean difference; the p-value is
// (1 + #{resamples with |stat| >= |observed|}) / (1 + resamples), so it is
// always in (0, 1] and symmetric in the two arguments for a fixed seed.
double paired_permutation_test(std::span<const double> losses_a,
                               std::span<const double> losses_b,
                               const SignificanceConfig& config);

// Multi-split variant: resamples each split's difference vector
// config.resamples_per_split times, pools all resampled statistics into one
// null distribution, and compares against the pooled observed mean
// difference.
double pooled_permutation_test(const std::vector<std::vector<double>>& losses_a,
                               const std::vector<std::vector<double>>& losses_b,
                               const SignificanceConfig& config);

struct RankedMethod {
    std::string method_id;
    double mean_score = 0.0;
    int rank = 0;
    bool in_top_cluster = false;
};

// Greedy top-cluster construction: sort by mean score (best first), seed the
// cluster with the best method, and keep admitting the next-best method
// while it is not significantly different (p >= tau) from every method
// already admitted; stop at the first rejection. Cluster members share rank
// 1; the rest keep their 1-based sorted position. p_values rows/columns are
// indexed like ids.
std::vector<RankedMethod> rank_methods(
    const std::vector<std::string>& ids, const std::vector<double>& means,
    const std::vector<std::vector<double>>& p_values, double tau,
    bool lower_is_better);

// Just the cluster member ids, best mean first.
std::vector<std::string> top_cluster(
    const std::vector<std::pair<std::string, double>>& method_means,
    const std::vector<std::vector<double>>& p_values, double tau,
    bool lower_is_better = true);

// Complete items-by-raters label matrix.
struct RatingsMatrix {
    std::vector<std::string> item_ids;
    std::vector<std::string> rater_ids;
    std::vector<std::vector<Verdict>> ratings;  // [item][rater]
};

// Builds the matrix from per-rater label lines. Every line needs a
// rater_id, every (item, rater) pair must appear exactly once, and the
// matrix must be complete.
RatingsMatrix build_ratings_matrix(std::span<const ItemLabel> labels);

struct RaterComparison {
    std::string rater_id;
    double human_pa = 0.0;
    double system_pa = 0.0;
    bool win = false;  // system strictly beats the held-out rater
};

// For each rater: ground truth is the majority verdict of the remaining
// raters (ties resolve to Tie); compares that rater's agreement against the
// system's on the same ground truth. Needs >= 3 raters. system_predictions
// aligns with ratings.item_ids.
std::vector<RaterComparison> leave_one_out(
    const RatingsMatrix& ratings, std::span<const Verdict> system_predictions);

struct TransferTask {
    std::string name;
    std::vector<EvalItem> items;
};

// delta[source][target]: mean over splits of (MAE on target's evaluation
// split using parameters fitted on source's calibration split) minus
// (target's in-domain MAE on the same split). The diagonal is exactly zero.
std::vector<std::vector<double>> transfer_matrix(
    const std::vector<TransferTask>& tasks, const SplitConfig& split,
    const FitConfig& fit, const Smoothing& smoothing = {});

// Confusion over verdicts; index 0 is Minus, 1 Tie, 2 Plus.
struct ConfusionReport {
    std::array<std::array<int, 3>, 3> counts{};         // [truth][predicted]
    std::array<std::array<double, 3>, 3> row_percent{}; // rows sum to 100
    std::array<int, 3> predicted_histogram{};
};

ConfusionReport confusion_report(std::span<const LabeledPrediction> predictions);

// Mean MAE per requested calibration size. A pool of max(sizes) items is
// drawn once from split.seed; the complement is the fixed evaluation set
// shared by every size. Each size then redraws split.num_splits calibration
// subsets from the pool.
std::vector<double> calibration_size_sweep(std::span<const EvalItem> items,
                                           const Aggregator& method,
                                           std::span<const int> sizes,
                                           const SplitConfig& split,
                                           const FitConfig& fit);

struct OrderBalanceReport {
    double first_only_mae = 0.0;
    double second_only_mae = 0.0;
    double balanced_mae = 0.0;
};

// Compares aggregation over AB votes only, BA votes only, and the balanced
// half/half mix, all on the same per-item vote budget m = min(#AB, #BA)
// (the balanced mix takes ceil(m/2) AB and floor(m/2) BA votes). Every item
// needs votes under both orders.
OrderBalanceReport order_balance_report(
    std::span<const EvalItem> items,
    const std::function<Verdict(const VoteCounts&)>& aggregate);

}  // namespace judgecal
