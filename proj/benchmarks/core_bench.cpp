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

#include <benchmark/benchmark.h>

#include <vector>

#include "judgecal/btd.hpp"
#include "judgecal/calibrate.hpp"
#include "judgecal/data_io.hpp"
#include "judgecal/metaeval.hpp"
#include "judgecal/rng.hpp"

namespace {

using namespace judgecal;

std::vector<CalibrationItem> make_items(int count, int votes) {
    GeneratorConfig config;
    config.theta_true = {1.0, 2.0, 0.8};
    config.num_items = count;
    config.votes_per_item = votes;
    config.seed = 4242;
    const SyntheticDataset data = generate_synthetic(config);
    std::vector<ItemVotes> grouped;
    for (const VoteRecord& vote : data.votes) {
        if (grouped.empty() || grouped.back().item_id != vote.item_id) {
            grouped.push_back({vote.item_id, {}});
        }
        grouped.back().records.push_back(vote);
    }
    std::vector<CalibrationItem> items;
    for (const EvalItem& item : build_eval_items(grouped, data.labels)) {
        items.push_back({compute_features(item.counts, {}), item.truth});
    }
    return items;
}

void bm_forecast_pipeline(benchmark::State& state) {
    const DavidsonParams params{1.2, 2.5, 0.7};
    const VoteCounts counts{7, 2, 3};
    for (auto _ : state) {
        const FeaturePair features = compute_features(counts, {});
        const TernaryDistribution dist = davidson_probs(features, params);
        benchmark::DoNotOptimize(bayes_action(dist));
    }
}
BENCHMARK(bm_forecast_pipeline);

void bm_drps(benchmark::State& state) {
    const TernaryDistribution dist{0.2, 0.3, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(drps(dist, Verdict::Plus));
    }
}
BENCHMARK(bm_drps);

void bm_objective_with_gradient(benchmark::State& state) {
    const std::vector<CalibrationItem> items =
        make_items(static_cast<int>(state.range(0)), 12);
    const DavidsonParams params{1.1, 1.7, 0.9};
    std::array<double, 3> grad{};
    for (auto _ : state) {
        benchmark::DoNotOptimize(mean_drps_with_gradient(items, params, grad));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_objective_with_gradient)->Arg(100)->Arg(1000)->Arg(10000);

void bm_fit(benchmark::State& state) {
    const std::vector<CalibrationItem> items =
        make_items(static_cast<int>(state.range(0)), 12);
    FitConfig config;
    config.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_drps(items, config));
    }
}
BENCHMARK(bm_fit)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

void bm_grid_oracle(benchmark::State& state) {
    const std::vector<CalibrationItem> items = make_items(200, 12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_oracle(items, ParamBox{}, 9));
    }
}
BENCHMARK(bm_grid_oracle)->Unit(benchmark::kMillisecond);

void bm_generate(benchmark::State& state) {
    GeneratorConfig config;
    config.theta_true = {1.0, 2.0, 0.8};
    config.num_items = static_cast<int>(state.range(0));
    config.votes_per_item = 10;
    config.seed = 11;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_synthetic(config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_generate)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
