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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "judgecal/types.hpp"

namespace judgecal {

// Which response the judge saw first. Votes are recorded as cast; BA votes
// are negated during canonicalization so +1 always means the first response
// of the canonical pair wins.
enum class PresentationOrder { AB, BA };

// One judge vote as it appears on the wire (votes.jsonl, one JSON object
// per line): {"item_id", "order", "label", "confidence"?, "sample_index"}.
struct VoteRecord {
    std::string item_id;
    PresentationOrder order = PresentationOrder::AB;
    Verdict raw_label = Verdict::Tie;  // preference among the pair as shown
    std::optional<double> confidence;  // in [0, 1] when present
    int sample_index = 0;
};

// One gold label line (labels.jsonl): {"item_id", "label", "rater_id"?}.
struct ItemLabel {
    std::string item_id;
    Verdict truth = Verdict::Tie;
    std::optional<std::string> rater_id;
};

// Votes for one item in file order.
struct ItemVotes {
    std::string item_id;
    std::vector<VoteRecord> records;
};

// One output line (predictions.jsonl):
// {"item_id", "label", "p_minus"?, "p_tie"?, "p_plus"?}.
struct Prediction {
    std::string item_id;
    Verdict label = Verdict::Tie;
    std::optional<TernaryDistribution> dist;
};

// Synthetic corpus configuration. Truth labels are drawn from the ternary
// model applied to each item's realized (smoothing 1, 1) count features, so
// the fitted family is exactly the data law.
struct GeneratorConfig {
    DavidsonParams theta_true{};
    int num_items = 0;
    int votes_per_item = 0;
    // Judge vote law per item, Dirichlet over (minus, tie, plus).
    std::array<double, 3> dirichlet_concentration{2.0, 2.0, 2.0};
    // First-position preference in [-1, 1]: added to the canonical p_plus
    // for AB presentations and to p_minus for BA, then clamped and
    // renormalized per vote.
    double order_bias = 0.0;
    std::uint64_t seed = 0;
};

struct SyntheticItem {
    std::string item_id;
    TernaryDistribution truth_dist;  // truth law under theta_true
};

struct SyntheticDataset {
    std::vector<VoteRecord> votes;
    std::vector<ItemLabel> labels;
    std::vector<SyntheticItem> items;
};

// Vote as cast -> canonical verdict: AB keeps the label, BA negates it
// (ties stay ties).
Verdict canonicalize(const VoteRecord& record);

// Canonicalized counts for the records of a single item. Throws EmptyInput
// on an empty span and MixedItems if the records span several item_ids.
VoteCounts tally(std::span<const VoteRecord> records);

// Deterministic given config.seed; each item draws from its own derived
// stream, so items can be generated concurrently with identical results.
// Presentation orders alternate the ceil(n/2) AB / floor(n/2) BA split.
// Each vote's confidence is the probability the judge law assigned to the
// label it cast.
SyntheticDataset generate_synthetic(const GeneratorConfig& config);

// JSONL readers. Lines must be UTF-8 without BOM; unknown fields are
// ignored; malformed lines raise ParseError naming the file and line.
std::vector<ItemVotes> read_votes(const std::string& path);
std::vector<ItemLabel> read_labels(const std::string& path);
std::vector<Prediction> read_predictions(const std::string& path);

// JSONL writers. All writers stage to a temp file in the target directory
// and rename, so readers never observe partial files.
void write_votes(const std::string& path, std::span<const VoteRecord> votes);
void write_labels(const std::string& path, std::span<const ItemLabel> labels);
void write_predictions(const std::string& path,
                       std::span<const Prediction> predictions);
void write_truth_dists(const std::string& path,
                       std::span<const SyntheticItem> items);

// Atomic text write used by all emitters (temp file + rename).
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace judgecal
