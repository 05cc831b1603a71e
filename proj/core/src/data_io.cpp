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

#include "judgecal/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "judgecal/btd.hpp"
#include "judgecal/errors.hpp"
#include "judgecal/rng.hpp"

namespace judgecal {
namespace {

using nlohmann::json;

std::string location(const std::string& path, int line) {
    return path + ":" + std::to_string(line);
}

bool blank(std::string_view line) {
    return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

json parse_line(const std::string& path, int line_no, const std::string& line) {
    json parsed = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw ParseError(location(path, line_no) + ": not a JSON object");
    }
    return parsed;
}

std::string require_string(const json& object, const char* key,
                           const std::string& path, int line_no) {
    const auto it = object.find(key);
    if (it == object.end() || !it->is_string()) {
        throw ParseError(location(path, line_no) + ": missing string field '" +
                         key + "'");
    }
    return it->get<std::string>();
}

Verdict require_label(const json& object, const std::string& path,
                      int line_no) {
    const auto it = object.find("label");
    if (it == object.end() || !it->is_number_integer()) {
        throw ParseError(location(path, line_no) +
                         ": missing integer field 'label'");
    }
    const auto value = it->get<long long>();
    if (value < -1 || value > 1) {
        throw ParseError(location(path, line_no) + ": label must be -1, 0, or "
                         "+1, got " + std::to_string(value));
    }
    return static_cast<Verdict>(value);
}

// Walks a stream line by line, invoking consume(line_no, object) for every
// non-blank line.
template <typename Consumer>
void for_each_line(const std::string& path, Consumer&& consume) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path + "' for reading");
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        consume(line_no, parse_line(path, line_no, line));
    }
}

}  // namespace

Verdict canonicalize(const VoteRecord& record) {
    return record.order == PresentationOrder::AB ? record.raw_label
                                                 : negate(record.raw_label);
}

VoteCounts tally(std::span<const VoteRecord> records) {
    if (records.empty()) {
        throw EmptyInput("tally requires at least one vote record");
    }
    const std::string& item_id = records.front().item_id;
    VoteCounts counts;
    for (const VoteRecord& record : records) {
        if (record.item_id != item_id) {
            throw MixedItems("tally received records for '" + item_id +
                             "' and '" + record.item_id + "'");
        }
        switch (canonicalize(record)) {
            case Verdict::Plus: ++counts.plus; break;
            case Verdict::Minus: ++counts.minus; break;
            case Verdict::Tie: ++counts.tie; break;
        }
    }
    return counts;
}

SyntheticDataset generate_synthetic(const GeneratorConfig& config) {
    if (config.num_items < 1) {
        throw ValidationError("generator needs num_items >= 1");
    }
    if (config.votes_per_item < 1) {
        throw ValidationError("generator needs votes_per_item >= 1");
    }
    for (double c : config.dirichlet_concentration) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw ValidationError("Dirichlet concentrations must be positive");
        }
    }
    if (!(std::abs(config.order_bias) <= 1.0)) {
        throw ValidationError("order_bias must lie in [-1, 1]");
    }
    if (!(config.theta_true.nu > 0.0) || !(config.theta_true.beta >= 0.0)) {
        throw ValidationError("theta_true needs nu > 0 and beta >= 0");
    }

    const Smoothing smoothing{};  // the generator fixes alpha = kappa = 1
    const int ab_count = (config.votes_per_item + 1) / 2;

    SyntheticDataset out;
    out.votes.reserve(static_cast<std::size_t>(config.num_items) *
                      config.votes_per_item);
    out.labels.reserve(config.num_items);
    out.items.reserve(config.num_items);

    for (int i = 0; i < config.num_items; ++i) {
        auto rng = make_engine(config.seed, "item", static_cast<std::uint64_t>(i));
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "item-%06d", i);
        const std::string item_id = buffer;

        const std::array<double, 3> judge_law =
            dirichlet3(rng, config.dirichlet_concentration);

        VoteCounts counts;
        for (int j = 0; j < config.votes_per_item; ++j) {
            const PresentationOrder order =
                j < ab_count ? PresentationOrder::AB : PresentationOrder::BA;
            // First-position preference: the first-presented response gains
            // order_bias of win probability in canonical coordinates.
            const double shift = order == PresentationOrder::AB
                                     ? config.order_bias
                                     : -config.order_bias;
            std::array<double, 3> law = {std::max(0.0, judge_law[0] - shift),
                                         judge_law[1],
                                         std::max(0.0, judge_law[2] + shift)};
            const double mass = law[0] + law[1] + law[2];
            law = {law[0] / mass, law[1] / mass, law[2] / mass};

            const int drawn = categorical3(rng, law);
            const Verdict canonical = static_cast<Verdict>(drawn - 1);
            const Verdict raw = order == PresentationOrder::AB
                                    ? canonical
                                    : negate(canonical);
            out.votes.push_back({item_id, order, raw, law[drawn], j});
            switch (canonical) {
                case Verdict::Plus: ++counts.plus; break;
                case Verdict::Minus: ++counts.minus; break;
                case Verdict::Tie: ++counts.tie; break;
            }
        }

        const FeaturePair features = compute_features(counts, smoothing);
        const TernaryDistribution truth_dist =
            davidson_probs(features, config.theta_true);
        const int drawn = categorical3(
            rng, {truth_dist.p_minus, truth_dist.p_tie, truth_dist.p_plus});
        out.labels.push_back(
            {item_id, static_cast<Verdict>(drawn - 1), std::nullopt});
        out.items.push_back({item_id, truth_dist});
    }
    return out;
}

std::vector<ItemVotes> read_votes(const std::string& path) {
    std::vector<ItemVotes> groups;
    std::unordered_map<std::string, std::size_t> group_index;
    for_each_line(path, [&](int line_no, const json& object) {
        VoteRecord record;
        record.item_id = require_string(object, "item_id", path, line_no);

        const std::string order = require_string(object, "order", path, line_no);
        if (order == "AB") {
            record.order = PresentationOrder::AB;
        } else if (order == "BA") {
            record.order = PresentationOrder::BA;
        } else {
            throw ParseError(location(path, line_no) +
                             ": order must be \"AB\" or \"BA\", got \"" +
                             order + "\"");
        }

        record.raw_label = require_label(object, path, line_no);

        if (const auto it = object.find("confidence"); it != object.end()) {
            if (!it->is_number()) {
                throw ParseError(location(path, line_no) +
                                 ": confidence must be a number");
            }
            const double confidence = it->get<double>();
            if (!std::isfinite(confidence) || confidence < 0.0 ||
                confidence > 1.0) {
                throw ParseError(location(path, line_no) +
                                 ": confidence must lie in [0, 1]");
            }
            record.confidence = confidence;
        }

        auto [slot, inserted] =
            group_index.try_emplace(record.item_id, groups.size());
        if (inserted) groups.push_back({record.item_id, {}});
        ItemVotes& group = groups[slot->second];

        if (const auto it = object.find("sample_index"); it != object.end()) {
            if (!it->is_number_integer() || it->get<long long>() < 0) {
                throw ParseError(location(path, line_no) +
                                 ": sample_index must be a non-negative integer");
            }
            record.sample_index = static_cast<int>(it->get<long long>());
        } else {
            record.sample_index = static_cast<int>(group.records.size());
        }
        group.records.push_back(std::move(record));
    });
    return groups;
}

std::vector<ItemLabel> read_labels(const std::string& path) {
    std::vector<ItemLabel> labels;
    std::unordered_set<std::string> seen;
    for_each_line(path, [&](int line_no, const json& object) {
        ItemLabel label;
        label.item_id = require_string(object, "item_id", path, line_no);
        label.truth = require_label(object, path, line_no);
        if (const auto it = object.find("rater_id"); it != object.end()) {
            if (!it->is_string()) {
                throw ParseError(location(path, line_no) +
                                 ": rater_id must be a string");
            }
            label.rater_id = it->get<std::string>();
        }
        // One gold label per (item, rater); unattributed rows count as one
        // shared rater.
        const std::string key =
            label.item_id + '\x1f' + label.rater_id.value_or("");
        if (!seen.insert(key).second) {
            throw DuplicateLabel(location(path, line_no) +
                                 ": duplicate label for item '" +
                                 label.item_id + "'" +
                                 (label.rater_id ? " from rater '" +
                                                       *label.rater_id + "'"
                                                 : ""));
        }
        labels.push_back(std::move(label));
    });
    return labels;
}

std::vector<Prediction> read_predictions(const std::string& path) {
    std::vector<Prediction> predictions;
    for_each_line(path, [&](int line_no, const json& object) {
        Prediction prediction;
        prediction.item_id = require_string(object, "item_id", path, line_no);
        prediction.label = require_label(object, path, line_no);
        const auto p_minus = object.find("p_minus");
        const auto p_tie = object.find("p_tie");
        const auto p_plus = object.find("p_plus");
        if (p_minus != object.end() && p_tie != object.end() &&
            p_plus != object.end()) {
            if (!p_minus->is_number() || !p_tie->is_number() ||
                !p_plus->is_number()) {
                throw ParseError(location(path, line_no) +
                                 ": probabilities must be numbers");
            }
            prediction.dist = TernaryDistribution{p_minus->get<double>(),
                                                  p_tie->get<double>(),
                                                  p_plus->get<double>()};
        }
        predictions.push_back(std::move(prediction));
    });
    return predictions;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    const fs::path temp = target.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ValidationError("cannot open '" + temp.string() +
                                  "' for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw ValidationError("failed writing '" + temp.string() + "'");
        }
    }
    fs::rename(temp, target);
}

void write_votes(const std::string& path, std::span<const VoteRecord> votes) {
    std::ostringstream out;
    for (const VoteRecord& vote : votes) {
        json object = {
            {"item_id", vote.item_id},
            {"order", vote.order == PresentationOrder::AB ? "AB" : "BA"},
            {"label", verdict_value(vote.raw_label)},
            {"sample_index", vote.sample_index},
        };
        if (vote.confidence) object["confidence"] = *vote.confidence;
        out << object.dump() << '\n';
    }
    write_text_atomic(path, out.str());
}

void write_labels(const std::string& path, std::span<const ItemLabel> labels) {
    std::ostringstream out;
    for (const ItemLabel& label : labels) {
        json object = {
            {"item_id", label.item_id},
            {"label", verdict_value(label.truth)},
        };
        if (label.rater_id) object["rater_id"] = *label.rater_id;
        out << object.dump() << '\n';
    }
    write_text_atomic(path, out.str());
}

void write_predictions(const std::string& path,
                       std::span<const Prediction> predictions) {
    std::ostringstream out;
    for (const Prediction& prediction : predictions) {
        json object = {
            {"item_id", prediction.item_id},
            {"label", verdict_value(prediction.label)},
        };
        if (prediction.dist) {
            object["p_minus"] = prediction.dist->p_minus;
            object["p_tie"] = prediction.dist->p_tie;
            object["p_plus"] = prediction.dist->p_plus;
        }
        out << object.dump() << '\n';
    }
    write_text_atomic(path, out.str());
}

void write_truth_dists(const std::string& path,
                       std::span<const SyntheticItem> items) {
    std::ostringstream out;
    for (const SyntheticItem& item : items) {
        const json object = {
            {"item_id", item.item_id},
            {"p_minus", item.truth_dist.p_minus},
            {"p_tie", item.truth_dist.p_tie},
            {"p_plus", item.truth_dist.p_plus},
        };
        out << object.dump() << '\n';
    }
    write_text_atomic(path, out.str());
}

}  // namespace judgecal
