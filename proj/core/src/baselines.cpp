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

#include "judgecal/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "judgecal/errors.hpp"

namespace judgecal {
namespace {

// Index into per-label arrays: 0 = Minus, 1 = Tie, 2 = Plus.
int label_index(Verdict v) { return verdict_value(v) + 1; }

// Strictly largest score wins; any tie for the maximum resolves to Tie.
Verdict argmax_or_tie(const std::array<double, 3>& scores) {
    if (scores[2] > scores[1] && scores[2] > scores[0]) return Verdict::Plus;
    if (scores[0] > scores[1] && scores[0] > scores[2]) return Verdict::Minus;
    return Verdict::Tie;
}

// Largest score wins outright; exact score ties fall back to the majority
// rule over the vote counts of the tied labels only. This is what makes
// all-equal confidences reproduce plain majority voting bit for bit.
Verdict argmax_with_count_fallback(const std::array<double, 3>& scores,
                                   const std::array<int, 3>& counts) {
    const double best = std::max({scores[0], scores[1], scores[2]});
    VoteCounts masked{};
    if (scores[0] == best) masked.minus = counts[0];
    if (scores[1] == best) masked.tie = counts[1];
    if (scores[2] == best) masked.plus = counts[2];
    return majority_vote(masked);
}

void validate_confidences(std::span<const ConfidentVote> votes) {
    if (votes.empty()) {
        throw EmptyInput("aggregation requires at least one vote");
    }
    for (const ConfidentVote& vote : votes) {
        if (!std::isfinite(vote.confidence) || vote.confidence < 0.0 ||
            vote.confidence > 1.0) {
            throw ValidationError("confidence must lie in [0, 1]");
        }
    }
}

}  // namespace

Verdict majority_vote(const VoteCounts& counts) {
    counts.validate();
    return argmax_or_tie({static_cast<double>(counts.minus),
                          static_cast<double>(counts.tie),
                          static_cast<double>(counts.plus)});
}

Verdict soft_sc(std::span<const ConfidentVote> votes, SoftReducer reducer) {
    validate_confidences(votes);
    constexpr double absent = -std::numeric_limits<double>::infinity();
    std::array<double, 3> reduced{absent, absent, absent};
    std::array<double, 3> sums{};
    std::array<int, 3> counts{};
    for (const ConfidentVote& vote : votes) {
        const int i = label_index(vote.label);
        switch (reducer) {
            case SoftReducer::Minimum:
                reduced[i] = counts[i] == 0
                                 ? vote.confidence
                                 : std::min(reduced[i], vote.confidence);
                break;
            case SoftReducer::Mean:
                sums[i] += vote.confidence;
                break;
            case SoftReducer::Product:
                reduced[i] = counts[i] == 0 ? vote.confidence
                                            : reduced[i] * vote.confidence;
                break;
        }
        ++counts[i];
    }
    if (reducer == SoftReducer::Mean) {
        for (int i = 0; i < 3; ++i) {
            if (counts[i] > 0) reduced[i] = sums[i] / counts[i];
        }
    }
    return argmax_with_count_fallback(reduced, counts);
}

Verdict ci_sc(std::span<const ConfidentVote> votes) {
    validate_confidences(votes);
    std::array<double, 3> sums{};
    std::array<int, 3> counts{};
    for (const ConfidentVote& vote : votes) {
        sums[label_index(vote.label)] += vote.confidence;
        ++counts[label_index(vote.label)];
    }
    return argmax_with_count_fallback(sums, counts);
}

Verdict rounded_median(Verdict first, Verdict second) {
    // The median of two ordinal labels is their midpoint; half-integers
    // round away from zero, so (Tie, Plus) -> Plus and (Minus, Tie) -> Minus,
    // while (Minus, Plus) stays Tie.
    const int sum = verdict_value(first) + verdict_value(second);
    if (sum > 0) return Verdict::Plus;
    if (sum < 0) return Verdict::Minus;
    return Verdict::Tie;
}

}  // namespace judgecal
