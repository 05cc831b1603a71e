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

#include <span>

#include "judgecal/types.hpp"

namespace judgecal {

// One canonicalized vote with the judge's self-reported confidence in [0, 1].
struct ConfidentVote {
    Verdict label = Verdict::Tie;
    double confidence = 0.0;
};

enum class SoftReducer { Minimum, Mean, Product };

// Plurality over counts. The strictly largest count wins; any tie for the
// maximum resolves to Tie (this covers both "tie label among the leaders"
// and the symmetric plus/minus deadlock).
Verdict majority_vote(const VoteCounts& counts);

// Self-consistency aggregation over confidence scores: reduce the
// confidences of each label group with the chosen reducer (empty groups
// score -infinity) and return the label with the largest reduced score.
// Exact score ties fall back to the majority rule over the tied labels'
// vote counts, so with all confidences equal the mean reducer returns
// exactly majority_vote of the labels.
Verdict soft_sc(std::span<const ConfidentVote> votes,
                SoftReducer reducer = SoftReducer::Mean);

// Confidence-weighted majority: sums confidences per label and returns the
// argmax; exact sum ties fall back to the majority rule over the tied
// labels' vote counts. With all confidences equal to any positive constant
// this is exactly majority_vote.
Verdict ci_sc(std::span<const ConfidentVote> votes);

// Median of exactly two verdicts with half-integers rounded away from zero:
// (Tie, Plus) -> Plus, (Tie, Minus) -> Minus, (Minus, Plus) -> Tie.
Verdict rounded_median(Verdict first, Verdict second);

}  // namespace judgecal
