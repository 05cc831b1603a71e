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

#include <cmath>
#include <cstdlib>

namespace judgecal {

// Three-way preference verdict: +1 first response wins, -1 second response
// wins, 0 tie. The integer values carry the ordinal structure used by the
// error metrics, so |a - b| is the natural distance between verdicts.
enum class Verdict : int { Minus = -1, Tie = 0, Plus = 1 };

constexpr int verdict_value(Verdict v) { return static_cast<int>(v); }

constexpr Verdict negate(Verdict v) {
    return static_cast<Verdict>(-static_cast<int>(v));
}

// Throws ValidationError unless value is -1, 0, or +1.
Verdict verdict_from_int(int value);

inline double absolute_error(Verdict predicted, Verdict truth) {
    return std::abs(verdict_value(predicted) - verdict_value(truth));
}

// Canonicalized tallies for one item. plus counts votes for the first
// response, minus for the second, tie for neither.
struct VoteCounts {
    int plus = 0;
    int minus = 0;
    int tie = 0;

    int total() const { return plus + minus + tie; }
    // Throws ValidationError unless all counts are >= 0 and total >= 1.
    void validate() const;
};

// Additive smoothing for the count features; both values must be > 0.
struct Smoothing {
    double alpha = 1.0;  // margin smoothing
    double kappa = 1.0;  // tie smoothing
    void validate() const;
};

// Per-item evidence summary feeding the ternary model.
struct FeaturePair {
    double margin = 0.0;        // smoothed log-odds of plus vs minus votes
    double tie_evidence = 0.0;  // log smoothed tie fraction, always <= 0
};

// Parameters of the ternary win/tie/loss model. nu enters through log(nu)
// as the tie logit offset, so it must stay positive.
struct DavidsonParams {
    double beta = 1.0;   // margin sensitivity, >= 0
    double nu = 1.0;     // baseline tie propensity, > 0
    double gamma = 1.0;  // tie-evidence sensitivity
};

// Probability forecast over (minus, tie, plus); components sum to one.
struct TernaryDistribution {
    double p_minus = 0.0;
    double p_tie = 0.0;
    double p_plus = 0.0;
};

// Expected absolute error of each action under a forecast.
struct MaeRisks {
    double at_minus = 0.0;
    double at_tie = 0.0;
    double at_plus = 0.0;
};

}  // namespace judgecal
