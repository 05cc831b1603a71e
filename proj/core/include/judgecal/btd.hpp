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

#include "judgecal/types.hpp"

namespace judgecal {

// Count features for one item:
//   margin       = 0.5 * ln((plus + alpha) / (minus + alpha))
//   tie_evidence = ln((tie + kappa) / (total + kappa))
// Natural logarithms throughout. Swapping plus and minus negates margin and
// leaves tie_evidence unchanged.
FeaturePair compute_features(const VoteCounts& counts,
                             const Smoothing& smoothing = {});

// Win/tie/loss probabilities with logits (u, -u, eta) where
//   u = beta * margin,  eta = ln(nu) + gamma * tie_evidence.
// Computed with the max logit subtracted, so extreme parameters stay finite.
TernaryDistribution davidson_probs(const FeaturePair& features,
                                   const DavidsonParams& params);

// Expected absolute error of each fixed action under dist:
//   at_minus = p_tie + 2 p_plus
//   at_tie   = p_plus + p_minus
//   at_plus  = 2 p_minus + p_tie
MaeRisks mae_risks(const TernaryDistribution& dist);

// Minimum-risk action under dist. Exact risk ties prefer Tie, then the
// label with more probability mass, then Plus. Equivalently: returns Tie
// exactly when |p_plus - p_minus| <= p_tie.
Verdict bayes_action(const TernaryDistribution& dist);

// Discrete ranked probability score: squared cumulative error of the
// forecast against the outcome, summed over the two thresholds. Lower is
// better; the range is [0, 2] and the expected score under an outcome law q
// is uniquely minimized at dist = q.
double drps(const TernaryDistribution& dist, Verdict truth);

}  // namespace judgecal
