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

#include "judgecal/btd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "judgecal/errors.hpp"

namespace judgecal {

Verdict verdict_from_int(int value) {
    if (value < -1 || value > 1) {
        throw ValidationError("label must be -1, 0, or +1, got " +
                              std::to_string(value));
    }
    return static_cast<Verdict>(value);
}

void VoteCounts::validate() const {
    if (plus < 0 || minus < 0 || tie < 0) {
        throw ValidationError("vote counts must be non-negative");
    }
    if (total() < 1) {
        throw ValidationError("vote counts must cover at least one vote");
    }
}

void Smoothing::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha) || !(kappa > 0.0) ||
        !std::isfinite(kappa)) {
        throw ValidationError("smoothing constants must be positive and finite");
    }
}

FeaturePair compute_features(const VoteCounts& counts,
                             const Smoothing& smoothing) {
    counts.validate();
    smoothing.validate();
    const double n = static_cast<double>(counts.total());
    FeaturePair features;
    features.margin = 0.5 * std::log((counts.plus + smoothing.alpha) /
                                     (counts.minus + smoothing.alpha));
    features.tie_evidence =
        std::log((counts.tie + smoothing.kappa) / (n + smoothing.kappa));
    return features;
}

TernaryDistribution davidson_probs(const FeaturePair& features,
                                   const DavidsonParams& params) {
    if (!(params.nu > 0.0) || !std::isfinite(params.nu)) {
        throw ValidationError("nu must be positive and finite");
    }
    const double u = params.beta * features.margin;
    const double eta = std::log(params.nu) + params.gamma * features.tie_evidence;
    // Softmax over (u, -u, eta) with the max logit subtracted first.
    const double top = std::max({u, -u, eta});
    const double e_plus = std::exp(u - top);
    const double e_minus = std::exp(-u - top);
    const double e_tie = std::exp(eta - top);
    const double z = e_plus + e_minus + e_tie;
    return {e_minus / z, e_tie / z, e_plus / z};
}

MaeRisks mae_risks(const TernaryDistribution& dist) {
    return {dist.p_tie + 2.0 * dist.p_plus,
            dist.p_plus + dist.p_minus,
            2.0 * dist.p_minus + dist.p_tie};
}

Verdict bayes_action(const TernaryDistribution& dist) {
    const MaeRisks risks = mae_risks(dist);
    const double best = std::min({risks.at_minus, risks.at_tie, risks.at_plus});
    if (risks.at_tie <= best) return Verdict::Tie;
    if (risks.at_plus != risks.at_minus) {
        return risks.at_plus < risks.at_minus ? Verdict::Plus : Verdict::Minus;
    }
    if (dist.p_plus != dist.p_minus) {
        return dist.p_plus > dist.p_minus ? Verdict::Plus : Verdict::Minus;
    }
    return Verdict::Plus;
}

double drps(const TernaryDistribution& dist, Verdict truth) {
    const double forecast_minus = dist.p_minus;
    const double forecast_tie = dist.p_minus + dist.p_tie;
    const double outcome_minus = truth == Verdict::Minus ? 1.0 : 0.0;
    const double outcome_tie = truth == Verdict::Plus ? 0.0 : 1.0;
    const double a = forecast_minus - outcome_minus;
    const double b = forecast_tie - outcome_tie;
    return a * a + b * b;
}

}  // namespace judgecal
