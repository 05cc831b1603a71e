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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "judgecal/btd.hpp"
#include "judgecal/errors.hpp"
#include "judgecal/types.hpp"

using namespace judgecal;

namespace {
bool near(double a, double b, double tol = 1e-9) {
    return std::abs(a - b) <= tol;
}
}  // namespace

TEST_CASE("features: hand-computed values at default smoothing") {
    const FeaturePair f = compute_features({3, 1, 0});
    CHECK(near(f.margin, 0.5 * std::log(2.0)));
    CHECK(near(f.tie_evidence, std::log(0.2)));
}

TEST_CASE("features: all-tie counts give the zero feature pair") {
    for (int n : {1, 4, 9}) {
        const FeaturePair f = compute_features({0, 0, n}, {2.5, 0.7});
        CHECK(f.margin == 0.0);
        CHECK(near(f.tie_evidence, 0.0, 1e-15));
    }
}

TEST_CASE("features: swapping plus and minus negates the margin only") {
    const FeaturePair a = compute_features({5, 2, 3});
    const FeaturePair b = compute_features({2, 5, 3});
    CHECK(a.margin == -b.margin);
    CHECK(a.tie_evidence == b.tie_evidence);
}

TEST_CASE("features: tie evidence never positive") {
    for (int plus = 0; plus <= 6; ++plus) {
        for (int minus = 0; minus <= 6; ++minus) {
            for (int tie = 0; tie <= 6; ++tie) {
                if (plus + minus + tie == 0) continue;
                CHECK(compute_features({plus, minus, tie}).tie_evidence <=
                      0.0);
            }
        }
    }
}

TEST_CASE("features: count and smoothing validation") {
    CHECK_THROWS_AS(compute_features({-1, 0, 2}), ValidationError);
    CHECK_THROWS_AS(compute_features({0, 0, 0}), ValidationError);
    CHECK_THROWS_AS(compute_features({1, 1, 1}, {0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(compute_features({1, 1, 1}, {1.0, -2.0}),
                    ValidationError);
}

TEST_CASE("davidson: both logits zero gives the uniform distribution") {
    const TernaryDistribution d =
        davidson_probs({0.0, 0.0}, {3.7, 1.0, 2.2});
    CHECK(near(d.p_minus, 1.0 / 3));
    CHECK(near(d.p_tie, 1.0 / 3));
    CHECK(near(d.p_plus, 1.0 / 3));
}

TEST_CASE("davidson: u=ln2 with zero tie logit") {
    // Z = 2 + 1/2 + 1 = 3.5.
    const TernaryDistribution d =
        davidson_probs({std::log(2.0), 0.0}, {1.0, 1.0, 0.0});
    CHECK(near(d.p_plus, 4.0 / 7));
    CHECK(near(d.p_minus, 1.0 / 7));
    CHECK(near(d.p_tie, 2.0 / 7));
}

TEST_CASE("davidson: negating the margin swaps the directional masses") {
    const DavidsonParams params{1.7, 2.0, 0.4};
    const TernaryDistribution a = davidson_probs({0.83, -0.2}, params);
    const TernaryDistribution b = davidson_probs({-0.83, -0.2}, params);
    CHECK(near(a.p_plus, b.p_minus, 1e-15));
    CHECK(near(a.p_minus, b.p_plus, 1e-15));
    CHECK(near(a.p_tie, b.p_tie, 1e-15));
}

TEST_CASE("davidson: normalized and stable across extreme logits") {
    for (double beta : {1e-3, 1.0, 5.0}) {
        for (double nu : {1e-4, 1.0, 1e3}) {
            for (double gamma : {-10.0, 0.0, 10.0}) {
                for (double s : {-4.0, 0.0, 4.0}) {
                    for (double t : {-8.0, -1.0, 0.0}) {
                        const TernaryDistribution d =
                            davidson_probs({s, t}, {beta, nu, gamma});
                        CHECK(d.p_minus >= 0.0);
                        CHECK(d.p_tie >= 0.0);
                        CHECK(d.p_plus >= 0.0);
                        CHECK(d.p_minus <= 1.0);
                        CHECK(d.p_tie <= 1.0);
                        CHECK(d.p_plus <= 1.0);
                        CHECK(near(d.p_minus + d.p_tie + d.p_plus, 1.0,
                                   1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("davidson: more tie votes never shrink the tie mass") {
    const DavidsonParams params{1.0, 2.0, 1.5};
    double previous = -1.0;
    for (int tie = 0; tie <= 20; ++tie) {
        // Fixed margin, growing tie evidence toward zero.
        const double t = std::log((tie + 1.0) / 21.0);
        const double p_tie = davidson_probs({0.4, t}, params).p_tie;
        CHECK(p_tie >= previous);
        previous = p_tie;
    }
}

TEST_CASE("davidson: rejects a non-positive tie propensity") {
    CHECK_THROWS_AS(davidson_probs({0.0, 0.0}, {1.0, 0.0, 1.0}),
                    ValidationError);
    CHECK_THROWS_AS(davidson_probs({0.0, 0.0}, {1.0, -2.0, 1.0}),
                    ValidationError);
}

TEST_CASE("risks: uniform forecast gives exactly (1, 2/3, 1)") {
    const MaeRisks r = mae_risks({1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(r.at_minus == 1.0);
    CHECK(r.at_tie == 2.0 / 3.0);
    CHECK(r.at_plus == 1.0);
}

TEST_CASE("risks: plus-heavy forecast") {
    const MaeRisks r = mae_risks({0.0, 0.2, 0.8});
    CHECK(near(r.at_minus, 1.8));
    CHECK(near(r.at_tie, 0.8));
    CHECK(near(r.at_plus, 0.2));
}

TEST_CASE("risks: certain tie") {
    const MaeRisks r = mae_risks({0.0, 1.0, 0.0});
    CHECK(r.at_minus == 1.0);
    CHECK(r.at_tie == 0.0);
    CHECK(r.at_plus == 1.0);
}

TEST_CASE("action: uniform forecast prefers the tie") {
    CHECK(bayes_action({1.0 / 3, 1.0 / 3, 1.0 / 3}) == Verdict::Tie);
}

TEST_CASE("action: plus-heavy forecast picks plus") {
    CHECK(bayes_action({0.0, 0.2, 0.8}) == Verdict::Plus);
}

TEST_CASE("action: exact risk tie on the band boundary resolves to tie") {
    // p_plus - p_minus equals p_tie exactly, so R(0) = R(+1).
    CHECK(bayes_action({0.2, 0.3, 0.5}) == Verdict::Tie);
    CHECK(bayes_action({0.5, 0.3, 0.2}) == Verdict::Tie);
}

TEST_CASE("action: risk tie between the directional labels without a tie "
          "candidate goes to the larger mass") {
    // (0.5, 0, 0.5): risks are (1.5, 1.0, 1.5) -> tie label wins outright.
    CHECK(bayes_action({0.5, 0.0, 0.5}) == Verdict::Tie);
    // Degenerate double tie across all three risks: (1/2, 1/2, 1/2) scaled
    // cannot happen with probabilities; exercise mass tie-break via risks
    // R(-1)=R(+1) < R(0): impossible, so check swap equivariance instead.
    for (double pm : {0.1, 0.3, 0.6}) {
        for (double pt : {0.0, 0.2, 0.3}) {
            const double pp = 1.0 - pm - pt;
            if (pp < 0.0) continue;
            const Verdict forward = bayes_action({pm, pt, pp});
            const Verdict mirrored = bayes_action({pp, pt, pm});
            CHECK(verdict_value(forward) == -verdict_value(mirrored));
        }
    }
}

TEST_CASE("action: agrees with brute-force risk minimization") {
    for (int i = 0; i <= 40; ++i) {
        for (int j = 0; i + j <= 40; ++j) {
            const TernaryDistribution d{i / 40.0, (40 - i - j) / 40.0,
                                        j / 40.0};
            const MaeRisks r = mae_risks(d);
            const double best =
                std::min(r.at_minus, std::min(r.at_tie, r.at_plus));
            const Verdict action = bayes_action(d);
            const double chosen = action == Verdict::Minus  ? r.at_minus
                                  : action == Verdict::Tie ? r.at_tie
                                                            : r.at_plus;
            CHECK(chosen == best);
        }
    }
}

TEST_CASE("drps: point mass on the truth scores zero") {
    CHECK(drps({1.0, 0.0, 0.0}, Verdict::Minus) == 0.0);
    CHECK(drps({0.0, 1.0, 0.0}, Verdict::Tie) == 0.0);
    CHECK(drps({0.0, 0.0, 1.0}, Verdict::Plus) == 0.0);
}

TEST_CASE("drps: uniform forecast against each truth") {
    const TernaryDistribution uniform{1.0 / 3, 1.0 / 3, 1.0 / 3};
    CHECK(near(drps(uniform, Verdict::Minus), 5.0 / 9));
    CHECK(near(drps(uniform, Verdict::Tie), 2.0 / 9));
    CHECK(near(drps(uniform, Verdict::Plus), 5.0 / 9));
}

TEST_CASE("drps: bounded by [0, 2] and maximal at the opposite extreme") {
    CHECK(drps({1.0, 0.0, 0.0}, Verdict::Plus) == 2.0);
    CHECK(drps({0.0, 0.0, 1.0}, Verdict::Minus) == 2.0);
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; i + j <= 20; ++j) {
            const TernaryDistribution d{i / 20.0, (20 - i - j) / 20.0,
                                        j / 20.0};
            for (Verdict truth :
                 {Verdict::Minus, Verdict::Tie, Verdict::Plus}) {
                const double score = drps(d, truth);
                CHECK(score >= 0.0);
                CHECK(score <= 2.0);
            }
        }
    }
}

TEST_CASE("drps: equals the squared CDF distance") {
    const TernaryDistribution d{0.15, 0.35, 0.5};
    // Truth +1: H = (0, 0); F = (0.15, 0.5).
    CHECK(near(drps(d, Verdict::Plus), 0.15 * 0.15 + 0.5 * 0.5));
    // Truth -1: H = (1, 1).
    CHECK(near(drps(d, Verdict::Minus), 0.85 * 0.85 + 0.5 * 0.5));
    // Truth 0: H = (0, 1).
    CHECK(near(drps(d, Verdict::Tie), 0.15 * 0.15 + 0.5 * 0.5));
}

TEST_CASE("verdict: integer codec round-trips and rejects junk") {
    CHECK(verdict_from_int(-1) == Verdict::Minus);
    CHECK(verdict_from_int(0) == Verdict::Tie);
    CHECK(verdict_from_int(1) == Verdict::Plus);
    CHECK_THROWS_AS(verdict_from_int(2), ValidationError);
    CHECK_THROWS_AS(verdict_from_int(-3), ValidationError);
    CHECK(verdict_value(negate(Verdict::Plus)) == -1);
    CHECK(verdict_value(negate(Verdict::Tie)) == 0);
}

TEST_CASE("absolute error: ordinal distances") {
    CHECK(absolute_error(Verdict::Minus, Verdict::Plus) == 2.0);
    CHECK(absolute_error(Verdict::Tie, Verdict::Plus) == 1.0);
    CHECK(absolute_error(Verdict::Plus, Verdict::Plus) == 0.0);
}

TEST_CASE("full swap equivariance from counts to action") {
    const DavidsonParams params{1.2, 0.8, 1.1};
    for (int plus = 0; plus <= 8; ++plus) {
        for (int minus = 0; minus <= 8; ++minus) {
            for (int tie = 0; tie <= 4; ++tie) {
                if (plus + minus + tie == 0) continue;
                const Verdict a = bayes_action(davidson_probs(
                    compute_features({plus, minus, tie}), params));
                const Verdict b = bayes_action(davidson_probs(
                    compute_features({minus, plus, tie}), params));
                CHECK(verdict_value(a) == -verdict_value(b));
            }
        }
    }
}
