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

#include "judgecal/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "judgecal/boxmin.hpp"
#include "judgecal/errors.hpp"
#include "judgecal/rng.hpp"

namespace judgecal {
namespace {

struct PreparedItem {
    double margin;
    double tie_evidence;
    double outcome_minus;  // 1 when truth <= Minus
    double outcome_tie;    // 1 when truth <= Tie
};

std::vector<PreparedItem> prepare(std::span<const CalibrationItem> items) {
    std::vector<PreparedItem> prepared;
    prepared.reserve(items.size());
    for (const CalibrationItem& item : items) {
        prepared.push_back({item.features.margin, item.features.tie_evidence,
                            item.truth == Verdict::Minus ? 1.0 : 0.0,
                            item.truth == Verdict::Plus ? 0.0 : 1.0});
    }
    return prepared;
}

// Mean ranked probability score at (beta, w = ln nu, gamma), with the
// analytic gradient in those coordinates when grad is non-null.
double evaluate(const std::vector<PreparedItem>& items, double beta, double w,
                double gamma, std::array<double, 3>* grad) {
    double total = 0.0;
    double g_beta = 0.0, g_w = 0.0, g_gamma = 0.0;
    for (const PreparedItem& item : items) {
        const double u = beta * item.margin;
        const double eta = w + gamma * item.tie_evidence;
        const double top = std::max({u, -u, eta});
        const double e_plus = std::exp(u - top);
        const double e_minus = std::exp(-u - top);
        const double e_tie = std::exp(eta - top);
        const double z = e_plus + e_minus + e_tie;
        const double p_plus = e_plus / z;
        const double p_minus = e_minus / z;
        const double p_tie = e_tie / z;

        const double a = p_minus - item.outcome_minus;
        const double b = (p_minus + p_tie) - item.outcome_tie;
        total += a * a + b * b;

        if (grad) {
            const double s = item.margin;
            const double t = item.tie_evidence;
            // dp_minus/dbeta = -s p_minus (1 - p_minus + p_plus)
            // dp_plus/dbeta  =  s p_plus  (1 - p_plus + p_minus)
            // dp_minus/dw    = -p_minus p_tie,  dp_plus/dw = -p_plus p_tie
            g_beta += 2.0 * a * (-s * p_minus * (1.0 - p_minus + p_plus)) -
                      2.0 * b * (s * p_plus * (1.0 - p_plus + p_minus));
            const double shared = p_tie * (2.0 * b * p_plus - 2.0 * a * p_minus);
            g_w += shared;
            g_gamma += t * shared;
        }
    }
    const double n = static_cast<double>(items.size());
    if (grad) {
        (*grad)[0] = g_beta / n;
        (*grad)[1] = g_w / n;
        (*grad)[2] = g_gamma / n;
    }
    const double mean = total / n;
    if (!std::isfinite(mean)) {
        throw NonFiniteObjective(
            "mean ranked probability score is not finite; check features");
    }
    return mean;
}

}  // namespace

void ParamBox::validate() const {
    const bool ordered = beta_lo < beta_hi && nu_lo < nu_hi && gamma_lo < gamma_hi;
    const bool finite = std::isfinite(beta_lo) && std::isfinite(beta_hi) &&
                        std::isfinite(nu_lo) && std::isfinite(nu_hi) &&
                        std::isfinite(gamma_lo) && std::isfinite(gamma_hi);
    if (!ordered || !finite || !(nu_lo > 0.0) || !(beta_lo >= 0.0)) {
        throw ValidationError(
            "parameter box must have finite ordered bounds, nu_lo > 0, and "
            "beta_lo >= 0");
    }
}

bool ParamBox::contains(const DavidsonParams& params) const {
    return params.beta >= beta_lo && params.beta <= beta_hi &&
           params.nu >= nu_lo && params.nu <= nu_hi &&
           params.gamma >= gamma_lo && params.gamma <= gamma_hi;
}

double mean_drps(std::span<const CalibrationItem> items,
                 const DavidsonParams& params) {
    if (items.empty()) throw EmptyCalibrationSet("calibration set is empty");
    if (!(params.nu > 0.0)) throw ValidationError("nu must be positive");
    return evaluate(prepare(items), params.beta, std::log(params.nu),
                    params.gamma, nullptr);
}

double mean_drps_with_gradient(std::span<const CalibrationItem> items,
                               const DavidsonParams& params,
                               std::array<double, 3>& grad) {
    if (items.empty()) throw EmptyCalibrationSet("calibration set is empty");
    if (!(params.nu > 0.0)) throw ValidationError("nu must be positive");
    return evaluate(prepare(items), params.beta, std::log(params.nu),
                    params.gamma, &grad);
}

FitResult fit_drps(std::span<const CalibrationItem> calibration,
                   const FitConfig& config, std::vector<RestartTrace>* trace) {
    if (calibration.empty()) {
        throw EmptyCalibrationSet("calibration set is empty");
    }
    config.box.validate();
    if (config.restarts < 1) {
        throw ValidationError("fit needs at least one restart");
    }

    const std::vector<PreparedItem> prepared = prepare(calibration);
    const std::vector<double> lower = {config.box.beta_lo,
                                       std::log(config.box.nu_lo),
                                       config.box.gamma_lo};
    const std::vector<double> upper = {config.box.beta_hi,
                                       std::log(config.box.nu_hi),
                                       config.box.gamma_hi};

    const BoxObjective objective = [&prepared](const std::vector<double>& x,
                                               std::vector<double>& grad) {
        std::array<double, 3> g{};
        const double value = evaluate(prepared, x[0], x[1], x[2], &g);
        grad.assign(g.begin(), g.end());
        return value;
    };

    const BoxMinOptions options{config.max_iterations,
                                config.gradient_tolerance};
    if (trace) trace->clear();

    FitResult best;
    bool have_best = false;
    for (int restart = 0; restart < config.restarts; ++restart) {
        std::vector<double> start(3);
        if (restart == 0) {
            start = {1.0, 0.0, 1.0};  // (beta, nu, gamma) = (1, 1, 1)
        } else {
            auto rng = make_engine(config.seed, "fit-restart",
                                   static_cast<std::uint64_t>(restart));
            start[0] = lower[0] + uniform01(rng) * (upper[0] - lower[0]);
            start[1] = lower[1] + uniform01(rng) * (upper[1] - lower[1]);
            start[2] = lower[2] + uniform01(rng) * (upper[2] - lower[2]);
        }
        for (int i = 0; i < 3; ++i) {
            start[i] = std::clamp(start[i], lower[i], upper[i]);
        }
        const DavidsonParams start_params{start[0], std::exp(start[1]),
                                          start[2]};

        BoxMinResult local =
            minimize_box(objective, start, lower, upper, options);
        const DavidsonParams solution{local.x[0], std::exp(local.x[1]),
                                      local.x[2]};
        if (trace) {
            trace->push_back({restart, start_params, solution, local.value,
                              local.converged, local.iterations});
        }
        if (!have_best || local.value < best.objective) {
            best = {solution, local.value, restart, local.converged};
            have_best = true;
        }
    }
    return best;
}

FitResult grid_oracle(std::span<const CalibrationItem> calibration,
                      const ParamBox& box, int resolution) {
    if (calibration.empty()) {
        throw EmptyCalibrationSet("calibration set is empty");
    }
    box.validate();
    if (resolution < 3) {
        throw ValidationError("grid resolution must be at least 3, got " +
                              std::to_string(resolution));
    }

    const std::vector<PreparedItem> prepared = prepare(calibration);
    const double w_lo = std::log(box.nu_lo);
    const double w_hi = std::log(box.nu_hi);
    const int last = resolution - 1;

    FitResult best;
    bool have_best = false;
    for (int i = 0; i < resolution; ++i) {
        const double beta =
            box.beta_lo + (box.beta_hi - box.beta_lo) * i / last;
        for (int j = 0; j < resolution; ++j) {
            const double w = w_lo + (w_hi - w_lo) * j / last;
            for (int k = 0; k < resolution; ++k) {
                const double gamma =
                    box.gamma_lo + (box.gamma_hi - box.gamma_lo) * k / last;
                const double value =
                    evaluate(prepared, beta, w, gamma, nullptr);
                if (!have_best || value < best.objective) {
                    best = {{beta, std::exp(w), gamma}, value, -1, true};
                    have_best = true;
                }
            }
        }
    }
    return best;
}

}  // namespace judgecal
