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
#include <span>
#include <vector>

#include "judgecal/types.hpp"

namespace judgecal {

// One labeled item ready for fitting: its count features plus the gold
// verdict.
struct CalibrationItem {
    FeaturePair features;
    Verdict truth = Verdict::Tie;
};

// Feasible region for the fit. nu bounds are positive; optimization runs
// over (beta, ln nu, gamma), so the nu interval is handled in log space.
struct ParamBox {
    double beta_lo = 1e-3;
    double beta_hi = 5.0;
    double nu_lo = 1e-4;
    double nu_hi = 1e3;
    double gamma_lo = -10.0;
    double gamma_hi = 10.0;

    void validate() const;  // throws ValidationError on malformed bounds
    bool contains(const DavidsonParams& params) const;
};

struct FitConfig {
    ParamBox box{};
    int restarts = 8;       // restart 0 always starts at (1, 1, 1)
    std::uint64_t seed = 0;
    int max_iterations = 200;
    double gradient_tolerance = 1e-8;
};

struct FitResult {
    DavidsonParams params{};
    double objective = 0.0;
    int restart_index = 0;  // -1 for the grid oracle
    bool converged = false;
};

// Per-restart trace for reporting. start is the initial point, the rest
// describe the local solution the restart reached.
struct RestartTrace {
    int index = 0;
    DavidsonParams start{};
    DavidsonParams solution{};
    double objective = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Mean ranked probability score of the forecasts params induces on items.
// Throws EmptyCalibrationSet on an empty span and NonFiniteObjective if the
// score fails to evaluate finite.
double mean_drps(std::span<const CalibrationItem> items,
                 const DavidsonParams& params);

// Same objective with its analytic gradient in (beta, ln nu, gamma).
double mean_drps_with_gradient(std::span<const CalibrationItem> items,
                               const DavidsonParams& params,
                               std::array<double, 3>& grad);

// Minimizes mean_drps over the box by multi-start quasi-Newton descent.
// Restart 0 starts from (beta, nu, gamma) = (1, 1, 1) clamped into the box;
// the others draw uniform starts (log-uniform in nu) from streams derived
// from config.seed, so results are deterministic. Ties between restarts go
// to the lowest restart index.
FitResult fit_drps(std::span<const CalibrationItem> calibration,
                   const FitConfig& config = {},
                   std::vector<RestartTrace>* trace = nullptr);

// Exhaustive reference: evaluates the objective on a resolution^3 grid over
// the box, linear in beta and gamma and log-spaced in nu, and returns the
// best grid point. Ties go to the earliest point in (beta, nu, gamma) loop
// order. restart_index is -1 in the result.
FitResult grid_oracle(std::span<const CalibrationItem> calibration,
                      const ParamBox& box, int resolution);

}  // namespace judgecal
