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

#include <functional>
#include <vector>

namespace judgecal {

struct BoxMinOptions {
    int max_iterations = 200;
    double gradient_tolerance = 1e-8;  // infinity norm of the projected gradient
};

struct BoxMinResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Objective callback: returns f(x) and fills grad (same length as x).
using BoxObjective =
    std::function<double(const std::vector<double>&, std::vector<double>&)>;

// Quasi-Newton (BFGS) minimization of a smooth function subject to box
// constraints. Search directions are computed in the subspace of variables
// not pinned at an active bound, steps are projected back into the box, and
// a backtracking Armijo line search guards descent. Deterministic: no
// internal randomness.
BoxMinResult minimize_box(const BoxObjective& objective,
                          std::vector<double> start,
                          const std::vector<double>& lower,
                          const std::vector<double>& upper,
                          const BoxMinOptions& options = {});

}  // namespace judgecal
