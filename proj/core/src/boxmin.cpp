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

#include "judgecal/boxmin.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "judgecal/errors.hpp"

namespace judgecal {
namespace {

void clamp_into_box(std::vector<double>& x, const std::vector<double>& lower,
                    const std::vector<double>& upper) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], lower[i], upper[i]);
    }
}

// Infinity norm of P(x - g) - x, the standard box stationarity measure.
double projected_gradient_norm(const std::vector<double>& x,
                               const std::vector<double>& grad,
                               const std::vector<double>& lower,
                               const std::vector<double>& upper) {
    double norm = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double moved = std::clamp(x[i] - grad[i], lower[i], upper[i]);
        norm = std::max(norm, std::abs(moved - x[i]));
    }
    return norm;
}

std::vector<int> active_set(const std::vector<double>& x,
                            const std::vector<double>& grad,
                            const std::vector<double>& lower,
                            const std::vector<double>& upper) {
    std::vector<int> active(x.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double margin = 1e-10 * std::max(1.0, upper[i] - lower[i]);
        if ((x[i] <= lower[i] + margin && grad[i] > 0.0) ||
            (x[i] >= upper[i] - margin && grad[i] < 0.0)) {
            active[i] = 1;
        }
    }
    return active;
}

}  // namespace

BoxMinResult minimize_box(const BoxObjective& objective,
                          std::vector<double> start,
                          const std::vector<double>& lower,
                          const std::vector<double>& upper,
                          const BoxMinOptions& options) {
    const std::size_t n = start.size();
    if (n == 0) {
        throw ValidationError("minimization requires at least one variable");
    }
    if (lower.size() != n || upper.size() != n) {
        throw LengthMismatch("box bounds must match the dimension of start");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lower[i] < upper[i])) {
            throw ValidationError("box lower bounds must be below upper bounds");
        }
    }

    clamp_into_box(start, lower, upper);
    std::vector<double> x = std::move(start);
    std::vector<double> grad(n, 0.0);
    double value = objective(x, grad);
    if (!std::isfinite(value)) {
        throw NonFiniteObjective("objective is not finite at the start point");
    }

    // Dense inverse-Hessian approximation; the problems here are tiny.
    std::vector<double> inv_hessian(n * n, 0.0);
    auto reset_hessian = [&] {
        std::fill(inv_hessian.begin(), inv_hessian.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) inv_hessian[i * n + i] = 1.0;
    };
    reset_hessian();

    BoxMinResult result;
    result.converged = false;

    std::vector<int> previous_active = active_set(x, grad, lower, upper);
    std::vector<double> direction(n), candidate(n), candidate_grad(n);

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        if (projected_gradient_norm(x, grad, lower, upper) <
            options.gradient_tolerance) {
            result.converged = true;
            break;
        }

        std::vector<int> active = active_set(x, grad, lower, upper);
        if (active != previous_active) {
            // Curvature gathered under a different active set is stale.
            reset_hessian();
            previous_active = active;
        }

        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            if (!active[i]) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (!active[j]) d -= inv_hessian[i * n + j] * grad[j];
                }
            }
            direction[i] = d;
        }

        double slope = 0.0;
        for (std::size_t i = 0; i < n; ++i) slope += grad[i] * direction[i];
        if (!(slope < 0.0)) {
            // Fall back to projected steepest descent.
            for (std::size_t i = 0; i < n; ++i) {
                direction[i] = active[i] ? 0.0 : -grad[i];
            }
            slope = 0.0;
            for (std::size_t i = 0; i < n; ++i) slope += grad[i] * direction[i];
            reset_hessian();
            if (!(slope < 0.0)) break;  // pinned on every coordinate
        }

        // Backtracking Armijo search along the projected path.
        constexpr double armijo = 1e-4;
        double step = 1.0;
        double candidate_value = 0.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving) {
            bool moved = false;
            for (std::size_t i = 0; i < n; ++i) {
                candidate[i] =
                    std::clamp(x[i] + step * direction[i], lower[i], upper[i]);
                moved = moved || candidate[i] != x[i];
            }
            if (!moved) break;
            candidate_value = objective(candidate, candidate_grad);
            if (!std::isfinite(candidate_value)) {
                throw NonFiniteObjective("objective is not finite inside the box");
            }
            double gain = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                gain += grad[i] * (candidate[i] - x[i]);
            }
            if (candidate_value <= value + armijo * gain) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // progress limited by floating-point precision

        // BFGS update on the accepted step when curvature is usable.
        double sy = 0.0, ss = 0.0, yy = 0.0;
        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = candidate[i] - x[i];
            y[i] = candidate_grad[i] - grad[i];
            sy += s[i] * y[i];
            ss += s[i] * s[i];
            yy += y[i] * y[i];
        }
        if (sy > 1e-12 * std::sqrt(ss * yy)) {
            const double rho = 1.0 / sy;
            // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
            std::vector<double> hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    hy[i] += inv_hessian[i * n + j] * y[j];
                }
            }
            double yhy = 0.0;
            for (std::size_t i = 0; i < n; ++i) yhy += y[i] * hy[i];
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    inv_hessian[i * n + j] +=
                        -rho * (s[i] * hy[j] + hy[i] * s[j]) +
                        rho * (1.0 + rho * yhy) * s[i] * s[j];
                }
            }
        }

        x = candidate;
        grad = candidate_grad;
        value = candidate_value;
    }

    if (!result.converged) {
        result.converged =
            projected_gradient_norm(x, grad, lower, upper) <
            options.gradient_tolerance;
    }
    result.x = std::move(x);
    result.value = value;
    result.iterations = iter;
    return result;
}

}  // namespace judgecal
