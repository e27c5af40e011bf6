/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace otfs::convex {

struct Term {
    int var = 0;
    double coef = 0.0;
};

/// sum of coef * x[var] plus a constant.
struct Affine {
    std::vector<Term> terms;
    double constant = 0.0;

    double eval(const Eigen::VectorXd& x) const;
};

/// weight * log(1 + gain * x[var]); requires 1 + gain * x[var] > 0.
struct LogTerm {
    int var = 0;
    double gain = 1.0;
    double weight = 1.0;
};

/// f(x) = square(x)^2 + linear(x) - sum of log terms, with the constraint f(x) <= 0.
/// Leave square empty and logs empty for a plain linear row.
struct Inequality {
    Affine linear;
    std::optional<Affine> square;
    std::vector<LogTerm> logs;

    /// +inf outside the log domain.
    double eval(const Eigen::VectorXd& x) const;
};

/// maximize  sum of objective logs + linear(x)
/// s.t.      every inequality <= 0, every equality == 0.
struct Problem {
    int n = 0;
    std::vector<LogTerm> objective_logs;
    Affine objective_linear;
    std::vector<Inequality> inequalities;
    std::vector<Affine> equalities;

    double objective(const Eigen::VectorXd& x) const;
    bool strictly_feasible(const Eigen::VectorXd& x) const;
    /// Largest inequality value at x (+inf outside a log domain).
    double max_violation(const Eigen::VectorXd& x) const;
};

struct BarrierOptions {
    double tol = 1e-7;  // stop once (inequalities / t) falls below this
    double t0 = 1.0;
    double mu = 20.0;
    int max_newton = 500;
    /// Checked after every Newton step; returning true ends the solve early.
    std::function<bool(const Eigen::VectorXd&)> stop_early;
};

struct BarrierResult {
    Eigen::VectorXd x;
    double objective = 0.0;
    bool converged = false;
    bool stopped_early = false;
    int newton_steps = 0;
};

/// Log-barrier interior-point method. x0 must be strictly feasible and satisfy the equalities.
BarrierResult maximize(const Problem& problem, const Eigen::VectorXd& x0, const BarrierOptions& options = {});

struct PhaseOneResult {
    bool feasible = false;
    Eigen::VectorXd x; // interior point when feasible, else the least-violating iterate
};

/// Phase I: searches for a strictly feasible point starting from x0, which must
/// satisfy the equalities and lie in every log domain. Fails when the smallest
/// achievable common violation is not negative.
PhaseOneResult find_strictly_feasible(const Problem& problem, const Eigen::VectorXd& x0,
                                      const BarrierOptions& options = {});

} // namespace otfs::convex
