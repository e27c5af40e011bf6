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

#include "otfs/config.hpp"
#include "otfs/rates.hpp"
#include "otfs/scenario.hpp"

#include <functional>
#include <vector>

namespace otfs {

/// Budget, user weights and rate floors of one allocation problem.
struct Demand {
    double P = 0.0;
    std::vector<double> alpha; // one per user
    std::vector<double> c_min; // one per user

    static Demand from_config(const ScenarioConfig& config);
    bool has_floors() const;
};

/// Rates within this distance below a floor still count as meeting it.
inline constexpr double kRateFloorTolerance = 1e-6;

struct ScaTraceRow {
    enum class Stage { Relaxed, FixedPlan };
    Stage stage = Stage::Relaxed;
    int iteration = 0;
    double objective = 0.0;
};

struct ScaOptions {
    double eta = 1000.0;
    int max_iters = 30;
    double tol = 1e-4;       // relative objective change that ends the loop
    double tol_inner = 1e-7; // barrier duality-gap target
    int phase_one_retries = 5;
    DcSplit dc_split = DcSplit::Literal;
    std::function<void(const ScaTraceRow&)> observer;

    static ScaOptions from_config(const ScenarioConfig& config);
};

struct ScaResult {
    bool feasible = false;
    AccessPlan plan;
    PowerAllocation powers; // watts
    double value = 0.0;     // unpenalized weighted sum-rate at the returned powers
    std::vector<double> user_rates;
    int iterations = 0;
    int newton_steps = 0;
    std::vector<double> relaxed_trace; // penalized objective after each relaxed-stage iterate
    std::vector<double> fixed_trace;   // sum-rate after each fixed-plan iterate
    double binarity = 0.0;             // sum of a (1 - a) before rounding
    double bigm_gap = 0.0;             // max |p~ - a p| in watts before rounding
    bool repaired = false;
};

/// Per slot: 1 means SDMA, 0 means NOMA with the pair left to the solver.
using SdmaMask = std::vector<int>;

/// Suboptimal solution of the sum-rate problem with the SDMA slots fixed:
/// successive convex approximation over the penalized relaxation, rounding of
/// the pair choice, coverage repair and a final fixed-plan power solve.
ScaResult sca_solve_p3(const SdmaMask& mask, const RsPartition& part, const EffectiveChannel& ch,
                       const Demand& demand, const ScaOptions& options);

/// Power-only successive convex approximation for a fixed access plan.
/// A non-empty start (watts) seeds the first linearization.
ScaResult sca_power_only(const AccessPlan& plan, const RsPartition& part, const EffectiveChannel& ch,
                         const Demand& demand, const ScaOptions& options, const PowerAllocation& start = {});

/// Users with a positive floor that no slot of the plan serves.
std::vector<int> uncovered_users(const AccessPlan& plan, const Demand& demand);

/// Fills value, user rates and the verdict from plan and powers.
void evaluate_allocation(ScaResult& result, const RsPartition& part, const EffectiveChannel& ch,
                         const Demand& demand);

} // namespace otfs
