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

#include "otfs/brb.hpp"
#include "otfs/exec.hpp"
#include "otfs/rates.hpp"
#include "otfs/scenario.hpp"

#include <vector>

namespace otfs {

/// Best access mode and powers for one slot at one grid power.
struct SlotEntry {
    double value = 0.0;
    SlotChoice choice;
    std::vector<double> powers; // target layout of the winning mode
    bool converged = true;
};

/// entries[r][k]: slot r given k * P / delta_p watts.
struct SlotTable {
    double step = 0.0;
    int levels = 0; // delta_p + 1
    std::vector<std::vector<SlotEntry>> entries;
};

struct DpOptions {
    double eps = 0.05;
    int delta_p = 50;
    int brb_max_iters = 50000;
    Exec exec = Exec::Parallel;
};

/// Maximizes over all NOMA pairs and SDMA for one slot at one power.
SlotEntry solve_rs_optimal(const std::vector<int>& slot, const EffectiveChannel& ch, double budget,
                           const std::vector<double>& alpha, const DpOptions& options);

/// Fills the per-slot value table; each (slot, mode) sweeps the power grid in
/// increasing order and seeds each solve with the previous optimum.
SlotTable build_slot_table(const RsPartition& part, const EffectiveChannel& ch, double P,
                           const std::vector<double>& alpha, const DpOptions& options);

struct DpResult {
    AccessPlan plan;
    PowerAllocation powers;
    double value = 0.0;
    std::vector<int> states; // grid index of E_r for r = 1..R (E_R = delta_p)
    SlotTable table;
    bool converged = true;
};

/// Forward recursion over cumulative-power states and backtracking from E_R = P.
DpResult dp_from_table(const RsPartition& part, int users, int bins, SlotTable table);

DpResult dp_solve(const RsPartition& part, const EffectiveChannel& ch, double P, const std::vector<double>& alpha,
                  const DpOptions& options);

} // namespace otfs
