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

#include "otfs/channel.hpp"
#include "otfs/rates.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace otfs {

/// Box [lower, upper] in rate space with a cached upper bound of the objective.
struct BrbBox {
    std::vector<double> lower;
    std::vector<double> upper;
    double f_ub = 0.0;
};

/// Linear objective sum_k w_k z_k.
double box_objective(std::span<const double> w, std::span<const double> z);

/// Bisects the longest side (lowest index on ties). Children bounds never exceed the parent's.
std::pair<BrbBox, BrbBox> branch(const BrbBox& box, std::span<const double> w);

/// Shrinks the box to the part that can hold points with f_min <= L <= f_ub.
/// Returns nothing when the box cannot beat f_min.
std::optional<BrbBox> reduce(const BrbBox& box, double f_min, std::span<const double> w);

struct BrbTraceRow {
    int iteration = 0;
    double f_min = 0.0;
    double f_max = 0.0;
    std::size_t active_boxes = 0;
};

struct BrbOptions {
    double eps = 0.05;
    int max_iters = 50000;
    /// Known feasible targets (same layout as the search space) used as the initial incumbent.
    std::vector<double> warm_start;
    std::function<void(const BrbTraceRow&)> observer;
    bool keep_boxes = false;
};

struct BrbResult {
    double value = 0.0;              // weighted rate at the returned powers
    std::vector<double> powers;      // minimal powers, same layout as the targets
    std::vector<double> targets;     // incumbent rate targets (bits per bin)
    double f_min = 0.0;
    double f_max = 0.0;
    int iterations = 0;
    bool converged = false;
    bool bounds_ordered = true;      // f_min <= f_max at every iteration
    std::size_t pruned_infeasible = 0;
    std::size_t pruned_by_bound = 0;
    std::vector<BrbBox> final_boxes; // filled when keep_boxes is set
};

/// Slot-level access mode optimized by BRB.
struct SlotMode {
    SlotChoice choice;
    int dimensions(int users, std::size_t slot_bins) const
    {
        return static_cast<int>(slot_bins) * (choice.is_noma() ? 2 : users);
    }
};

/// Weighted per-bin rate objective weights (alpha / MN) in target layout.
std::vector<double> target_weights(const SlotChoice& mode, const std::vector<int>& slot, const EffectiveChannel& ch,
                                   const std::vector<double>& alpha);

/// Per-bin rates achieved by powers given in target layout.
std::vector<double> achieved_targets(const SlotChoice& mode, const std::vector<int>& slot, const EffectiveChannel& ch,
                                     std::span<const double> powers);

/// Writes powers given in target layout into a full allocation.
void scatter_powers(const SlotChoice& mode, const std::vector<int>& slot, int users, std::span<const double> powers,
                    PowerAllocation& out);

BrbResult brb_maximize(const SlotChoice& mode, const std::vector<int>& slot, const EffectiveChannel& ch, double budget,
                       const std::vector<double>& alpha, const BrbOptions& options = {});

} // namespace otfs
