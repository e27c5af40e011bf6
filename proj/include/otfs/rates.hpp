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
#include "otfs/scenario.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace otfs {

/// Access decision of one resource slot: a NOMA pair (strong < weak) or SDMA over all users.
struct SlotChoice {
    enum class Kind { Sdma, Noma };
    Kind kind = Kind::Sdma;
    int strong = -1;
    int weak = -1;

    static SlotChoice sdma() { return {}; }
    static SlotChoice noma(int q, int i) { return {Kind::Noma, q, i}; }
    bool is_noma() const { return kind == Kind::Noma; }
    bool serves(int user) const { return kind == Kind::Sdma || user == strong || user == weak; }
    bool operator==(const SlotChoice&) const = default;
};

using AccessPlan = std::vector<SlotChoice>;

/// Transmit powers in watts, one row per user and one column per bin.
using PowerAllocation = Eigen::MatrixXd;

/// All unordered user pairs (q, i) with q < i, in lexicographic order.
std::vector<std::pair<int, int>> user_pairs(int Q);

std::string describe(const SlotChoice& choice);

double sic_tolerance(double scale);

std::pair<double, double> noma_pair_rates(const EffectiveChannel& ch, const PowerAllocation& p,
                                          const std::vector<int>& slot, int q, int i);

std::vector<double> sdma_rates(const EffectiveChannel& ch, const PowerAllocation& p, const std::vector<int>& slot);

/// Weighted sum-rate of slot r under its planned access choice.
double rs_weighted_sum(const AccessPlan& plan, const EffectiveChannel& ch, const PowerAllocation& p,
                       const RsPartition& part, const std::vector<double>& alpha, int r);

double weighted_sum_rate(const AccessPlan& plan, const EffectiveChannel& ch, const PowerAllocation& p,
                         const RsPartition& part, const std::vector<double>& alpha);

/// Rate of user q summed over every slot that serves it.
double user_total_rate(const AccessPlan& plan, const PowerAllocation& p, const EffectiveChannel& ch,
                       const RsPartition& part, int q);

/// True iff the strong user's received own power never exceeds the weak user's
/// signal power at the strong user, within tol. A negative tol selects sic_tolerance.
bool check_sic_order(const EffectiveChannel& ch, const PowerAllocation& p, const std::vector<int>& slot, int q,
                     int i, double tol = -1.0);

/// Power spent under the plan: only users served by a slot count in its bins.
double spent_power(const AccessPlan& plan, const PowerAllocation& p, const RsPartition& part);

} // namespace otfs
