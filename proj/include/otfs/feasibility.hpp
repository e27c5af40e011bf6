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

#include <span>
#include <vector>

namespace otfs {

/// Outcome of a minimal-power check for a vector of per-bin rate targets (bits).
struct FeasibilityResult {
    bool feasible = false;
    std::vector<double> min_powers; // same layout as the targets
    double total = 0.0;             // sum of min_powers (watts)
    double slack = 0.0;             // budget minus total
};

/// NOMA pair (q strong, i weak). Targets are interleaved per bin:
/// [z_q(b0), z_i(b0), z_q(b1), z_i(b1), ...]. The SIC order is enforced by
/// lifting the weak user's power to the smallest compliant value.
FeasibilityResult min_power_noma(std::span<const double> z, const EffectiveChannel& ch, const std::vector<int>& slot,
                                 int q, int i, double budget);

/// SDMA over all users. Targets are grouped per bin: [z_0(b0) .. z_{Q-1}(b0), z_0(b1), ...].
FeasibilityResult min_power_sdma(std::span<const double> z, const EffectiveChannel& ch, const std::vector<int>& slot,
                                 double budget);

} // namespace otfs
