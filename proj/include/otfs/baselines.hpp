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

#include "otfs/sca.hpp"

#include <cstdint>

namespace otfs {

/// SDMA on every slot, powers from the fixed-plan SCA.
ScaResult sdma_all(const RsPartition& part, const EffectiveChannel& ch, const Demand& demand,
                   const ScaOptions& options);

/// Uniformly drawn NOMA pair per slot, redrawn until every user with a floor is served.
AccessPlan random_noma_plan(const RsPartition& part, int users, const Demand& demand, std::uint64_t seed);

/// Fair coin per slot between SDMA and a uniform NOMA pair, with the same coverage redraw.
AccessPlan random_mixed_plan(const RsPartition& part, int users, const Demand& demand, std::uint64_t seed);

ScaResult random_noma(const RsPartition& part, const EffectiveChannel& ch, const Demand& demand,
                      const ScaOptions& options, std::uint64_t seed);

ScaResult random_mixed_opt(const RsPartition& part, const EffectiveChannel& ch, const Demand& demand,
                           const ScaOptions& options, std::uint64_t seed);

/// Budget split evenly over slots, then over the served users' bins. NOMA bins
/// whose even split breaks the decoding order get the split that just meets it.
PowerAllocation equal_power(const AccessPlan& plan, const RsPartition& part, const EffectiveChannel& ch, double P);

/// Same plan as random_mixed_opt for the same seed, with equal powers.
ScaResult random_mixed_equal(const RsPartition& part, const EffectiveChannel& ch, const Demand& demand,
                             std::uint64_t seed);

} // namespace otfs
