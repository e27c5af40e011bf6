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
#include "otfs/baselines.hpp"

#include <random>

namespace otfs {

namespace {

constexpr int kCoverageDraws = 1000;

template <class Draw>
AccessPlan draw_covering(const RsPartition& part, const Demand& demand, std::uint64_t seed, Draw draw)
{
    std::mt19937_64 rng(seed);
    AccessPlan plan;
    for (int attempt = 0; attempt < kCoverageDraws; ++attempt) {
        plan.clear();
        for (int r = 0; r < part.R; ++r) {
            plan.push_back(draw(rng));
        }
        if (uncovered_users(plan, demand).empty()) {
            break;
        }
    }
    return plan;
}

SlotChoice random_pair(std::mt19937_64& rng, int users)
{
    const auto pairs = user_pairs(users);
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    const auto [q, i] = pairs[pick(rng)];
    return SlotChoice::noma(q, i);
}

ScaResult infeasible_plan()
{
    ScaResult r;
    r.feasible = false;
    return r;
}

} // namespace

ScaResult sdma_all(const RsPartition& part, const EffectiveChannel& ch, const Demand& demand,
                   const ScaOptions& options)
{
    const AccessPlan plan(static_cast<std::size_t>(part.R), SlotChoice::sdma());
    return sca_power_only(plan, part, ch, demand, options);
}

AccessPlan random_noma_plan(const RsPartition& part, int users, const Demand& demand, std::uint64_t seed)
{
    if (users < 2) {
        return {};
    }
    return draw_covering(part, demand, seed, [users](std::mt19937_64& rng) { return random_pair(rng, users); });
}

AccessPlan random_mixed_plan(const RsPartition& part, int users, const Demand& demand, std::uint64_t seed)
{
    return draw_covering(part, demand, seed, [users](std::mt19937_64& rng) {
        std::bernoulli_distribution coin(0.5);
        if (coin(rng) || users < 2) {
            return SlotChoice::sdma();
        }
        return random_pair(rng, users);
    });
}

ScaResult random_noma(const RsPartition& part, const EffectiveChannel& ch, const Demand& demand,
                      const ScaOptions& options, std::uint64_t seed)
{
    const AccessPlan plan = random_noma_plan(part, ch.users(), demand, seed);
    if (plan.empty() && part.R > 0) {
        return infeasible_plan();
    }
    return sca_power_only(plan, part, ch, demand, options);
}

ScaResult random_mixed_opt(const RsPartition& part, const EffectiveChannel& ch, const Demand& demand,
                           const ScaOptions& options, std::uint64_t seed)
{
    return sca_power_only(random_mixed_plan(part, ch.users(), demand, seed), part, ch, demand, options);
}

PowerAllocation equal_power(const AccessPlan& plan, const RsPartition& part, const EffectiveChannel& ch, double P)
{
    const int Q = ch.users();
    PowerAllocation p = PowerAllocation::Zero(Q, ch.bins());
    if (part.R == 0 || P <= 0.0) {
        return p;
    }
    const double per_slot = P / part.R;
    for (int r = 0; r < part.R; ++r) {
        const auto& slot = part.slots[static_cast<std::size_t>(r)];
        const SlotChoice& c = plan[static_cast<std::size_t>(r)];
        const int served = c.is_noma() ? 2 : Q;
        const double each = per_slot / (served * static_cast<double>(slot.size()));
        for (int b : slot) {
            if (!c.is_noma()) {
                p.col(b).setConstant(each);
                continue;
            }
            const double own = ch.self(c.strong, b);
            const double cross = ch.gain(c.strong, c.weak, b);
            double ps = each;
            double pw = each;
            if (own * ps > cross * pw) {
                // keep the pair's sum and meet the order with equality
                ps = 2.0 * each * cross / (own + cross);
                pw = 2.0 * each - ps;
            }
            p(c.strong, b) = ps;
            p(c.weak, b) = pw;
        }
    }
    return p;
}

ScaResult random_mixed_equal(const RsPartition& part, const EffectiveChannel& ch, const Demand& demand,
                             std::uint64_t seed)
{
    ScaResult out;
    out.plan = random_mixed_plan(part, ch.users(), demand, seed);
    out.powers = equal_power(out.plan, part, ch, demand.P);
    evaluate_allocation(out, part, ch, demand);
    return out;
}

} // namespace otfs
