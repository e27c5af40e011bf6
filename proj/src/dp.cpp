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
#include "otfs/dp.hpp"

#include "otfs/config.hpp"

#include <limits>

namespace otfs {

namespace {

std::vector<SlotChoice> slot_modes(int Q)
{
    std::vector<SlotChoice> modes;
    for (const auto& [q, i] : user_pairs(Q)) {
        modes.push_back(SlotChoice::noma(q, i));
    }
    modes.push_back(SlotChoice::sdma());
    return modes;
}

} // namespace

SlotEntry solve_rs_optimal(const std::vector<int>& slot, const EffectiveChannel& ch, double budget,
                           const std::vector<double>& alpha, const DpOptions& options)
{
    SlotEntry best;
    best.value = -1.0;
    BrbOptions brb;
    brb.eps = options.eps;
    brb.max_iters = options.brb_max_iters;
    for (const SlotChoice& mode : slot_modes(ch.users())) {
        const BrbResult res = brb_maximize(mode, slot, ch, budget, alpha, brb);
        if (res.value > best.value) {
            best = {res.value, mode, res.powers, res.converged};
        }
    }
    return best;
}

SlotTable build_slot_table(const RsPartition& part, const EffectiveChannel& ch, double P,
                           const std::vector<double>& alpha, const DpOptions& options)
{
    if (options.delta_p < 1) {
        throw ConfigError("delta_p must be at least 1");
    }
    const auto modes = slot_modes(ch.users());
    const int levels = options.delta_p + 1;
    const int tasks = part.R * static_cast<int>(modes.size());
    const double step = P / options.delta_p;

    // per task: one sweep over the power grid
    std::vector<std::vector<SlotEntry>> sweeps(static_cast<std::size_t>(tasks));
    const bool parallel = options.exec == Exec::Parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int t = 0; t < tasks; ++t) {
        const int r = t / static_cast<int>(modes.size());
        const SlotChoice mode = modes[static_cast<std::size_t>(t) % modes.size()];
        const auto& slot = part.slots[static_cast<std::size_t>(r)];
        auto& sweep = sweeps[static_cast<std::size_t>(t)];
        sweep.resize(static_cast<std::size_t>(levels));
        BrbOptions brb;
        brb.eps = options.eps;
        brb.max_iters = options.brb_max_iters;
        for (int k = 0; k < levels; ++k) {
            const BrbResult res = brb_maximize(mode, slot, ch, step * k, alpha, brb);
            sweep[static_cast<std::size_t>(k)] = {res.value, mode, res.powers, res.converged};
            brb.warm_start = res.targets;
        }
    }

    SlotTable table;
    table.step = step;
    table.levels = levels;
    table.entries.assign(static_cast<std::size_t>(part.R), std::vector<SlotEntry>(static_cast<std::size_t>(levels)));
    for (int r = 0; r < part.R; ++r) {
        for (int k = 0; k < levels; ++k) {
            SlotEntry best;
            best.value = -1.0;
            for (std::size_t m = 0; m < modes.size(); ++m) {
                const SlotEntry& cand = sweeps[static_cast<std::size_t>(r) * modes.size() + m][static_cast<std::size_t>(k)];
                if (cand.value > best.value) {
                    best = cand;
                }
            }
            table.entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = std::move(best);
        }
    }
    return table;
}

DpResult dp_from_table(const RsPartition& part, int users, int bins, SlotTable table)
{
    const int R = part.R;
    const int levels = table.levels;
    // value[r][E]: best sum over slots 0..r with cumulative grid index E; choice[r][E]: grid index of slot r
    std::vector<std::vector<double>> value(static_cast<std::size_t>(R), std::vector<double>(static_cast<std::size_t>(levels)));
    std::vector<std::vector<int>> take(static_cast<std::size_t>(R), std::vector<int>(static_cast<std::size_t>(levels)));
    for (int E = 0; E < levels; ++E) {
        value[0][static_cast<std::size_t>(E)] = table.entries[0][static_cast<std::size_t>(E)].value;
        take[0][static_cast<std::size_t>(E)] = E;
    }
    for (int r = 1; r < R; ++r) {
        for (int E = 0; E < levels; ++E) {
            double best = -std::numeric_limits<double>::infinity();
            int arg = 0;
            for (int prev = 0; prev <= E; ++prev) {
                const double cand = table.entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(E - prev)].value +
                                    value[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(prev)];
                if (cand > best) {
                    best = cand;
                    arg = E - prev;
                }
            }
            value[static_cast<std::size_t>(r)][static_cast<std::size_t>(E)] = best;
            take[static_cast<std::size_t>(r)][static_cast<std::size_t>(E)] = arg;
        }
    }

    DpResult out;
    out.value = value[static_cast<std::size_t>(R - 1)][static_cast<std::size_t>(levels - 1)];
    out.plan.assign(static_cast<std::size_t>(R), SlotChoice::sdma());
    out.powers = PowerAllocation::Zero(users, bins);
    out.states.assign(static_cast<std::size_t>(R), 0);
    int E = levels - 1;
    for (int r = R - 1; r >= 0; --r) {
        out.states[static_cast<std::size_t>(r)] = E;
        const int k = take[static_cast<std::size_t>(r)][static_cast<std::size_t>(E)];
        const SlotEntry& entry = table.entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
        out.plan[static_cast<std::size_t>(r)] = entry.choice;
        scatter_powers(entry.choice, part.slots[static_cast<std::size_t>(r)], users, entry.powers, out.powers);
        out.converged = out.converged && entry.converged;
        E -= k;
    }
    out.table = std::move(table);
    return out;
}

DpResult dp_solve(const RsPartition& part, const EffectiveChannel& ch, double P, const std::vector<double>& alpha,
                  const DpOptions& options)
{
    SlotTable table = build_slot_table(part, ch, P, alpha, options);
    return dp_from_table(part, ch.users(), ch.bins(), std::move(table));
}

} // namespace otfs
