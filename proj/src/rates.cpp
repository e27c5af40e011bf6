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
#include "otfs/rates.hpp"

#include <cmath>
#include <numbers>

namespace otfs {

namespace {

double log2p1(double x) { return std::log1p(x) / std::numbers::ln2; }

} // namespace

std::vector<std::pair<int, int>> user_pairs(int Q)
{
    std::vector<std::pair<int, int>> out;
    for (int q = 0; q < Q; ++q) {
        for (int i = q + 1; i < Q; ++i) {
            out.emplace_back(q, i);
        }
    }
    return out;
}

std::string describe(const SlotChoice& choice)
{
    if (!choice.is_noma()) {
        return "SDMA";
    }
    return "NOMA(" + std::to_string(choice.strong) + "," + std::to_string(choice.weak) + ")";
}

double sic_tolerance(double scale) { return 1e-9 * (1.0 + scale); }

std::pair<double, double> noma_pair_rates(const EffectiveChannel& ch, const PowerAllocation& p,
                                          const std::vector<int>& slot, int q, int i)
{
    double strong = 0.0;
    double weak = 0.0;
    for (int b : slot) {
        strong += log2p1(ch.self(q, b) * p(q, b));
        weak += log2p1(ch.self(i, b) * p(i, b) / (ch.gain(i, q, b) * p(q, b) + 1.0));
    }
    const double mn = ch.bins();
    return {strong / mn, weak / mn};
}

std::vector<double> sdma_rates(const EffectiveChannel& ch, const PowerAllocation& p, const std::vector<int>& slot)
{
    const int Q = ch.users();
    std::vector<double> rates(static_cast<std::size_t>(Q), 0.0);
    for (int q = 0; q < Q; ++q) {
        double acc = 0.0;
        for (int b : slot) {
            double interference = 1.0;
            for (int i = 0; i < Q; ++i) {
                if (i != q) {
                    interference += ch.gain(q, i, b) * p(i, b);
                }
            }
            acc += log2p1(ch.self(q, b) * p(q, b) / interference);
        }
        rates[static_cast<std::size_t>(q)] = acc / ch.bins();
    }
    return rates;
}

double rs_weighted_sum(const AccessPlan& plan, const EffectiveChannel& ch, const PowerAllocation& p,
                       const RsPartition& part, const std::vector<double>& alpha, int r)
{
    const auto& slot = part.slots.at(static_cast<std::size_t>(r));
    const SlotChoice& choice = plan.at(static_cast<std::size_t>(r));
    if (choice.is_noma()) {
        const auto [cq, ci] = noma_pair_rates(ch, p, slot, choice.strong, choice.weak);
        return alpha.at(static_cast<std::size_t>(choice.strong)) * cq + alpha.at(static_cast<std::size_t>(choice.weak)) * ci;
    }
    const auto rates = sdma_rates(ch, p, slot);
    double sum = 0.0;
    for (std::size_t q = 0; q < rates.size(); ++q) {
        sum += alpha.at(q) * rates[q];
    }
    return sum;
}

double weighted_sum_rate(const AccessPlan& plan, const EffectiveChannel& ch, const PowerAllocation& p,
                         const RsPartition& part, const std::vector<double>& alpha)
{
    double sum = 0.0;
    for (int r = 0; r < part.R; ++r) {
        sum += rs_weighted_sum(plan, ch, p, part, alpha, r);
    }
    return sum;
}

double user_total_rate(const AccessPlan& plan, const PowerAllocation& p, const EffectiveChannel& ch,
                       const RsPartition& part, int q)
{
    double total = 0.0;
    for (int r = 0; r < part.R; ++r) {
        const SlotChoice& choice = plan.at(static_cast<std::size_t>(r));
        const auto& slot = part.slots[static_cast<std::size_t>(r)];
        if (choice.is_noma()) {
            if (choice.strong == q || choice.weak == q) {
                const auto [cq, ci] = noma_pair_rates(ch, p, slot, choice.strong, choice.weak);
                total += choice.strong == q ? cq : ci;
            }
        } else {
            total += sdma_rates(ch, p, slot)[static_cast<std::size_t>(q)];
        }
    }
    return total;
}

bool check_sic_order(const EffectiveChannel& ch, const PowerAllocation& p, const std::vector<int>& slot, int q,
                     int i, double tol)
{
    for (int b : slot) {
        const double own = ch.self(q, b) * p(q, b);
        const double other = ch.gain(q, i, b) * p(i, b);
        const double t = tol < 0.0 ? sic_tolerance(std::max(own, other)) : tol;
        if (own > other + t) {
            return false;
        }
    }
    return true;
}

double spent_power(const AccessPlan& plan, const PowerAllocation& p, const RsPartition& part)
{
    double total = 0.0;
    for (int r = 0; r < part.R; ++r) {
        const SlotChoice& choice = plan.at(static_cast<std::size_t>(r));
        for (int b : part.slots[static_cast<std::size_t>(r)]) {
            for (int q = 0; q < p.rows(); ++q) {
                if (choice.serves(q)) {
                    total += p(q, b);
                }
            }
        }
    }
    return total;
}

} // namespace otfs
