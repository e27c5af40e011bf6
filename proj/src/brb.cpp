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
#include "otfs/brb.hpp"

#include "otfs/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace otfs {

double box_objective(std::span<const double> w, std::span<const double> z)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        sum += w[k] * z[k];
    }
    return sum;
}

std::pair<BrbBox, BrbBox> branch(const BrbBox& box, std::span<const double> w)
{
    std::size_t dim = 0;
    double longest = -1.0;
    for (std::size_t k = 0; k < box.lower.size(); ++k) {
        const double side = box.upper[k] - box.lower[k];
        if (side > longest) {
            longest = side;
            dim = k;
        }
    }
    const double xi = longest / 2.0;
    BrbBox first = box;
    BrbBox second = box;
    first.upper[dim] = box.upper[dim] - xi;
    second.lower[dim] = box.lower[dim] + xi;
    first.f_ub = std::min(box.f_ub, box_objective(w, first.upper));
    second.f_ub = std::min(box.f_ub, box_objective(w, box.upper));
    return {std::move(first), std::move(second)};
}

std::optional<BrbBox> reduce(const BrbBox& box, double f_min, std::span<const double> w)
{
    if (box.f_ub < f_min) {
        return std::nullopt;
    }
    const std::size_t K = box.lower.size();
    const double at_upper = box_objective(w, box.upper);
    BrbBox out;
    out.lower.resize(K);
    out.upper.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double span = w[k] * (box.upper[k] - box.lower[k]);
        const double mu = span > 0.0 ? std::clamp((at_upper - f_min) / span, 0.0, 1.0) : 1.0;
        out.lower[k] = box.upper[k] - mu * (box.upper[k] - box.lower[k]);
    }
    const double at_lower = box_objective(w, out.lower);
    for (std::size_t k = 0; k < K; ++k) {
        const double span = w[k] * (box.upper[k] - out.lower[k]);
        const double v = span > 0.0 ? std::clamp((box.f_ub - at_lower) / span, 0.0, 1.0) : 1.0;
        out.upper[k] = out.lower[k] + v * (box.upper[k] - out.lower[k]);
    }
    out.f_ub = std::min(box.f_ub, box_objective(w, out.upper));
    if (out.f_ub < f_min) {
        return std::nullopt;
    }
    return out;
}

std::vector<double> target_weights(const SlotChoice& mode, const std::vector<int>& slot, const EffectiveChannel& ch,
                                   const std::vector<double>& alpha)
{
    const double mn = ch.bins();
    std::vector<double> w;
    for (std::size_t k = 0; k < slot.size(); ++k) {
        if (mode.is_noma()) {
            w.push_back(alpha.at(static_cast<std::size_t>(mode.strong)) / mn);
            w.push_back(alpha.at(static_cast<std::size_t>(mode.weak)) / mn);
        } else {
            for (int q = 0; q < ch.users(); ++q) {
                w.push_back(alpha.at(static_cast<std::size_t>(q)) / mn);
            }
        }
    }
    return w;
}

std::vector<double> achieved_targets(const SlotChoice& mode, const std::vector<int>& slot, const EffectiveChannel& ch,
                                     std::span<const double> powers)
{
    const int Q = ch.users();
    std::vector<double> z;
    z.reserve(powers.size());
    for (std::size_t k = 0; k < slot.size(); ++k) {
        const int b = slot[k];
        if (mode.is_noma()) {
            const double pq = powers[2 * k];
            const double pi = powers[2 * k + 1];
            z.push_back(std::log2(1.0 + ch.self(mode.strong, b) * pq));
            z.push_back(std::log2(1.0 + ch.self(mode.weak, b) * pi / (ch.gain(mode.weak, mode.strong, b) * pq + 1.0)));
        } else {
            for (int q = 0; q < Q; ++q) {
                double interference = 1.0;
                for (int i = 0; i < Q; ++i) {
                    if (i != q) {
                        interference += ch.gain(q, i, b) * powers[k * Q + i];
                    }
                }
                z.push_back(std::log2(1.0 + ch.self(q, b) * powers[k * Q + q] / interference));
            }
        }
    }
    return z;
}

void scatter_powers(const SlotChoice& mode, const std::vector<int>& slot, int users, std::span<const double> powers,
                    PowerAllocation& out)
{
    for (std::size_t k = 0; k < slot.size(); ++k) {
        const int b = slot[k];
        if (mode.is_noma()) {
            out(mode.strong, b) = powers[2 * k];
            out(mode.weak, b) = powers[2 * k + 1];
        } else {
            for (int q = 0; q < users; ++q) {
                out(q, b) = powers[k * static_cast<std::size_t>(users) + static_cast<std::size_t>(q)];
            }
        }
    }
}

namespace {

struct HeapOrder {
    bool operator()(const BrbBox& a, const BrbBox& b) const { return a.f_ub < b.f_ub; }
};

FeasibilityResult check(const SlotChoice& mode, std::span<const double> z, const EffectiveChannel& ch,
                        const std::vector<int>& slot, double budget)
{
    return mode.is_noma() ? min_power_noma(z, ch, slot, mode.strong, mode.weak, budget)
                          : min_power_sdma(z, ch, slot, budget);
}

} // namespace

BrbResult brb_maximize(const SlotChoice& mode, const std::vector<int>& slot, const EffectiveChannel& ch, double budget,
                       const std::vector<double>& alpha, const BrbOptions& options)
{
    const std::vector<double> w = target_weights(mode, slot, ch, alpha);
    const std::size_t K = w.size();

    BrbResult res;
    res.targets.assign(K, 0.0);
    res.powers.assign(K, 0.0);

    BrbBox root;
    root.lower.assign(K, 0.0);
    root.upper.resize(K);
    for (std::size_t k = 0; k < slot.size(); ++k) {
        const int b = slot[k];
        if (mode.is_noma()) {
            root.upper[2 * k] = std::log2(1.0 + ch.self(mode.strong, b) * budget);
            root.upper[2 * k + 1] = std::log2(1.0 + ch.self(mode.weak, b) * budget);
        } else {
            for (int q = 0; q < ch.users(); ++q) {
                root.upper[k * static_cast<std::size_t>(ch.users()) + static_cast<std::size_t>(q)] =
                    std::log2(1.0 + ch.self(q, b) * budget);
            }
        }
    }
    root.f_ub = box_objective(w, root.upper);

    double f_min = 0.0;
    if (options.warm_start.size() == K) {
        const FeasibilityResult warm = check(mode, options.warm_start, ch, slot, budget);
        if (warm.feasible) {
            f_min = box_objective(w, options.warm_start);
            res.targets = options.warm_start;
            res.powers = warm.min_powers;
        }
    }

    std::priority_queue<BrbBox, std::vector<BrbBox>, HeapOrder> heap;
    heap.push(root);
    double f_max = root.f_ub;

    auto report = [&](int iter) {
        if (f_min > f_max) {
            res.bounds_ordered = false;
        }
        if (options.observer) {
            options.observer({iter, f_min, f_max, heap.size()});
        }
    };
    report(0);

    int iter = 0;
    while (f_max > (1.0 + options.eps) * f_min && iter < options.max_iters) {
        if (heap.empty()) {
            break;
        }
        BrbBox top = heap.top();
        heap.pop();
        if (top.f_ub < f_min) {
            ++res.pruned_by_bound;
            f_max = heap.empty() ? f_min : std::max(f_min, heap.top().f_ub);
            continue;
        }
        ++iter;
        auto [first, second] = branch(top, w);
        for (BrbBox* child : {&first, &second}) {
            auto reduced = reduce(*child, f_min, w);
            if (!reduced) {
                ++res.pruned_by_bound;
                continue;
            }
            if (reduced->lower != top.lower) {
                const FeasibilityResult feas = check(mode, reduced->lower, ch, slot, budget);
                if (!feas.feasible) {
                    ++res.pruned_infeasible;
                    continue;
                }
                const double value = box_objective(w, reduced->lower);
                if (value > f_min) {
                    f_min = value;
                    res.targets = reduced->lower;
                    res.powers = feas.min_powers;
                }
            }
            heap.push(std::move(*reduced));
        }
        f_max = heap.empty() ? f_min : std::max(f_min, heap.top().f_ub);
        report(iter);
    }

    res.iterations = iter;
    res.f_min = f_min;
    res.f_max = f_max;
    res.converged = f_max <= (1.0 + options.eps) * f_min;

    const std::vector<double> achieved = achieved_targets(mode, slot, ch, res.powers);
    res.value = box_objective(w, achieved);
    if (options.keep_boxes) {
        while (!heap.empty()) {
            if (heap.top().f_ub >= f_min) {
                res.final_boxes.push_back(heap.top());
            }
            heap.pop();
        }
    }
    return res;
}

} // namespace otfs
