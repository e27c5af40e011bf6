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
#include "otfs/annealing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace otfs {

SaOptions SaOptions::from_config(const ScenarioConfig& config)
{
    SaOptions o;
    o.zeta = config.zeta;
    o.max_iters = config.sa_max_iters;
    o.temperature_floor = config.sa_temperature_floor;
    o.seed = config.rng_seed;
    o.sca = ScaOptions::from_config(config);
    return o;
}

void sa_accept_and_update(SaState& state, double candidate_value, std::mt19937_64& rng)
{
    const bool scored = candidate_value > -std::numeric_limits<double>::infinity();
    if (scored && state.best <= candidate_value) {
        state.incumbent = state.candidate;
        state.best = candidate_value;
        state.base = state.candidate;
    } else {
        const double keep = scored ? std::exp((candidate_value - state.best) / state.temperature) : 0.0;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        state.base = u(rng) < keep ? state.candidate : state.incumbent;
    }
    state.temperature *= state.zeta;
}

std::optional<SdmaMask> flip_random_rs(const SdmaMask& from, const std::set<SdmaMask>& visited,
                                       std::mt19937_64& rng)
{
    bool any = false;
    SdmaMask probe = from;
    for (std::size_t r = 0; r < from.size() && !any; ++r) {
        probe[r] = 1 - probe[r];
        any = !visited.contains(probe);
        probe[r] = from[r];
    }
    if (!any) {
        return std::nullopt;
    }
    std::uniform_int_distribution<std::size_t> pick(0, from.size() - 1);
    for (;;) {
        SdmaMask next = from;
        const std::size_t x = pick(rng);
        next[x] = 1 - next[x];
        if (!visited.contains(next)) {
            return next;
        }
    }
}

namespace {

int hamming(const SdmaMask& a, const SdmaMask& b)
{
    int d = 0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        d += a[r] != b[r];
    }
    return d;
}

// Unvisited vector closest to 'center', or nullopt once all 2^R are visited.
std::optional<SdmaMask> nearest_unvisited(const SdmaMask& center, const std::set<SdmaMask>& visited)
{
    const std::size_t R = center.size();
    if (R >= 63 || visited.size() < (std::size_t{1} << R)) {
        std::optional<SdmaMask> best;
        int best_d = static_cast<int>(R) + 1;
        if (R < 20) {
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << R); ++bits) {
                SdmaMask m(R);
                for (std::size_t r = 0; r < R; ++r) {
                    m[r] = static_cast<int>((bits >> r) & 1u);
                }
                const int d = hamming(center, m);
                if (d < best_d && !visited.contains(m)) {
                    best = m;
                    best_d = d;
                }
            }
            return best;
        }
    }
    return std::nullopt;
}

} // namespace

SaResult sa_search(const RsPartition& part, const EffectiveChannel& ch, const Demand& demand,
                   const SaOptions& options)
{
    if (!(options.zeta > 0.0 && options.zeta < 1.0)) {
        throw std::invalid_argument("cooling factor must lie in (0, 1)");
    }
    const double minus_inf = -std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(options.seed);
    SaResult out;

    auto solve = [&](const SdmaMask& mask) {
        ScaResult r = sca_solve_p3(mask, part, ch, demand, options.sca);
        out.sca_iterations += r.iterations;
        ++out.iterations;
        return r;
    };
    auto record = [&](const SaTraceRow& row) {
        out.trace.push_back(row);
        if (options.observer) {
            options.observer(row);
        }
    };

    SaState state;
    state.zeta = options.zeta;
    state.incumbent = SdmaMask(static_cast<std::size_t>(part.R), 1);
    state.base = state.incumbent;
    ScaResult best = solve(state.incumbent);
    state.best = best.feasible ? best.value : minus_inf;
    state.visited.insert(state.incumbent);
    state.temperature = std::max(state.best, 10.0);
    record({0, state.best, state.best, state.temperature});

    state.candidate = SdmaMask(static_cast<std::size_t>(part.R), 0);
    while (out.iterations < options.max_iters && state.temperature >= options.temperature_floor &&
           !state.visited.contains(state.candidate)) {
        ++state.t;
        ScaResult trial = solve(state.candidate);
        state.visited.insert(state.candidate);
        const double value = trial.feasible ? trial.value : minus_inf;
        const double before = state.best;
        record({state.t, value, std::max(before, value), state.temperature});
        sa_accept_and_update(state, value, rng);
        if (state.incumbent == state.candidate) {
            best = std::move(trial);
        }

        auto next = flip_random_rs(state.base, state.visited, rng);
        if (!next) {
            next = flip_random_rs(state.incumbent, state.visited, rng);
        }
        if (!next) {
            next = nearest_unvisited(state.incumbent, state.visited);
        }
        if (!next) {
            break;
        }
        state.candidate = *next;
    }

    out.mask = state.incumbent;
    out.value = state.best;
    out.feasible = state.best > minus_inf;
    out.best = std::move(best);
    return out;
}

} // namespace otfs
