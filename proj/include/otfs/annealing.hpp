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

#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace otfs {

struct SaState {
    int t = 0;
    SdmaMask candidate;   // vector evaluated at step t
    SdmaMask base;        // vector the next flip starts from
    SdmaMask incumbent;   // best vector so far
    double best = -std::numeric_limits<double>::infinity();
    double temperature = 10.0;
    double zeta = 0.92;
    std::set<SdmaMask> visited;
};

struct SaTraceRow {
    int t = 0;
    double candidate = 0.0; // objective of the vector evaluated at t (-inf when infeasible)
    double best = 0.0;
    double temperature = 0.0;
};

/// Applies the incumbent rule (ties go to the candidate, unscored -inf candidates
/// are never adopted), picks the vector the
/// next flip starts from, and cools the temperature.
void sa_accept_and_update(SaState& state, double candidate_value, std::mt19937_64& rng);

/// Flips one uniformly drawn coordinate of 'from', redrawing until the result
/// is unvisited. Returns nullopt when every neighbor has been visited.
std::optional<SdmaMask> flip_random_rs(const SdmaMask& from, const std::set<SdmaMask>& visited,
                                       std::mt19937_64& rng);

struct SaOptions {
    double zeta = 0.92;
    int max_iters = 200; // the all-SDMA start counts as the first iteration
    double temperature_floor = 1e-3;
    std::uint64_t seed = 1;
    ScaOptions sca;
    std::function<void(const SaTraceRow&)> observer;

    static SaOptions from_config(const ScenarioConfig& config);
};

struct SaResult {
    bool feasible = false;
    ScaResult best;        // solution of the incumbent vector
    SdmaMask mask;
    double value = -std::numeric_limits<double>::infinity();
    int iterations = 0;    // vectors evaluated, the start included
    int sca_iterations = 0;
    std::vector<SaTraceRow> trace;
};

/// Simulated annealing over the per-slot SDMA flags with an SCA inner solve.
SaResult sa_search(const RsPartition& part, const EffectiveChannel& ch, const Demand& demand,
                   const SaOptions& options);

} // namespace otfs
