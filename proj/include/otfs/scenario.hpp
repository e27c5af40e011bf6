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

#include "otfs/config.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace otfs {

/// Resource bins are indexed 0-based as b = k * M + l (k Doppler, l delay).
struct RsPartition {
    int R = 0;
    std::vector<std::vector<int>> slots;
};

/// Splits the M x N grid into delta_N x delta_M rectangles, row-major over
/// (Doppler block, delay block) origins. Throws ConfigError on non-divisible sizes.
RsPartition partition_dd_grid(int M, int N, int delta_M, int delta_N);

double path_loss_db(double distance_m);

struct PathParams {
    std::complex<double> gain; // unnormalized; the 1/sqrt(L) factor is applied at synthesis
    int delay = 0;             // integer delay bin
    int doppler = 0;           // nearest integer Doppler index
    double doppler_frac = 0.0; // in [-0.5, 0.5]
    double angle = 0.0;        // departure angle, radians
};

struct UserChannel {
    double distance = 0.0;
    double variance = 0.0; // linear path-loss power
    double noise = 0.0;    // watts
    std::vector<PathParams> paths;
};

struct ChannelParams {
    int M = 0;
    int N = 0;
    int D = 0;
    int leakage_window = 0;
    std::vector<UserChannel> users; // sorted by non-increasing variance
};

/// Splits a real Doppler index into its nearest integer and the fraction,
/// rounding exact halves toward zero.
void split_doppler(double doppler_index, int& integer, double& fraction);

ChannelParams sample_scenario(const ScenarioConfig& config, std::uint64_t seed);

} // namespace otfs
