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

#include "otfs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace otfs {

RsPartition partition_dd_grid(int M, int N, int delta_M, int delta_N)
{
    if (M <= 0 || N <= 0 || delta_M <= 0 || delta_N <= 0 || M % delta_M != 0 || N % delta_N != 0) {
        throw ConfigError("resource slots must tile the delay-Doppler grid exactly");
    }
    RsPartition part;
    for (int k0 = 0; k0 < N; k0 += delta_N) {
        for (int l0 = 0; l0 < M; l0 += delta_M) {
            std::vector<int> bins;
            bins.reserve(static_cast<std::size_t>(delta_M * delta_N));
            for (int k = k0; k < k0 + delta_N; ++k) {
                for (int l = l0; l < l0 + delta_M; ++l) {
                    bins.push_back(k * M + l);
                }
            }
            part.slots.push_back(std::move(bins));
        }
    }
    part.R = static_cast<int>(part.slots.size());
    return part;
}

double path_loss_db(double distance_m)
{
    if (!(distance_m > 0.0)) {
        throw std::domain_error("path loss needs a positive distance");
    }
    return -30.5 - 36.7 * std::log10(distance_m);
}

void split_doppler(double doppler_index, int& integer, double& fraction)
{
    const double k = doppler_index > 0.0 ? std::ceil(doppler_index - 0.5) : std::floor(doppler_index + 0.5);
    integer = static_cast<int>(k);
    fraction = doppler_index - k;
}

ChannelParams sample_scenario(const ScenarioConfig& config, std::uint64_t seed)
{
    config.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    const double pi = std::numbers::pi;
    const int max_delay = static_cast<int>(std::floor(config.delay_max * config.M));

    ChannelParams params;
    params.M = config.M;
    params.N = config.N;
    params.D = config.D;
    params.leakage_window = config.N_ql;
    params.users.resize(static_cast<std::size_t>(config.Q));

    for (auto& user : params.users) {
        user.distance = uniform(config.distance_min, config.distance_max);
        user.variance = std::pow(10.0, path_loss_db(user.distance) / 10.0);
        const double mean_angle = uniform(0.0, pi / 2.0);
        const double amplitude = std::sqrt(user.variance / 2.0);
        user.paths.resize(static_cast<std::size_t>(config.L_q));
        for (auto& path : user.paths) {
            const double re = normal(rng);
            const double im = normal(rng);
            path.gain = {amplitude * re, amplitude * im};
            path.angle = mean_angle + uniform(-pi / 8.0, pi / 8.0);
            const double doppler = uniform(-config.doppler_max, config.doppler_max) * config.N;
            split_doppler(doppler, path.doppler, path.doppler_frac);
            const double delay = uniform(0.0, config.delay_max) * config.M;
            path.delay = std::min(static_cast<int>(std::lround(delay)), max_delay);
        }
    }

    std::stable_sort(params.users.begin(), params.users.end(),
                     [](const UserChannel& a, const UserChannel& b) { return a.variance > b.variance; });
    for (int q = 0; q < config.Q; ++q) {
        params.users[static_cast<std::size_t>(q)].noise = config.noise(q);
    }
    return params;
}

} // namespace otfs
