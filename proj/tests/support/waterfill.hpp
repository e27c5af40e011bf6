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

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace otfs::oracle {

/// Closed-form water-filling: maximize sum log(1 + g_k p_k) with sum p_k <= P.
/// Returns the power per channel.
inline std::vector<double> water_filling(const std::vector<double>& gains, double P)
{
    std::vector<double> inv;
    for (double g : gains) {
        if (g > 0.0) {
            inv.push_back(1.0 / g);
        }
    }
    std::sort(inv.begin(), inv.end());
    // largest active set whose water level stays above every member's floor
    double level = 0.0;
    for (std::size_t k = inv.size(); k >= 1; --k) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            sum += inv[j];
        }
        level = (P + sum) / static_cast<double>(k);
        if (level > inv[k - 1]) {
            break;
        }
    }
    std::vector<double> p;
    for (double g : gains) {
        p.push_back(g > 0.0 ? std::max(0.0, level - 1.0 / g) : 0.0);
    }
    return p;
}

/// Sum of log2(1 + g p) over channels, divided by the grid size.
inline double water_filling_rate(const std::vector<double>& gains, double P, int grid)
{
    const auto p = water_filling(gains, P);
    double rate = 0.0;
    for (std::size_t k = 0; k < gains.size(); ++k) {
        rate += std::log2(1.0 + gains[k] * p[k]);
    }
    return rate / grid;
}

} // namespace otfs::oracle
