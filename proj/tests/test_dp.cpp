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
#include "doctest.h"

#include "otfs/dp.hpp"
#include "support/instances.hpp"

#include <random>

using namespace otfs;

TEST_CASE("one slot reduces to a single optimal slot solve")
{
    std::mt19937_64 rng(2);
    const auto ch = oracle::random_gains(2, 2, rng);
    const auto part = partition_dd_grid(2, 1, 2, 1);
    DpOptions opts;
    opts.delta_p = 4;
    const auto dp = dp_solve(part, ch, 3.0, {1.0, 1.0}, opts);
    const auto direct = solve_rs_optimal(part.slots[0], ch, 3.0, {1.0, 1.0}, opts);
    CHECK(dp.value == doctest::Approx(direct.value).epsilon(1e-12));
}

TEST_CASE("two slots equal exhaustive enumeration of split points")
{
    std::mt19937_64 rng(4);
    const auto ch = oracle::random_gains(2, 2, rng);
    const auto part = partition_dd_grid(2, 1, 1, 1);
    DpOptions opts;
    opts.delta_p = 4;
    const double P = 2.0;
    const std::vector<double> alpha{1.0, 1.0};
    const auto dp = dp_solve(part, ch, P, alpha, opts);
    double best = 0.0;
    for (int k = 0; k <= 4; ++k) {
        const auto a = solve_rs_optimal(part.slots[0], ch, k * P / 4, alpha, opts);
        const auto b = solve_rs_optimal(part.slots[1], ch, (4 - k) * P / 4, alpha, opts);
        best = std::max(best, a.value + b.value);
    }
    // sweeps are warm-started, so their values can only be at least the cold solves
    CHECK(dp.value >= best - 1e-12);
    CHECK(dp.value <= best * 1.05 + 1e-12);
}

TEST_CASE("all-zero channels give zero")
{
    EffectiveChannel ch(2, 4);
    const auto part = partition_dd_grid(2, 2, 1, 2);
    DpOptions opts;
    opts.delta_p = 5;
    const auto dp = dp_solve(part, ch, 1.0, {1.0, 1.0}, opts);
    CHECK(dp.value == 0.0);
}

TEST_CASE("slot values are non-decreasing along the power grid")
{
    std::mt19937_64 rng(6);
    const auto ch = oracle::random_gains(3, 4, rng);
    const auto part = partition_dd_grid(2, 2, 1, 2);
    DpOptions opts;
    opts.delta_p = 12;
    const auto table = build_slot_table(part, ch, 5.0, {1.0, 1.0, 1.0}, opts);
    for (const auto& row : table.entries) {
        for (std::size_t k = 1; k < row.size(); ++k) {
            CHECK(row[k].value >= row[k - 1].value - 1e-12);
        }
    }
}

TEST_CASE("recovered plan and powers reproduce the value")
{
    std::mt19937_64 rng(7);
    const auto ch = oracle::random_gains(3, 4, rng);
    const auto part = partition_dd_grid(2, 2, 1, 2);
    DpOptions opts;
    opts.delta_p = 10;
    const std::vector<double> alpha{1.0, 2.0, 0.5};
    const double P = 4.0;
    const auto dp = dp_solve(part, ch, P, alpha, opts);
    CHECK(weighted_sum_rate(dp.plan, ch, dp.powers, part, alpha) == doctest::Approx(dp.value).epsilon(1e-12));
    CHECK(spent_power(dp.plan, dp.powers, part) <= P * (1.0 + 1e-9));
    CHECK(dp.states.back() == opts.delta_p);
}

TEST_CASE("serial and parallel tables are identical")
{
    std::mt19937_64 rng(9);
    const auto ch = oracle::random_gains(3, 4, rng);
    const auto part = partition_dd_grid(2, 2, 1, 2);
    DpOptions opts;
    opts.delta_p = 6;
    opts.exec = Exec::Serial;
    const auto a = dp_solve(part, ch, 2.0, {1.0, 1.0, 1.0}, opts);
    opts.exec = Exec::Parallel;
    const auto b = dp_solve(part, ch, 2.0, {1.0, 1.0, 1.0}, opts);
    CHECK(a.value == b.value);
    CHECK(a.plan == b.plan);
}
