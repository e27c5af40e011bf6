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

#include "otfs/rates.hpp"
#include "support/instances.hpp"

#include <cmath>
#include <random>

using namespace otfs;

namespace {

// Literal per-user rate sums written independently of the library loops.
double oracle_strong(const EffectiveChannel& ch, const PowerAllocation& p, const std::vector<int>& slot, int q)
{
    double s = 0.0;
    for (int b : slot) {
        s += std::log2(1.0 + ch.gain(q, q, b) * p(q, b));
    }
    return s / ch.bins();
}

double oracle_weak(const EffectiveChannel& ch, const PowerAllocation& p, const std::vector<int>& slot, int q, int i)
{
    double s = 0.0;
    for (int b : slot) {
        const double sinr = ch.gain(i, i, b) * p(i, b) / (ch.gain(i, q, b) * p(q, b) + 1.0);
        s += std::log2(1.0 + sinr);
    }
    return s / ch.bins();
}

double oracle_sdma(const EffectiveChannel& ch, const PowerAllocation& p, const std::vector<int>& slot, int q)
{
    double s = 0.0;
    for (int b : slot) {
        double noise_plus = 1.0;
        for (int i = 0; i < ch.users(); ++i) {
            noise_plus += i == q ? 0.0 : ch.gain(q, i, b) * p(i, b);
        }
        s += std::log2(1.0 + ch.gain(q, q, b) * p(q, b) / noise_plus);
    }
    return s / ch.bins();
}

PowerAllocation random_powers(int Q, int bins, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 2.0);
    PowerAllocation p(Q, bins);
    for (int q = 0; q < Q; ++q) {
        for (int b = 0; b < bins; ++b) {
            p(q, b) = u(rng);
        }
    }
    return p;
}

} // namespace

TEST_CASE("zero powers give zero rates")
{
    std::mt19937_64 rng(1);
    const auto ch = oracle::random_gains(3, 8, rng);
    const PowerAllocation p = PowerAllocation::Zero(3, 8);
    const auto [a, b] = noma_pair_rates(ch, p, {0, 1}, 0, 2);
    CHECK(a == 0.0);
    CHECK(b == 0.0);
    for (double r : sdma_rates(ch, p, {0, 1})) {
        CHECK(r == 0.0);
    }
    const auto part = partition_dd_grid(2, 4, 1, 2);
    const AccessPlan plan(4, SlotChoice::sdma());
    CHECK(rs_weighted_sum(plan, ch, p, part, {1.0, 1.0, 1.0}, 2) == 0.0);
}

TEST_CASE("hand-computed NOMA pair rates")
{
    EffectiveChannel ch(2, 8);
    ch.gain(0, 0, 0) = 3.0;
    ch.gain(1, 1, 0) = 3.0;
    ch.gain(1, 0, 0) = 2.0;
    PowerAllocation p = PowerAllocation::Zero(2, 8);
    p(0, 0) = 1.0;
    p(1, 0) = 1.0;
    const auto [cq, ci] = noma_pair_rates(ch, p, {0}, 0, 1);
    CHECK(cq == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ci == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("hand-computed symmetric SDMA bin")
{
    EffectiveChannel ch(2, 1);
    ch.gain(0, 0, 0) = ch.gain(1, 1, 0) = 4.0;
    ch.gain(0, 1, 0) = ch.gain(1, 0, 0) = 1.0;
    PowerAllocation p = PowerAllocation::Constant(2, 1, 1.0);
    const auto r = sdma_rates(ch, p, {0});
    CHECK(r[0] == doctest::Approx(std::log2(3.0))); // 4 / (1 + 1)
    CHECK(r[1] == doctest::Approx(std::log2(3.0)));
}

TEST_CASE("rates agree with an independent evaluation")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int Q = 2 + trial % 3;
        const auto ch = oracle::random_gains(Q, 8, rng);
        const auto p = random_powers(Q, 8, rng);
        const std::vector<int> slot{1, 4, 6};
        for (const auto& [q, i] : user_pairs(Q)) {
            const auto [cq, ci] = noma_pair_rates(ch, p, slot, q, i);
            CHECK(std::abs(cq - oracle_strong(ch, p, slot, q)) < 1e-12);
            CHECK(std::abs(ci - oracle_weak(ch, p, slot, q, i)) < 1e-12);
        }
        const auto s = sdma_rates(ch, p, slot);
        for (int q = 0; q < Q; ++q) {
            CHECK(std::abs(s[static_cast<std::size_t>(q)] - oracle_sdma(ch, p, slot, q)) < 1e-12);
        }
    }
}

TEST_CASE("SDMA with one powered user is the interference-free rate")
{
    std::mt19937_64 rng(5);
    const auto ch = oracle::random_gains(3, 4, rng);
    PowerAllocation p = PowerAllocation::Zero(3, 4);
    p(1, 2) = 0.7;
    p(1, 3) = 1.3;
    const auto s = sdma_rates(ch, p, {2, 3});
    CHECK(s[1] == oracle_strong(ch, p, {2, 3}, 1));
    CHECK(s[0] == 0.0);
    CHECK(s[2] == 0.0);
}

TEST_CASE("weighted sums and user totals over a two-slot plan")
{
    std::mt19937_64 rng(8);
    const auto ch = oracle::random_gains(3, 4, rng);
    const auto p = random_powers(3, 4, rng);
    const auto part = partition_dd_grid(2, 2, 1, 2); // slots {0,2} and {1,3}
    const AccessPlan plan{SlotChoice::noma(0, 2), SlotChoice::sdma()};
    const std::vector<double> alpha{1.0, 2.0, 0.5};
    const auto& s0 = part.slots[0];
    const auto& s1 = part.slots[1];
    const double c0 = 1.0 * oracle_strong(ch, p, s0, 0) + 0.5 * oracle_weak(ch, p, s0, 0, 2);
    double c1 = 0.0;
    for (int q = 0; q < 3; ++q) {
        c1 += alpha[static_cast<std::size_t>(q)] * oracle_sdma(ch, p, s1, q);
    }
    CHECK(rs_weighted_sum(plan, ch, p, part, alpha, 0) == doctest::Approx(c0).epsilon(1e-13));
    CHECK(rs_weighted_sum(plan, ch, p, part, alpha, 1) == doctest::Approx(c1).epsilon(1e-13));
    CHECK(weighted_sum_rate(plan, ch, p, part, alpha) == doctest::Approx(c0 + c1).epsilon(1e-13));

    CHECK(user_total_rate(plan, p, ch, part, 0) ==
          doctest::Approx(oracle_strong(ch, p, s0, 0) + oracle_sdma(ch, p, s1, 0)).epsilon(1e-13));
    CHECK(user_total_rate(plan, p, ch, part, 1) == doctest::Approx(oracle_sdma(ch, p, s1, 1)).epsilon(1e-13));
    CHECK(user_total_rate(plan, p, ch, part, 2) ==
          doctest::Approx(oracle_weak(ch, p, s0, 0, 2) + oracle_sdma(ch, p, s1, 2)).epsilon(1e-13));

    // a user left out of every slot gets nothing
    const AccessPlan pairs_only{SlotChoice::noma(0, 2), SlotChoice::noma(0, 2)};
    CHECK(user_total_rate(pairs_only, p, ch, part, 1) == 0.0);
    // the slot's unserved users do not spend power
    double expected = 0.0;
    for (int b : s0) {
        expected += p(0, b) + p(2, b);
    }
    for (int b : s1) {
        expected += p.col(b).sum();
    }
    CHECK(spent_power(plan, p, part) == doctest::Approx(expected));
}

TEST_CASE("one user with unit weights: slot sum equals that user's slot rate")
{
    std::mt19937_64 rng(3);
    const auto ch = oracle::random_gains(1, 4, rng);
    const auto p = random_powers(1, 4, rng);
    const auto part = partition_dd_grid(2, 2, 2, 1);
    const AccessPlan plan{SlotChoice::sdma(), SlotChoice::sdma()};
    CHECK(rs_weighted_sum(plan, ch, p, part, {1.0}, 0) + rs_weighted_sum(plan, ch, p, part, {1.0}, 1) ==
          doctest::Approx(user_total_rate(plan, p, ch, part, 0)).epsilon(1e-14));
}

TEST_CASE("rates move monotonically with the strong user's power")
{
    std::mt19937_64 rng(21);
    const auto ch = oracle::random_gains(2, 1, rng);
    PowerAllocation p = PowerAllocation::Constant(2, 1, 0.5);
    auto prev = noma_pair_rates(ch, p, {0}, 0, 1);
    for (int k = 1; k <= 20; ++k) {
        p(0, 0) = 0.5 + 0.1 * k;
        const auto now = noma_pair_rates(ch, p, {0}, 0, 1);
        CHECK(now.first > prev.first);
        CHECK(now.second < prev.second);
        CHECK(now.second >= 0.0);
        prev = now;
    }
}

TEST_CASE("decoding-order check")
{
    EffectiveChannel ch(2, 2);
    ch.gain(0, 0, 0) = ch.gain(0, 0, 1) = 2.0;
    ch.gain(0, 1, 0) = ch.gain(0, 1, 1) = 1.0;
    PowerAllocation p = PowerAllocation::Zero(2, 2);
    CHECK(check_sic_order(ch, p, {0, 1}, 0, 1));
    p(0, 0) = 1e6;
    CHECK_FALSE(check_sic_order(ch, p, {0, 1}, 0, 1));
    p(0, 0) = 1.0;
    p(1, 0) = 2.0; // equality on bin 0
    CHECK(check_sic_order(ch, p, {0}, 0, 1));
    p(0, 0) = 1.0 + 1e-12;
    CHECK(check_sic_order(ch, p, {0}, 0, 1));
    CHECK_FALSE(check_sic_order(ch, p, {0}, 0, 1, 0.0));
}

TEST_CASE("pair enumeration")
{
    const auto pairs = user_pairs(4);
    REQUIRE(pairs.size() == 6);
    CHECK(pairs.front() == std::pair{0, 1});
    CHECK(pairs.back() == std::pair{2, 3});
    CHECK(user_pairs(1).empty());
}
