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
#include "otfs/sca.hpp"
#include "support/instances.hpp"
#include "support/waterfill.hpp"

#include <cmath>
#include <random>
#include <utility>

using namespace otfs;

namespace {

Demand plain_demand(int Q, double P, double floor = 0.0)
{
    return {P, std::vector<double>(static_cast<std::size_t>(Q), 1.0),
            std::vector<double>(static_cast<std::size_t>(Q), floor)};
}

void check_consistent(const ScaResult& r, const RsPartition& part, const EffectiveChannel& ch, double P)
{
    REQUIRE(static_cast<int>(r.plan.size()) == part.R);
    CHECK(spent_power(r.plan, r.powers, part) <= P * (1.0 + 1e-9));
    for (int rs = 0; rs < part.R; ++rs) {
        const auto& c = r.plan[static_cast<std::size_t>(rs)];
        const auto& slot = part.slots[static_cast<std::size_t>(rs)];
        for (int b : slot) {
            for (int q = 0; q < ch.users(); ++q) {
                CHECK(r.powers(q, b) >= 0.0);
                if (!c.serves(q)) {
                    CHECK(r.powers(q, b) == 0.0);
                }
            }
        }
        if (c.is_noma()) {
            CHECK(c.strong < c.weak);
            CHECK(check_sic_order(ch, r.powers, slot, c.strong, c.weak, 1e-7 * (1.0 + P)));
        }
    }
}

bool non_decreasing(const std::vector<double>& trace, double tol)
{
    for (std::size_t k = 1; k < trace.size(); ++k) {
        if (trace[k] < trace[k - 1] - tol) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("single user reduces to water-filling")
{
    std::mt19937_64 rng(31);
    const auto part = partition_dd_grid(2, 4, 1, 2);
    for (double P : {0.3, 3.0, 40.0}) {
        for (int rep = 0; rep < 3; ++rep) {
            const auto ch = oracle::random_gains(1, 8, rng, 0.05, 20.0);
            std::vector<double> g;
            for (int b = 0; b < 8; ++b) {
                g.push_back(ch.self(0, b));
            }
            const double expected = oracle::water_filling_rate(g, P, 8);
            const auto r = sca_solve_p3(SdmaMask(4, 1), part, ch, plain_demand(1, P), {});
            REQUIRE(r.feasible);
            CHECK(std::abs(r.value - expected) <= 1e-4 * expected);
        }
    }
}

TEST_CASE("unreachable floors are reported infeasible")
{
    std::mt19937_64 rng(3);
    const auto ch = oracle::random_gains(2, 4, rng);
    const auto part = partition_dd_grid(2, 2, 1, 2);
    const auto r = sca_solve_p3(SdmaMask{0, 1}, part, ch, plain_demand(2, 1.0, 50.0), {});
    CHECK_FALSE(r.feasible);
}

TEST_CASE("a single user cannot fill a NOMA slot")
{
    std::mt19937_64 rng(3);
    const auto ch = oracle::random_gains(1, 4, rng);
    const auto part = partition_dd_grid(2, 2, 1, 2);
    CHECK_FALSE(sca_solve_p3(SdmaMask{0, 1}, part, ch, plain_demand(1, 1.0), {}).feasible);
}

TEST_CASE("zero budget gives zero powers")
{
    std::mt19937_64 rng(4);
    const auto ch = oracle::random_gains(3, 4, rng);
    const auto part = partition_dd_grid(2, 2, 1, 2);
    const auto r = sca_solve_p3(SdmaMask{0, 1}, part, ch, plain_demand(3, 0.0), {});
    CHECK(r.feasible);
    CHECK(r.value == 0.0);
    CHECK(r.powers.isZero(0.0));
}

TEST_CASE("two users on one two-bin slot come close to the global method")
{
    // the balanced split tracks the global optimum more tightly than the unit one
    for (const auto& [split, ratio] : {std::pair{DcSplit::Balanced, 0.98}, std::pair{DcSplit::Literal, 0.9}}) {
        std::mt19937_64 rng(41);
        const auto part = partition_dd_grid(2, 1, 2, 1);
        ScaOptions opts;
        opts.dc_split = split;
        for (int rep = 0; rep < 5; ++rep) {
            const auto ch = oracle::random_gains(2, 2, rng, 1.0, 200.0);
            const double P = 2.0;
            DpOptions dp_opts;
            dp_opts.delta_p = 10;
            const double global = dp_solve(part, ch, P, {1.0, 1.0}, dp_opts).value;
            double best = 0.0;
            for (int mode : {0, 1}) {
                const auto r = sca_solve_p3(SdmaMask{mode}, part, ch, plain_demand(2, P), opts);
                REQUIRE(r.feasible);
                check_consistent(r, part, ch, P);
                best = std::max(best, r.value);
            }
            CHECK(best >= ratio * global);
        }
    }
}

TEST_CASE("objective traces never decrease and the pair choice ends near binary")
{
    std::mt19937_64 rng(52);
    const auto part = partition_dd_grid(2, 2, 1, 1);
    for (int rep = 0; rep < 3; ++rep) {
        const auto ch = oracle::random_gains(3, 4, rng, 1.0, 500.0);
        std::vector<double> observed;
        ScaOptions opts;
        opts.observer = [&](const ScaTraceRow& row) {
            if (row.stage == ScaTraceRow::Stage::Relaxed) {
                observed.push_back(row.objective);
            }
        };
        const auto r = sca_solve_p3(SdmaMask{0, 1, 0, 0}, part, ch, plain_demand(3, 3.0), opts);
        REQUIRE(r.feasible);
        check_consistent(r, part, ch, 3.0);
        CHECK(non_decreasing(r.relaxed_trace, 1e-8));
        CHECK(non_decreasing(r.fixed_trace, 1e-8));
        CHECK(observed == r.relaxed_trace);
        CHECK(r.binarity <= 1e-3);
        CHECK(r.bigm_gap < 1e-6 * 3.0);
        CHECK(r.plan[1] == SlotChoice::sdma());
        CHECK(r.value == doctest::Approx(weighted_sum_rate(r.plan, ch, r.powers, part, {1, 1, 1})).epsilon(1e-12));
    }
}

TEST_CASE("floors are met on every user when the answer is feasible")
{
    std::mt19937_64 rng(63);
    const auto part = partition_dd_grid(2, 2, 1, 1);
    int feasible = 0;
    for (int rep = 0; rep < 3; ++rep) {
        const auto ch = oracle::random_gains(3, 4, rng, 5.0, 500.0);
        const Demand demand = plain_demand(3, 3.0, 0.15);
        const auto r = sca_solve_p3(SdmaMask{0, 0, 0, 0}, part, ch, demand, {});
        CHECK(uncovered_users(r.plan, demand).empty());
        if (r.feasible) {
            ++feasible;
            check_consistent(r, part, ch, 3.0);
            for (double rate : r.user_rates) {
                CHECK(rate >= 0.15 - kRateFloorTolerance);
            }
        }
    }
    CHECK(feasible > 0);
}

TEST_CASE("fixed-plan solve honors the plan and the budget")
{
    std::mt19937_64 rng(71);
    const auto ch = oracle::random_gains(3, 8, rng, 1.0, 100.0);
    const auto part = partition_dd_grid(2, 4, 1, 2);
    const AccessPlan plan{SlotChoice::noma(0, 1), SlotChoice::sdma(), SlotChoice::noma(1, 2), SlotChoice::noma(0, 2)};
    const auto r = sca_power_only(plan, part, ch, plain_demand(3, 5.0), {});
    REQUIRE(r.feasible);
    CHECK(r.plan == plan);
    check_consistent(r, part, ch, 5.0);
    CHECK(non_decreasing(r.fixed_trace, 1e-8));
    // the budget binds at the optimum of an increasing objective
    CHECK(spent_power(plan, r.powers, part) == doctest::Approx(5.0).epsilon(1e-4));
}
