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

#include "otfs/barrier.hpp"
#include "support/waterfill.hpp"

#include <cmath>
#include <random>

using namespace otfs::convex;

namespace {

Inequality linear_row(std::vector<Term> terms, double constant)
{
    Inequality c;
    c.linear.terms = std::move(terms);
    c.linear.constant = constant;
    return c;
}

Problem water_filling_problem(const std::vector<double>& gains, double P)
{
    Problem p;
    p.n = static_cast<int>(gains.size());
    std::vector<Term> budget;
    for (int k = 0; k < p.n; ++k) {
        p.objective_logs.push_back({k, gains[static_cast<std::size_t>(k)], 1.0});
        p.inequalities.push_back(linear_row({{k, -1.0}}, 0.0));
        budget.push_back({k, 1.0});
    }
    p.inequalities.push_back(linear_row(budget, -P));
    return p;
}

} // namespace

TEST_CASE("symmetric two-channel split")
{
    const auto p = water_filling_problem({1.0, 1.0}, 1.0);
    const auto res = maximize(p, Eigen::Vector2d(0.1, 0.1));
    CHECK(res.converged);
    CHECK(res.x[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(res.x[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("random water-filling instances match the closed form")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> logu(-3.0, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 7;
        std::vector<double> gains;
        for (int k = 0; k < n; ++k) {
            gains.push_back(std::pow(10.0, logu(rng)));
        }
        const double P = std::pow(10.0, logu(rng));
        const auto p = water_filling_problem(gains, P);
        const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(n, 0.5 * P / n);
        const auto res = maximize(p, x0);
        REQUIRE(res.converged);
        const auto exact = otfs::oracle::water_filling(gains, P);
        double best = 0.0;
        for (int k = 0; k < n; ++k) {
            best += std::log1p(gains[static_cast<std::size_t>(k)] * exact[static_cast<std::size_t>(k)]);
        }
        CHECK(res.objective == doctest::Approx(best).epsilon(1e-7));
        CHECK(res.objective <= best + 1e-9);
    }
}

TEST_CASE("equality constraints are kept along the path")
{
    Problem p;
    p.n = 3;
    Affine sum;
    for (int k = 0; k < 3; ++k) {
        p.objective_logs.push_back({k, 1.0, static_cast<double>(k + 1)});
        p.inequalities.push_back(linear_row({{k, -1.0}}, 0.0));
        sum.terms.push_back({k, 1.0});
    }
    sum.constant = -4.5;
    p.equalities.push_back(sum);
    const auto res = maximize(p, Eigen::Vector3d(1.0, 1.5, 2.0));
    REQUIRE(res.converged);
    // weights 1:2:3 on log(1 + x) with x summing to 4.5: 1 + x_k = 1.25 (k + 1)
    CHECK(res.x[0] == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(res.x[1] == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(res.x[2] == doctest::Approx(2.75).epsilon(1e-6));
    CHECK(res.x.sum() == doctest::Approx(4.5).epsilon(1e-12));
}

TEST_CASE("a squared row bounds a linear objective")
{
    Problem p;
    p.n = 2;
    p.objective_linear.terms = {{0, 1.0}, {1, 1.0}};
    Inequality c;
    c.square = Affine{{{0, 1.0}}, 0.0};
    c.linear.terms = {{1, 1.0}};
    c.linear.constant = -1.0;
    p.inequalities.push_back(c);
    const auto res = maximize(p, Eigen::Vector2d(0.0, 0.0));
    REQUIRE(res.converged);
    CHECK(res.x[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(res.x[1] == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("a log floor row sets the smallest admissible point")
{
    Problem p;
    p.n = 1;
    p.objective_linear.terms = {{0, -1.0}};
    Inequality c;
    c.linear.constant = 1.0;
    c.logs.push_back({0, 1.0, 1.0});
    p.inequalities.push_back(c);
    p.inequalities.push_back(linear_row({{0, 1.0}}, -10.0));
    const auto res = maximize(p, Eigen::VectorXd::Constant(1, 5.0));
    REQUIRE(res.converged);
    CHECK(res.x[0] == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-6));
}

TEST_CASE("phase one recovers an interior point or reports none")
{
    Problem p;
    p.n = 2;
    p.inequalities.push_back(linear_row({{0, -1.0}}, 1.0));            // x >= 1
    p.inequalities.push_back(linear_row({{1, -1.0}}, 2.0));            // y >= 2
    p.inequalities.push_back(linear_row({{0, 1.0}, {1, 1.0}}, -4.0));  // x + y <= 4
    const auto start = find_strictly_feasible(p, Eigen::Vector2d(0.0, 0.0));
    REQUIRE(start.feasible);
    CHECK(p.strictly_feasible(start.x));

    p.inequalities.push_back(linear_row({{0, 1.0}, {1, 1.0}}, -2.5)); // x + y <= 2.5 clashes
    CHECK_FALSE(find_strictly_feasible(p, Eigen::Vector2d(0.0, 0.0)).feasible);
}
