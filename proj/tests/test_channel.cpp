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

#include "otfs/channel.hpp"
#include "otfs/scenario.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>

using namespace otfs;

namespace {

ChannelParams single_path(int M, int N, int D, int k, int l, double frac, double angle)
{
    ChannelParams p;
    p.M = M;
    p.N = N;
    p.D = D;
    p.leakage_window = 5;
    UserChannel u;
    u.noise = 1.0;
    u.variance = 1.0;
    u.paths.push_back({{1.0, 0.0}, l, k, frac, angle});
    p.users.push_back(u);
    return p;
}

ChannelParams random_params(int M, int N, int D, std::uint64_t seed, bool fractional)
{
    ScenarioConfig cfg;
    cfg.M = M;
    cfg.N = N;
    cfg.D = D;
    cfg.Q = 2;
    cfg.delta_M = 1;
    cfg.delta_N = 1;
    auto params = sample_scenario(cfg, seed);
    if (!fractional) {
        for (auto& u : params.users) {
            for (auto& path : u.paths) {
                path.doppler_frac = 0.0;
            }
        }
    }
    return params;
}

double max_abs(const Eigen::MatrixXcd& A) { return A.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("zero delay and Doppler path gives the identity")
{
    const auto p = single_path(4, 4, 1, 0, 0, 0.0, 0.0);
    const auto H = build_dd_channel_matrix(p, 0, 0);
    CHECK(max_abs(H - Eigen::MatrixXcd::Identity(16, 16)) < 1e-12);
    const auto lambda = effective_diagonal_gains(p, 0, 0);
    CHECK(max_abs(lambda - Eigen::VectorXcd::Ones(16)) < 1e-12);
}

TEST_CASE("integer shift path is a phased two-dimensional cyclic shift")
{
    const int M = 4;
    const int N = 4;
    const auto p = single_path(M, N, 1, 1, 1, 0.0, 0.0);
    const auto H = build_dd_channel_matrix(p, 0, 0);
    const std::complex<double> phase = std::polar(1.0, -2.0 * std::numbers::pi / (M * N));
    const Eigen::MatrixXcd expected = phase * oracle::kron(oracle::shift_matrix(N, 1), oracle::shift_matrix(M, 1));
    CHECK(max_abs(H - expected) < 1e-12);
}

TEST_CASE("channel matrix is block circulant")
{
    const int M = 4;
    const int N = 4;
    const auto p = random_params(M, N, 2, 7, true);
    const auto H = build_dd_channel_matrix(p, 1, 1);
    for (int r = 0; r < N; ++r) {
        for (int c = 0; c < N; ++c) {
            const int shift = ((c - r) % N + N) % N;
            CHECK(max_abs(H.block(r * M, c * M, M, M) - H.block(0, shift * M, M, M)) < 1e-14);
        }
    }
}

TEST_CASE("without fractional Doppler the leakage sum collapses to one term per path")
{
    for (int N : {2, 4, 8}) {
        const auto p = random_params(4, N, 2, 11 + N, false);
        for (int d = 0; d < 2; ++d) {
            const auto H = build_dd_channel_matrix(p, 0, d);
            CHECK(max_abs(H - oracle::integer_doppler_channel(p, 0, d)) < 1e-12);
        }
    }
}

TEST_CASE("FFT diagonal matches the dense transform")
{
    std::mt19937 pick(3);
    for (int trial = 0; trial < 12; ++trial) {
        const int M = 1 << (1 + trial % 3);
        const int N = 1 << (1 + (trial / 3) % 3);
        const int D = 1 << (trial % 3);
        const auto p = random_params(M, N, D, 100 + trial, true);
        for (int d = 0; d < D; ++d) {
            const auto H = build_dd_channel_matrix(p, 0, d);
            const Eigen::MatrixXcd T = oracle::dense_transform(H, M, N);
            const Eigen::VectorXcd lambda = effective_diagonal_gains(p, 0, d);
            const double scale = std::max(1e-300, max_abs(T));
            Eigen::MatrixXcd diff = T;
            diff.diagonal() -= lambda;
            CHECK(max_abs(diff) / scale < 1e-9);
        }
    }
}

TEST_CASE("degenerate one-bin axes still diagonalize")
{
    for (const auto& [M, N] : {std::pair{1, 4}, std::pair{4, 1}, std::pair{1, 1}}) {
        const auto p = random_params(M, N, 2, 40 + M * 8 + N, true);
        for (int d = 0; d < 2; ++d) {
            const auto H = build_dd_channel_matrix(p, 1, d);
            Eigen::MatrixXcd diff = oracle::dense_transform(H, M, N);
            const double scale = std::max(1e-300, max_abs(diff));
            diff.diagonal() -= effective_diagonal_gains(p, 1, d);
            CHECK(max_abs(diff) / scale < 1e-12);
        }
    }
}

TEST_CASE("antenna diagonals differ only by the steering phase")
{
    const auto p = single_path(4, 4, 2, 1, 1, 0.3, std::numbers::pi / 2.0);
    const auto l0 = effective_diagonal_gains(p, 0, 0);
    const auto l1 = effective_diagonal_gains(p, 0, 1);
    const std::complex<double> steer = std::polar(1.0, -std::numbers::pi);
    CHECK(max_abs(l1 - steer * l0) < 1e-12);
}

TEST_CASE("single antenna MRT gains are scalar channel powers")
{
    ScenarioConfig cfg;
    cfg.D = 1;
    cfg.Q = 3;
    const auto params = sample_scenario(cfg, 5);
    const auto ch = mrt_gains(params);
    for (int q = 0; q < 3; ++q) {
        for (int i = 0; i < 3; ++i) {
            for (int b = 0; b < ch.bins(); ++b) {
                const double expected = std::norm(ch.h_eff[q](b, 0)) / ch.noise[q];
                CHECK(ch.gain(q, i, b) == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("orthogonal effective channels produce no cross gain")
{
    std::vector<Eigen::MatrixXcd> h(2, Eigen::MatrixXcd(1, 2));
    h[0] << std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 0.0);
    h[1] << std::complex<double>(0.0, 0.0), std::complex<double>(0.0, 2.0);
    const auto ch = mrt_gains_from_vectors(h, {1.0, 1.0});
    CHECK(ch.gain(0, 1, 0) == 0.0);
    CHECK(ch.gain(1, 0, 0) == 0.0);
    CHECK(ch.self(1, 0) == doctest::Approx(4.0));
}

TEST_CASE("cross gains never exceed self gains")
{
    ScenarioConfig cfg;
    cfg.D = 4;
    cfg.Q = 4;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto ch = mrt_gains(sample_scenario(cfg, seed));
        for (int q = 0; q < 4; ++q) {
            for (int i = 0; i < 4; ++i) {
                for (int b = 0; b < ch.bins(); ++b) {
                    CHECK(ch.gain(q, i, b) >= 0.0);
                    CHECK(ch.gain(q, i, b) <= ch.self(q, b) * (1.0 + 1e-12));
                }
            }
        }
    }
}

TEST_CASE("zero effective channel is flagged and carries no gain")
{
    std::vector<Eigen::MatrixXcd> h(2, Eigen::MatrixXcd::Zero(1, 2));
    h[0](0, 0) = 1.0;
    const auto ch = mrt_gains_from_vectors(h, {1.0, 1.0});
    CHECK(ch.degenerate(1, 0));
    CHECK_FALSE(ch.degenerate(0, 0));
    CHECK(ch.gain(0, 1, 0) == 0.0);
    CHECK(ch.gain(1, 1, 0) == 0.0);
}

TEST_CASE("serial and parallel gain computations agree exactly")
{
    ScenarioConfig cfg;
    const auto params = sample_scenario(cfg, 9);
    const auto a = mrt_gains(params, Exec::Serial);
    const auto b = mrt_gains(params, Exec::Parallel);
    for (int q = 0; q < cfg.Q; ++q) {
        for (int i = 0; i < cfg.Q; ++i) {
            for (int k = 0; k < a.bins(); ++k) {
                CHECK(a.gain(q, i, k) == b.gain(q, i, k));
            }
        }
    }
}
