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
#include "otfs/channel.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace otfs {

namespace {

using cd = std::complex<double>;
constexpr double two_pi = 2.0 * std::numbers::pi;

int wrap(int x, int n) { return ((x % n) + n) % n; }

// Dirichlet-type leakage weight of tap i for a fractional Doppler offset.
cd leakage_weight(int i, double frac, int N)
{
    const double x = -static_cast<double>(i) - frac;
    const cd num = std::exp(cd(0.0, -two_pi * x)) - 1.0;
    const cd den = static_cast<double>(N) * (std::exp(cd(0.0, -two_pi * x / N)) - 1.0);
    if (std::abs(den) < 1e-12) {
        return {1.0, 0.0};
    }
    return num / den;
}

struct Tap {
    int doppler_shift; // block shift n
    int delay_shift;   // in-block shift
    cd coef;
};

// Every (path, leakage tap) term of the channel between user q and antenna d.
std::vector<Tap> channel_taps(const ChannelParams& params, int q, int d)
{
    const auto& user = params.users.at(static_cast<std::size_t>(q));
    const int M = params.M;
    const int N = params.N;
    const double norm = 1.0 / std::sqrt(static_cast<double>(user.paths.size()));
    const LeakageRange taps = leakage_range(N, params.leakage_window);

    std::vector<Tap> out;
    out.reserve(user.paths.size() * static_cast<std::size_t>(taps.last - taps.first + 1));
    for (const auto& path : user.paths) {
        const cd steering = std::exp(cd(0.0, -std::numbers::pi * std::sin(path.angle) * d));
        const double doppler = path.doppler + path.doppler_frac;
        const cd phase = std::exp(cd(0.0, -two_pi * doppler * path.delay / (static_cast<double>(M) * N)));
        const cd base = path.gain * norm * steering * phase;
        for (int i = taps.first; i <= taps.last; ++i) {
            out.push_back({wrap(path.doppler - i, N), wrap(path.delay, M), base * leakage_weight(i, path.doppler_frac, N)});
        }
    }
    return out;
}

} // namespace

LeakageRange leakage_range(int N, int window)
{
    return {-std::min(window, (N - 1) / 2), std::min(window, N / 2)};
}

Eigen::MatrixXcd build_dd_channel_matrix(const ChannelParams& params, int q, int d)
{
    const int M = params.M;
    const int N = params.N;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(M * N, M * N);
    for (const Tap& tap : channel_taps(params, q, d)) {
        for (int cb = 0; cb < N; ++cb) {
            const int rb = (cb + tap.doppler_shift) % N;
            for (int ci = 0; ci < M; ++ci) {
                const int ri = (ci + tap.delay_shift) % M;
                H(rb * M + ri, cb * M + ci) += tap.coef;
            }
        }
    }
    return H;
}

Eigen::VectorXcd effective_diagonal_gains(const ChannelParams& params, int q, int d)
{
    const int M = params.M;
    const int N = params.N;

    // first columns of the circulant blocks
    std::vector<std::vector<cd>> first_col(static_cast<std::size_t>(N), std::vector<cd>(static_cast<std::size_t>(M)));
    for (const Tap& tap : channel_taps(params, q, d)) {
        first_col[static_cast<std::size_t>(tap.doppler_shift)][static_cast<std::size_t>(tap.delay_shift)] += tap.coef;
    }

    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    // kissfft faults on length one, where the transform is the identity anyway
    auto forward = [&fft](std::vector<cd>& out, const std::vector<cd>& in) {
        if (in.size() == 1) {
            out = in;
        } else {
            fft.fwd(out, in);
        }
    };
    auto inverse = [&fft](std::vector<cd>& out, const std::vector<cd>& in) {
        if (in.size() == 1) {
            out = in;
        } else {
            fft.inv(out, in);
        }
    };

    std::vector<std::vector<cd>> block_diag(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        forward(block_diag[static_cast<std::size_t>(n)], first_col[static_cast<std::size_t>(n)]);
    }

    Eigen::VectorXcd lambda(M * N);
    std::vector<cd> across(static_cast<std::size_t>(N));
    std::vector<cd> mixed;
    for (int j = 0; j < M; ++j) {
        for (int n = 0; n < N; ++n) {
            across[static_cast<std::size_t>(n)] = block_diag[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)];
        }
        inverse(mixed, across);
        for (int i = 0; i < N; ++i) {
            lambda(i * M + j) = mixed[static_cast<std::size_t>(i)];
        }
    }
    return lambda;
}

EffectiveChannel::EffectiveChannel(int users, int bins)
    : noise(static_cast<std::size_t>(users), 1.0), Q_(users), bins_(bins),
      gamma_(static_cast<std::size_t>(users) * static_cast<std::size_t>(users) * static_cast<std::size_t>(bins), 0.0),
      degenerate_(static_cast<std::size_t>(users) * static_cast<std::size_t>(bins), 0)
{
}

EffectiveChannel mrt_gains_from_vectors(const std::vector<Eigen::MatrixXcd>& h, const std::vector<double>& noise)
{
    const int Q = static_cast<int>(h.size());
    if (Q == 0 || noise.size() != h.size()) {
        throw std::invalid_argument("mrt_gains: need one channel matrix and one noise level per user");
    }
    const int bins = static_cast<int>(h.front().rows());
    EffectiveChannel out(Q, bins);
    out.h_eff = h;
    out.noise = noise;
    for (int b = 0; b < bins; ++b) {
        for (int i = 0; i < Q; ++i) {
            const auto hi = h[static_cast<std::size_t>(i)].row(b);
            const double norm2 = hi.squaredNorm();
            if (norm2 == 0.0) {
                out.set_degenerate(i, b);
                continue;
            }
            for (int q = 0; q < Q; ++q) {
                const auto hq = h[static_cast<std::size_t>(q)].row(b);
                const double inner = std::norm(hq.dot(hi));
                out.gain(q, i, b) = inner / norm2 / noise[static_cast<std::size_t>(q)];
            }
        }
    }
    return out;
}

EffectiveChannel mrt_gains(const ChannelParams& params, Exec exec)
{
    const int Q = static_cast<int>(params.users.size());
    const int D = params.D;
    const int bins = params.M * params.N;
    std::vector<Eigen::MatrixXcd> h(static_cast<std::size_t>(Q), Eigen::MatrixXcd(bins, D));
    const bool parallel = exec == Exec::Parallel;
#pragma omp parallel for collapse(2) schedule(static) if (parallel)
    for (int q = 0; q < Q; ++q) {
        for (int d = 0; d < D; ++d) {
            h[static_cast<std::size_t>(q)].col(d) = effective_diagonal_gains(params, q, d);
        }
    }
    std::vector<double> noise;
    noise.reserve(static_cast<std::size_t>(Q));
    for (const auto& user : params.users) {
        noise.push_back(user.noise);
    }
    return mrt_gains_from_vectors(h, noise);
}

void write_gain_table(const EffectiveChannel& channel, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write gain table to '" + path.string() + "'");
    }
    out << "user,peer,bin,value\n";
    out.precision(17);
    for (int q = 0; q < channel.users(); ++q) {
        for (int i = 0; i < channel.users(); ++i) {
            for (int b = 0; b < channel.bins(); ++b) {
                out << q << ',' << i << ',' << b << ',' << channel.gain(q, i, b) << '\n';
            }
        }
    }
}

} // namespace otfs
