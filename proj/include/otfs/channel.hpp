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

#include "otfs/exec.hpp"
#include "otfs/scenario.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <vector>

namespace otfs {

/// Leakage taps [first, last] used for every path; at most N distinct taps.
struct LeakageRange {
    int first = 0;
    int last = 0;
};
LeakageRange leakage_range(int N, int window);

/// Dense MN x MN delay-Doppler channel of user q seen from antenna d (0-based).
Eigen::MatrixXcd build_dd_channel_matrix(const ChannelParams& params, int q, int d);

/// Diagonal of the transformed channel, computed per block with FFTs.
Eigen::VectorXcd effective_diagonal_gains(const ChannelParams& params, int q, int d);

/// Effective per-bin gains after MRT beamforming.
///
/// gain(q, i, b) is the gain at user q of the beam aimed at user i, already
/// divided by the noise of user q; gain(q, q, b) is the self gain.
class EffectiveChannel {
public:
    EffectiveChannel() = default;
    EffectiveChannel(int users, int bins);

    int users() const { return Q_; }
    int bins() const { return bins_; }

    double gain(int q, int i, int b) const { return gamma_[index(q, i, b)]; }
    double& gain(int q, int i, int b) { return gamma_[index(q, i, b)]; }
    double self(int q, int b) const { return gain(q, q, b); }

    bool degenerate(int i, int b) const { return degenerate_[static_cast<std::size_t>(i * bins_ + b)] != 0; }
    void set_degenerate(int i, int b) { degenerate_[static_cast<std::size_t>(i * bins_ + b)] = 1; }

    /// Complex effective channel entries per user, bin and antenna (empty when built from raw gains).
    std::vector<Eigen::MatrixXcd> h_eff; // h_eff[q](b, d)
    std::vector<double> noise;

private:
    std::size_t index(int q, int i, int b) const
    {
        return static_cast<std::size_t>((q * Q_ + i) * bins_ + b);
    }

    int Q_ = 0;
    int bins_ = 0;
    std::vector<double> gamma_;
    std::vector<char> degenerate_;
};

EffectiveChannel mrt_gains(const ChannelParams& params, Exec exec = Exec::Parallel);

/// MRT gains from given per-bin effective channel vectors, h[q](b, d).
EffectiveChannel mrt_gains_from_vectors(const std::vector<Eigen::MatrixXcd>& h, const std::vector<double>& noise);

/// Columnar dump: user, peer, bin, value.
void write_gain_table(const EffectiveChannel& channel, const std::filesystem::path& path);

} // namespace otfs
