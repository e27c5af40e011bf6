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

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace otfs {

/// Thrown for any inconsistent or unparsable experiment configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// How the difference-of-convex split of the SINR constraint is scaled.
/// Literal uses unit scale; Balanced rescales at the expansion point so both
/// squares carry equal weight.
enum class DcSplit { Literal, Balanced };

/// All physical and algorithmic parameters of one experiment.
///
/// Powers are linear watts. The loader converts "<x> dBm" strings once, so
/// nothing downstream ever sees logarithmic units.
struct ScenarioConfig {
    // delay-Doppler grid and resource slots
    int M = 2;
    int N = 4;
    int delta_M = 1;
    int delta_N = 2;

    int Q = 3;  // users
    int D = 10; // base-station antennas

    double P = dbm_to_watt(45.0);
    std::vector<double> C_min{0.0};       // bits/s/Hz, one entry or one per user
    std::vector<double> alpha{1.0};       // user weights
    std::vector<double> noise_power{dbm_to_watt(-108.0)};

    int L_q = 5;
    double subcarrier_spacing = 15e3;
    int N_ql = 5;
    double distance_min = 200.0;
    double distance_max = 500.0;
    double doppler_max = 0.5; // fraction of the subcarrier spacing
    double delay_max = 0.5;   // fraction of 1/subcarrier_spacing

    // solver parameters
    double eps_brb = 0.05; // BRB stops when f_max <= (1 + eps) f_min
    int delta_p = 50;      // DP power-grid steps
    double eta = 1000.0;   // penalty factor
    double zeta = 0.92;    // SA cooling factor
    std::uint64_t rng_seed = 1;

    int brb_max_iters = 50000;
    int sca_max_iters = 30;
    double tol_sca = 1e-4;
    double tol_inner = 1e-7;
    int sa_max_iters = 200;
    double sa_temperature_floor = 1e-3;
    DcSplit dc_split = DcSplit::Literal;

    int bins() const { return M * N; }
    int slot_bins() const { return delta_M * delta_N; }
    int slots() const { return bins() / slot_bins(); }

    double c_min(int q) const;
    double weight(int q) const;
    double noise(int q) const;
    bool has_rate_floors() const;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

/// Parses a flat key/value YAML document whose keys are the field names above.
/// Unknown keys are rejected; missing keys keep their defaults.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(const std::string& text);

/// Sets one field from its textual value, with the same rules as the loader.
void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value);

} // namespace otfs
