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

#include "otfs/annealing.hpp"
#include "otfs/config.hpp"
#include "otfs/exec.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace otfs {

enum class Scheme { Dpmo, ScaSa, SdmaAll, RandomNoma, RandomMixedOpt, RandomMixedEqual };

std::string_view scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

enum class SweepAxis { None, Power, Users, Antennas };

/// Sweep points; power values are in dBm.
struct Sweep {
    SweepAxis axis = SweepAxis::None;
    std::vector<double> values{0.0};

    /// Parses "none" or "<power|users|antennas>=v1,v2,...". Throws std::invalid_argument.
    static Sweep parse(const std::string& text);
};

/// Copy of config with the swept quantity set to value.
ScenarioConfig apply_sweep(const ScenarioConfig& config, SweepAxis axis, double value);

struct TrialResult {
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string scheme;
    double rate = 0.0; // zero on outage
    bool outage = false;
    int n_noma_slots = 0;
    int n_sdma_slots = 0;
    double wallclock_ms = 0.0;
    // kept in memory only
    bool failed = false;
    int iterations = 0;
    std::string error;

    /// Compares the persisted columns.
    bool same_row(const TrialResult& other) const;
};

struct AggregateRow {
    double sweep_value = 0.0;
    std::string scheme;
    double mean_rate = 0.0;          // outages count as zero
    double outage_pct = 0.0;
    double noma_pct = 0.0;
    double sdma_pct = 0.0;
    int trials = 0;
    double mean_rate_feasible = 0.0; // over trials without outage, NaN when there are none
};

struct SaTraceRecord {
    double sweep_value = 0.0;
    int trial = 0;
    SaTraceRow row;
};

struct ExperimentOptions {
    int trials = 1;
    std::uint64_t base_seed = 1;
    Sweep sweep;
    std::vector<Scheme> schemes = all_schemes();
    Exec exec = Exec::Parallel;
    bool trace = false;
};

struct ExperimentTable {
    std::vector<TrialResult> trials;    // sorted by (sweep point, trial, scheme order)
    std::vector<AggregateRow> aggregate; // sorted by (sweep point, scheme order)
    std::vector<SaTraceRecord> sa_trace;
};

/// Runs every scheme on one sampled scenario; solver exceptions mark that scheme's row failed.
std::vector<TrialResult> run_trial(const ScenarioConfig& config, const std::vector<Scheme>& schemes, int trial,
                                   std::uint64_t seed, double sweep_value,
                                   std::vector<SaTraceRecord>* trace = nullptr);

ExperimentTable run_experiment(const ScenarioConfig& config, const ExperimentOptions& options);

std::vector<AggregateRow> aggregate_trials(const std::vector<TrialResult>& rows, const std::vector<double>& points,
                                           const std::vector<Scheme>& schemes);

/// Writes trials.csv, aggregate.csv and, when traces exist, sa_trace.csv into out_dir.
void emit_results(const ExperimentTable& table, const std::filesystem::path& out_dir);

std::vector<TrialResult> read_trials_csv(const std::filesystem::path& path);
std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path);

} // namespace otfs
