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
#include "otfs/experiment.hpp"

#include "otfs/baselines.hpp"
#include "otfs/channel.hpp"
#include "otfs/dp.hpp"
#include "otfs/scenario.hpp"

#include <spdlog/spdlog.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace otfs {

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 6> kSchemeNames{{
    {Scheme::Dpmo, "dpmo"},
    {Scheme::ScaSa, "sca_sa"},
    {Scheme::SdmaAll, "sdma_all"},
    {Scheme::RandomNoma, "random_noma"},
    {Scheme::RandomMixedOpt, "random_mixed_opt"},
    {Scheme::RandomMixedEqual, "random_mixed_equal"},
}};

double parse_double(std::string_view text)
{
    if (text == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (text == "inf" || text == "-inf") {
        const double inf = std::numeric_limits<double>::infinity();
        return text == "inf" ? inf : -inf;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::runtime_error("bad number '" + std::string(text) + "'");
    }
    return value;
}

template <class Int>
Int parse_integer(std::string_view text)
{
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::runtime_error("bad integer '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

// Shortest text that reads back to the same double.
std::string num(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

DpOptions dp_options(const ScenarioConfig& config)
{
    DpOptions o;
    o.eps = config.eps_brb;
    o.delta_p = config.delta_p;
    o.brb_max_iters = config.brb_max_iters;
    return o;
}

void count_modes(const AccessPlan& plan, TrialResult& row)
{
    for (const auto& c : plan) {
        (c.is_noma() ? row.n_noma_slots : row.n_sdma_slots) += 1;
    }
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    return out;
}

std::ifstream open_for_read(const std::filesystem::path& path, std::string& header)
{
    std::ifstream in(path);
    if (!in || !std::getline(in, header)) {
        throw std::runtime_error("cannot read '" + path.string() + "'");
    }
    return in;
}

constexpr std::string_view kTrialHeader =
    "sweep_value,trial,seed,scheme,sum_rate_bps_hz,outage,n_noma_slots,n_sdma_slots,wallclock_ms";
constexpr std::string_view kAggregateHeader =
    "sweep_value,scheme,mean_rate,outage_pct,noma_pct,sdma_pct,trials,mean_rate_feasible";

} // namespace

std::string_view scheme_name(Scheme scheme)
{
    for (const auto& [s, name] : kSchemeNames) {
        if (s == scheme) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name)
{
    for (const auto& [s, n] : kSchemeNames) {
        if (n == name) {
            return s;
        }
    }
    return std::nullopt;
}

const std::vector<Scheme>& all_schemes()
{
    static const std::vector<Scheme> schemes = [] {
        std::vector<Scheme> v;
        for (const auto& entry : kSchemeNames) {
            v.push_back(entry.first);
        }
        return v;
    }();
    return schemes;
}

Sweep Sweep::parse(const std::string& text)
{
    if (text.empty() || text == "none") {
        return {};
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
        throw std::invalid_argument("sweep must look like axis=v1,v2,...: '" + text + "'");
    }
    const std::string axis = text.substr(0, eq);
    Sweep s;
    if (axis == "power") {
        s.axis = SweepAxis::Power;
    } else if (axis == "users") {
        s.axis = SweepAxis::Users;
    } else if (axis == "antennas") {
        s.axis = SweepAxis::Antennas;
    } else {
        throw std::invalid_argument("unknown sweep axis '" + axis + "'");
    }
    s.values.clear();
    for (const auto& item : split(text.substr(eq + 1), ',')) {
        try {
            s.values.push_back(parse_double(item));
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("bad sweep value '" + item + "'");
        }
    }
    if (s.values.empty()) {
        throw std::invalid_argument("sweep has no values");
    }
    return s;
}

ScenarioConfig apply_sweep(const ScenarioConfig& config, SweepAxis axis, double value)
{
    ScenarioConfig c = config;
    switch (axis) {
    case SweepAxis::None:
        break;
    case SweepAxis::Power:
        c.P = dbm_to_watt(value);
        break;
    case SweepAxis::Users:
        c.Q = static_cast<int>(value);
        break;
    case SweepAxis::Antennas:
        c.D = static_cast<int>(value);
        break;
    }
    c.validate();
    return c;
}

bool TrialResult::same_row(const TrialResult& o) const
{
    auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return same(sweep_value, o.sweep_value) && trial == o.trial && seed == o.seed && scheme == o.scheme &&
           same(rate, o.rate) && outage == o.outage && n_noma_slots == o.n_noma_slots &&
           n_sdma_slots == o.n_sdma_slots && same(wallclock_ms, o.wallclock_ms);
}

std::vector<TrialResult> run_trial(const ScenarioConfig& config, const std::vector<Scheme>& schemes, int trial,
                                   std::uint64_t seed, double sweep_value, std::vector<SaTraceRecord>* trace)
{
    std::vector<TrialResult> rows;
    RsPartition part;
    Demand demand;
    ScaOptions sca;
    EffectiveChannel ch;
    std::string setup_error;
    try {
        part = partition_dd_grid(config.M, config.N, config.delta_M, config.delta_N);
        demand = Demand::from_config(config);
        sca = ScaOptions::from_config(config);
        ch = mrt_gains(sample_scenario(config, seed));
    } catch (const std::exception& e) {
        setup_error = e.what();
    }

    for (Scheme scheme : schemes) {
        TrialResult row;
        row.sweep_value = sweep_value;
        row.trial = trial;
        row.seed = seed;
        row.scheme = std::string(scheme_name(scheme));
        const auto start = std::chrono::steady_clock::now();
        try {
            if (!setup_error.empty()) {
                throw std::runtime_error(setup_error);
            }
            ScaResult result;
            switch (scheme) {
            case Scheme::Dpmo: {
                DpResult dp = dp_solve(part, ch, config.P, demand.alpha, dp_options(config));
                result.plan = std::move(dp.plan);
                result.powers = std::move(dp.powers);
                evaluate_allocation(result, part, ch, demand);
                row.iterations = dp.table.levels * part.R;
                break;
            }
            case Scheme::ScaSa: {
                SaOptions sa = SaOptions::from_config(config);
                sa.seed = seed;
                sa.sca = sca;
                SaResult found = sa_search(part, ch, demand, sa);
                if (trace != nullptr) {
                    for (const auto& t : found.trace) {
                        trace->push_back({sweep_value, trial, t});
                    }
                }
                row.iterations = found.iterations;
                result = std::move(found.best);
                result.feasible = found.feasible && result.feasible;
                break;
            }
            case Scheme::SdmaAll:
                result = sdma_all(part, ch, demand, sca);
                row.iterations = result.iterations;
                break;
            case Scheme::RandomNoma:
                result = random_noma(part, ch, demand, sca, seed);
                row.iterations = result.iterations;
                break;
            case Scheme::RandomMixedOpt:
                result = random_mixed_opt(part, ch, demand, sca, seed);
                row.iterations = result.iterations;
                break;
            case Scheme::RandomMixedEqual:
                result = random_mixed_equal(part, ch, demand, seed);
                break;
            }
            count_modes(result.plan, row);
            row.outage = !result.feasible;
            row.rate = row.outage ? 0.0 : result.value;
        } catch (const std::exception& e) {
            row.failed = true;
            row.outage = true;
            row.rate = 0.0;
            row.n_noma_slots = row.n_sdma_slots = 0;
            row.error = e.what();
            spdlog::warn("trial {} (seed {}) scheme {} failed: {}", trial, seed, row.scheme, row.error);
        }
        row.wallclock_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(std::move(row));
    }
    return rows;
}

ExperimentTable run_experiment(const ScenarioConfig& config, const ExperimentOptions& options)
{
    if (options.trials < 0) {
        throw std::invalid_argument("trial count must be nonnegative");
    }
    const auto& points = options.sweep.values;
    std::vector<ScenarioConfig> configs;
    for (double v : points) {
        configs.push_back(apply_sweep(config, options.sweep.axis, v));
    }

    const int tasks = static_cast<int>(points.size()) * options.trials;
    std::vector<std::vector<TrialResult>> rows(static_cast<std::size_t>(tasks));
    std::vector<std::vector<SaTraceRecord>> traces(static_cast<std::size_t>(tasks));
    spdlog::info("running {} sweep point(s) x {} trial(s) x {} scheme(s)", points.size(), options.trials,
                 options.schemes.size());

    // Each task writes its own slot, so the output order does not depend on scheduling.
#pragma omp parallel for schedule(dynamic, 1) if (options.exec == Exec::Parallel)
    for (int task = 0; task < tasks; ++task) {
        const auto point = static_cast<std::size_t>(task / options.trials);
        const int trial = task % options.trials;
        const std::uint64_t seed = options.base_seed + static_cast<std::uint64_t>(trial);
        rows[static_cast<std::size_t>(task)] =
            run_trial(configs[point], options.schemes, trial, seed, points[point],
                      options.trace ? &traces[static_cast<std::size_t>(task)] : nullptr);
        spdlog::debug("finished sweep value {} trial {}", points[point], trial);
    }

    ExperimentTable table;
    for (int task = 0; task < tasks; ++task) {
        for (auto& r : rows[static_cast<std::size_t>(task)]) {
            table.trials.push_back(std::move(r));
        }
        for (auto& t : traces[static_cast<std::size_t>(task)]) {
            table.sa_trace.push_back(t);
        }
    }
    table.aggregate = aggregate_trials(table.trials, options.trials > 0 ? points : std::vector<double>{},
                                       options.schemes);
    return table;
}

std::vector<AggregateRow> aggregate_trials(const std::vector<TrialResult>& rows, const std::vector<double>& points,
                                           const std::vector<Scheme>& schemes)
{
    std::vector<AggregateRow> out;
    for (double point : points) {
        for (Scheme scheme : schemes) {
            AggregateRow agg;
            agg.sweep_value = point;
            agg.scheme = std::string(scheme_name(scheme));
            double sum = 0.0;
            int outages = 0;
            long noma = 0;
            long sdma = 0;
            for (const auto& r : rows) {
                if (r.sweep_value != point || r.scheme != agg.scheme) {
                    continue;
                }
                ++agg.trials;
                sum += r.rate;
                outages += r.outage ? 1 : 0;
                noma += r.n_noma_slots;
                sdma += r.n_sdma_slots;
            }
            if (agg.trials > 0) {
                agg.mean_rate = sum / agg.trials;
                agg.outage_pct = 100.0 * outages / agg.trials;
                agg.mean_rate_feasible = outages < agg.trials ? sum / (agg.trials - outages)
                                                              : std::numeric_limits<double>::quiet_NaN();
            }
            if (noma + sdma > 0) {
                agg.noma_pct = 100.0 * static_cast<double>(noma) / static_cast<double>(noma + sdma);
                agg.sdma_pct = 100.0 * static_cast<double>(sdma) / static_cast<double>(noma + sdma);
            }
            out.push_back(agg);
        }
    }
    return out;
}

void emit_results(const ExperimentTable& table, const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());
    }
    {
        auto out = open_for_write(out_dir / "trials.csv");
        out << kTrialHeader << '\n';
        for (const auto& r : table.trials) {
            out << num(r.sweep_value) << ',' << r.trial << ',' << r.seed << ',' << r.scheme << ',' << num(r.rate)
                << ',' << (r.outage ? 1 : 0) << ',' << r.n_noma_slots << ',' << r.n_sdma_slots << ','
                << num(r.wallclock_ms) << '\n';
        }
    }
    {
        auto out = open_for_write(out_dir / "aggregate.csv");
        out << kAggregateHeader << '\n';
        for (const auto& a : table.aggregate) {
            out << num(a.sweep_value) << ',' << a.scheme << ',' << num(a.mean_rate) << ',' << num(a.outage_pct)
                << ',' << num(a.noma_pct) << ',' << num(a.sdma_pct) << ',' << a.trials << ','
                << num(a.mean_rate_feasible) << '\n';
        }
    }
    if (!table.sa_trace.empty()) {
        auto out = open_for_write(out_dir / "sa_trace.csv");
        out << "sweep_value,trial,t,candidate,best,temperature\n";
        for (const auto& s : table.sa_trace) {
            out << num(s.sweep_value) << ',' << s.trial << ',' << s.row.t << ',' << num(s.row.candidate) << ','
                << num(s.row.best) << ',' << num(s.row.temperature) << '\n';
        }
    }
}

std::vector<TrialResult> read_trials_csv(const std::filesystem::path& path)
{
    std::string line;
    auto in = open_for_read(path, line);
    if (line != kTrialHeader) {
        throw std::runtime_error("unexpected header in '" + path.string() + "'");
    }
    std::vector<TrialResult> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 9) {
            throw std::runtime_error("malformed row in '" + path.string() + "': " + line);
        }
        TrialResult r;
        r.sweep_value = parse_double(f[0]);
        r.trial = parse_integer<int>(f[1]);
        r.seed = parse_integer<std::uint64_t>(f[2]);
        r.scheme = f[3];
        r.rate = parse_double(f[4]);
        r.outage = parse_integer<int>(f[5]) != 0;
        r.n_noma_slots = parse_integer<int>(f[6]);
        r.n_sdma_slots = parse_integer<int>(f[7]);
        r.wallclock_ms = parse_double(f[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path)
{
    std::string line;
    auto in = open_for_read(path, line);
    if (line != kAggregateHeader) {
        throw std::runtime_error("unexpected header in '" + path.string() + "'");
    }
    std::vector<AggregateRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 8) {
            throw std::runtime_error("malformed row in '" + path.string() + "': " + line);
        }
        AggregateRow a;
        a.sweep_value = parse_double(f[0]);
        a.scheme = f[1];
        a.mean_rate = parse_double(f[2]);
        a.outage_pct = parse_double(f[3]);
        a.noma_pct = parse_double(f[4]);
        a.sdma_pct = parse_double(f[5]);
        a.trials = parse_integer<int>(f[6]);
        a.mean_rate_feasible = parse_double(f[7]);
        rows.push_back(std::move(a));
    }
    return rows;
}

} // namespace otfs
