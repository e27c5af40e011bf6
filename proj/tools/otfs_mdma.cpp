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
#include "otfs/config.hpp"
#include "otfs/experiment.hpp"
#include "otfs/scenario.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

otfs::ScenarioConfig make_config(const std::string& path, const std::vector<std::string>& overrides)
{
    otfs::ScenarioConfig config = path.empty() ? otfs::ScenarioConfig{} : otfs::load_config(path);
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw otfs::ConfigError("--set expects key=value, got '" + item + "'");
        }
        otfs::set_config_value(config, item.substr(0, eq), item.substr(eq + 1));
    }
    config.validate();
    return config;
}

std::vector<otfs::Scheme> parse_schemes(const std::string& text)
{
    if (text == "all") {
        return otfs::all_schemes();
    }
    std::vector<otfs::Scheme> out;
    std::stringstream ss(text);
    std::string name;
    while (std::getline(ss, name, ',')) {
        auto s = otfs::parse_scheme(name);
        if (!s) {
            throw std::invalid_argument("unknown scheme '" + name + "'");
        }
        out.push_back(*s);
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Delay-Doppler multi-dimensional multiple access resource allocation"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    bool verbose = false;
    app.add_option("--config", config_path, "YAML scenario file")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "Override a config key, key=value (repeatable)");
    app.add_flag("-v,--verbose", verbose, "Debug logging");

    auto* run = app.add_subcommand("run", "Monte Carlo sweep over one or more schemes");
    std::string scheme_text = "all";
    int trials = 10;
    std::uint64_t seed = 1;
    std::string sweep_text = "none";
    std::string out_dir = "results";
    bool trace = false;
    bool serial = false;
    int threads = 0;
    run->add_option("--config", config_path, "YAML scenario file")->check(CLI::ExistingFile);
    run->add_option("--set", overrides, "Override a config key, key=value (repeatable)");
    run->add_option("--scheme", scheme_text,
                    "all, or a comma list of dpmo, sca_sa, sdma_all, random_noma, random_mixed_opt, "
                    "random_mixed_equal");
    run->add_option("--trials", trials, "Trials per sweep point")->check(CLI::NonNegativeNumber);
    run->add_option("--seed", seed, "Base seed; trial k uses seed + k");
    run->add_option("--sweep", sweep_text, "none, or power|users|antennas=v1,v2,... (power in dBm)");
    run->add_option("--out", out_dir, "Output directory");
    run->add_flag("--trace", trace, "Also write the annealing traces");
    run->add_flag("--serial", serial, "Run trials one after another");
    run->add_option("--threads", threads, "Worker threads (0 keeps the OpenMP default)");

    auto* gains = app.add_subcommand("gains", "Write the effective gain table of one sampled scenario");
    std::string gains_out = "gains.csv";
    gains->add_option("--config", config_path, "YAML scenario file")->check(CLI::ExistingFile);
    gains->add_option("--set", overrides, "Override a config key, key=value (repeatable)");
    gains->add_option("--seed", seed, "Scenario seed");
    gains->add_option("--out", gains_out, "Output CSV path");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    try {
        const otfs::ScenarioConfig config = make_config(config_path, overrides);
        if (*gains) {
            otfs::write_gain_table(otfs::mrt_gains(otfs::sample_scenario(config, seed)), gains_out);
            spdlog::info("wrote {}", gains_out);
            return 0;
        }
#ifdef _OPENMP
        if (threads > 0) {
            omp_set_num_threads(threads);
        }
#endif
        otfs::ExperimentOptions options;
        options.trials = trials;
        options.base_seed = seed;
        options.sweep = otfs::Sweep::parse(sweep_text);
        options.schemes = parse_schemes(scheme_text);
        options.exec = serial ? otfs::Exec::Serial : otfs::Exec::Parallel;
        options.trace = trace;
        const auto table = otfs::run_experiment(config, options);
        otfs::emit_results(table, out_dir);
        for (const auto& a : table.aggregate) {
            std::cout << a.sweep_value << ' ' << a.scheme << " mean_rate=" << a.mean_rate
                      << " outage%=" << a.outage_pct << " noma%=" << a.noma_pct << '\n';
        }
        spdlog::info("results written to {}", out_dir);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
