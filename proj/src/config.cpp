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

#include "otfs/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace otfs {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

namespace {

std::string trim(std::string s)
{
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_number(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
    }
    return value;
}

// Accepts "<x> dBm", "<x> W" or a bare number (watts).
double parse_power(const std::string& key, const std::string& text)
{
    std::string t = trim(text);
    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower.size() > 3 && lower.ends_with("dbm")) {
        return dbm_to_watt(parse_number(key, t.substr(0, t.size() - 3)));
    }
    if (lower.size() > 1 && lower.ends_with("w")) {
        return parse_number(key, t.substr(0, t.size() - 1));
    }
    return parse_number(key, t);
}

int parse_int(const std::string& key, const std::string& text)
{
    const double v = parse_number(key, text);
    if (v != std::floor(v)) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + text + "'");
    }
    return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& text)
{
    std::string t = trim(text);
    if (!t.empty() && t.front() == '[' && t.back() == ']') {
        t = t.substr(1, t.size() - 2);
    }
    std::vector<std::string> items;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!trim(item).empty()) {
            items.push_back(trim(item));
        }
    }
    return items;
}

std::vector<double> parse_list(const std::string& key, const std::string& text,
                               double (*parse)(const std::string&, const std::string&))
{
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        out.push_back(parse(key, item));
    }
    if (out.empty()) {
        throw ConfigError("config key '" + key + "': empty list");
    }
    return out;
}

DcSplit parse_dc_split(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "literal") {
        return DcSplit::Literal;
    }
    if (t == "balanced") {
        return DcSplit::Balanced;
    }
    throw ConfigError("config key '" + key + "': expected 'literal' or 'balanced', got '" + text + "'");
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"M", [](auto& c, auto& k, auto& v) { c.M = parse_int(k, v); }},
        {"N", [](auto& c, auto& k, auto& v) { c.N = parse_int(k, v); }},
        {"delta_M", [](auto& c, auto& k, auto& v) { c.delta_M = parse_int(k, v); }},
        {"delta_N", [](auto& c, auto& k, auto& v) { c.delta_N = parse_int(k, v); }},
        {"Q", [](auto& c, auto& k, auto& v) { c.Q = parse_int(k, v); }},
        {"D", [](auto& c, auto& k, auto& v) { c.D = parse_int(k, v); }},
        {"P", [](auto& c, auto& k, auto& v) { c.P = parse_power(k, v); }},
        {"C_min", [](auto& c, auto& k, auto& v) { c.C_min = parse_list(k, v, parse_number); }},
        {"alpha", [](auto& c, auto& k, auto& v) { c.alpha = parse_list(k, v, parse_number); }},
        {"noise_power", [](auto& c, auto& k, auto& v) { c.noise_power = parse_list(k, v, parse_power); }},
        {"L_q", [](auto& c, auto& k, auto& v) { c.L_q = parse_int(k, v); }},
        {"subcarrier_spacing", [](auto& c, auto& k, auto& v) { c.subcarrier_spacing = parse_number(k, v); }},
        {"N_ql", [](auto& c, auto& k, auto& v) { c.N_ql = parse_int(k, v); }},
        {"distance_range",
         [](auto& c, auto& k, auto& v) {
             auto range = parse_list(k, v, parse_number);
             if (range.size() != 2) {
                 throw ConfigError("config key 'distance_range': expected two values");
             }
             c.distance_min = range[0];
             c.distance_max = range[1];
         }},
        {"doppler_max", [](auto& c, auto& k, auto& v) { c.doppler_max = parse_number(k, v); }},
        {"delay_max", [](auto& c, auto& k, auto& v) { c.delay_max = parse_number(k, v); }},
        {"eps_brb", [](auto& c, auto& k, auto& v) { c.eps_brb = parse_number(k, v); }},
        {"delta_p", [](auto& c, auto& k, auto& v) { c.delta_p = parse_int(k, v); }},
        {"eta", [](auto& c, auto& k, auto& v) { c.eta = parse_number(k, v); }},
        {"zeta", [](auto& c, auto& k, auto& v) { c.zeta = parse_number(k, v); }},
        {"rng_seed",
         [](auto& c, auto& k, auto& v) { c.rng_seed = static_cast<std::uint64_t>(parse_int(k, v)); }},
        {"brb_max_iters", [](auto& c, auto& k, auto& v) { c.brb_max_iters = parse_int(k, v); }},
        {"sca_max_iters", [](auto& c, auto& k, auto& v) { c.sca_max_iters = parse_int(k, v); }},
        {"tol_sca", [](auto& c, auto& k, auto& v) { c.tol_sca = parse_number(k, v); }},
        {"tol_inner", [](auto& c, auto& k, auto& v) { c.tol_inner = parse_number(k, v); }},
        {"sa_max_iters", [](auto& c, auto& k, auto& v) { c.sa_max_iters = parse_int(k, v); }},
        {"sa_temperature_floor",
         [](auto& c, auto& k, auto& v) { c.sa_temperature_floor = parse_number(k, v); }},
        {"dc_split", [](auto& c, auto& k, auto& v) { c.dc_split = parse_dc_split(k, v); }},
    };
    return table;
}

std::string node_text(const YAML::Node& node)
{
    if (node.IsScalar()) {
        return node.Scalar();
    }
    if (node.IsSequence()) {
        std::string joined;
        for (const auto& item : node) {
            if (!item.IsScalar()) {
                throw ConfigError("config: nested sequences are not supported");
            }
            if (!joined.empty()) {
                joined += ",";
            }
            joined += item.Scalar();
        }
        return joined;
    }
    throw ConfigError("config: values must be scalars or flat lists");
}

double per_user(const std::vector<double>& values, int q)
{
    return values.size() == 1 ? values.front() : values.at(static_cast<std::size_t>(q));
}

} // namespace

double ScenarioConfig::c_min(int q) const { return per_user(C_min, q); }
double ScenarioConfig::weight(int q) const { return per_user(alpha, q); }
double ScenarioConfig::noise(int q) const { return per_user(noise_power, q); }

bool ScenarioConfig::has_rate_floors() const
{
    for (int q = 0; q < Q; ++q) {
        if (c_min(q) > 0.0) {
            return true;
        }
    }
    return false;
}

void ScenarioConfig::validate() const
{
    auto require = [](bool ok, const std::string& what) {
        if (!ok) {
            throw ConfigError("invalid configuration: " + what);
        }
    };
    require(M > 0 && N > 0 && delta_M > 0 && delta_N > 0, "grid sizes must be positive");
    require(M % delta_M == 0, "M must be divisible by delta_M");
    require(N % delta_N == 0, "N must be divisible by delta_N");
    require(Q >= 1, "Q must be at least 1");
    require(D >= 1, "D must be at least 1");
    require(P > 0.0, "P must be positive");
    require(L_q >= 1, "L_q must be at least 1");
    require(N_ql >= 0, "N_ql must be nonnegative");
    require(subcarrier_spacing > 0.0, "subcarrier_spacing must be positive");
    require(distance_min > 0.0 && distance_max >= distance_min, "distance_range must be positive and ordered");
    require(doppler_max >= 0.0 && delay_max >= 0.0, "doppler_max and delay_max must be nonnegative");
    require(eps_brb > 0.0, "eps_brb must be positive");
    require(delta_p >= 1, "delta_p must be at least 1");
    require(eta > 0.0, "eta must be positive");
    require(zeta > 0.0 && zeta < 1.0, "zeta must lie in (0, 1)");
    auto per_user_ok = [this](const std::vector<double>& v) {
        return v.size() == 1 || v.size() == static_cast<std::size_t>(Q);
    };
    require(per_user_ok(C_min), "C_min needs one value or one per user");
    require(per_user_ok(alpha), "alpha needs one value or one per user");
    require(per_user_ok(noise_power), "noise_power needs one value or one per user");
    for (int q = 0; q < Q; ++q) {
        require(weight(q) > 0.0, "alpha must be positive for every user");
        require(c_min(q) >= 0.0, "C_min must be nonnegative");
        require(noise(q) > 0.0, "noise_power must be positive");
    }
    require(brb_max_iters > 0 && sca_max_iters > 0 && sa_max_iters > 0, "iteration caps must be positive");
    require(tol_sca > 0.0 && tol_inner > 0.0, "tolerances must be positive");
}

void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value)
{
    const auto& table = setters();
    auto it = table.find(key);
    if (it == table.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    it->second(config, key, value);
}

ScenarioConfig parse_config(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ScenarioConfig config;
    if (root.IsNull()) {
        return config;
    }
    if (!root.IsMap()) {
        throw ConfigError("config must be a flat key/value mapping");
    }
    for (const auto& entry : root) {
        set_config_value(config, entry.first.as<std::string>(), node_text(entry.second));
    }
    config.validate();
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

} // namespace otfs
