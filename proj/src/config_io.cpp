// Copyright 2026 The fockstir Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "fockstir/config_io.hpp"

#include "fockstir/errors.hpp"

#include <fstream>

namespace fockstir {

void to_json(nlohmann::json& j, const PulseEnvelope& env) {
    j = nlohmann::json{{"amplitude", env.amplitude}, {"center", env.center}, {"width", env.width}};
}

void from_json(const nlohmann::json& j, PulseEnvelope& env) {
    env.amplitude = j.at("amplitude").get<double>();
    env.center = j.at("center").get<double>();
    env.width = j.at("width").get<double>();
}

void to_json(nlohmann::json& j, const PulseSchedule& s) {
    j = nlohmann::json{{"w1", s.w1}, {"w2", s.w2}, {"beta", s.beta}, {"n", s.n}, {"t_start", s.t_start},
                       {"t_end", s.t_end}};
}

PulseSchedule schedule_from_json(const nlohmann::json& j) {
    PulseSchedule s;
    try {
        if (!j.is_object()) {
            throw ConfigError("schedule must be a JSON object");
        }
        // Absent envelopes stay off.
        for (auto [key, env] : {std::pair{"w1", &s.w1}, std::pair{"w2", &s.w2}, std::pair{"beta", &s.beta}}) {
            if (j.contains(key)) {
                *env = j.at(key).get<PulseEnvelope>();
            }
        }
        s.n = j.value("n", 0);
        const auto [t0, t1] = default_window(s.w1, s.w2, s.beta);
        s.t_start = j.contains("t_start") ? j.at("t_start").get<double>() : t0;
        s.t_end = j.contains("t_end") ? j.at("t_end").get<double>() : t1;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed schedule: ") + e.what());
    }
    validate_schedule(s);
    return s;
}

void to_json(nlohmann::json& j, const EntanglementReport& report) {
    j = nlohmann::json{{"fidelity_to_target", report.fidelity_to_target},
                       {"schmidt_entropy",
                        {{"atom1_vs_atom2_cavity", report.schmidt_entropy_atom1},
                         {"atom1_cavity_vs_atom2", report.schmidt_entropy_atom2}}},
                       {"cavity_mean_photons", report.cavity_mean_photons},
                       {"cavity_purity", report.cavity_purity}};
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("cannot parse " + path.string() + ": " + e.what());
    }
}

} // namespace fockstir
