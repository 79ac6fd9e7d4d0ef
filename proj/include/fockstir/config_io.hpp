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
#pragma once

#include "fockstir/entangle.hpp"
#include "fockstir/pulses.hpp"

#include <json.hpp>

#include <filesystem>

namespace fockstir {

void to_json(nlohmann::json& j, const PulseEnvelope& env);
void from_json(const nlohmann::json& j, PulseEnvelope& env);

void to_json(nlohmann::json& j, const PulseSchedule& s);

/**
 * Reads {"w1": {...}, "w2": {...}, "beta": {...}, "n": ..., "t_start": ...,
 * "t_end": ...}. Missing envelopes are zero; a missing window falls back to
 * default_window. Throws ConfigError on malformed input or an invalid schedule.
 */
PulseSchedule schedule_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const EntanglementReport& report);

/// Throws ConfigError naming the path when it cannot be read or parsed.
nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace fockstir
