// Copyright 2026 The ccfund Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CCFUND_IO_HPP_
#define CCFUND_IO_HPP_

#include <filesystem>
#include <string>

#include "json.hpp"

#include "ccfund/best_response.hpp"
#include "ccfund/generators.hpp"
#include "ccfund/harness.hpp"
#include "ccfund/model.hpp"
#include "ccfund/welfare.hpp"

namespace ccfund {

using Json = nlohmann::json;

// Sorted keys, no whitespace, doubles printed with 17 significant digits.
std::string canonical_dump(const Json& j);

Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& j);

Json profile_to_json(const ContributionProfile& profile);
ContributionProfile profile_from_json(const Json& j);

Json solution_to_json(const WelfareSolution& solution);
WelfareSolution solution_from_json(const Json& j);

Json outcome_to_json(const Outcome& outcome);
Json best_response_to_json(const BestResponse& br);
Json certificate_to_json(const Certificate& certificate);
Json discontinuity_to_json(const DiscontinuityReport& report);

SamplerConfig sampler_config_from_json(const Json& j);
Json sampler_config_to_json(const SamplerConfig& cfg);
ExperimentConfig experiment_config_from_json(const Json& j);
Json experiment_config_to_json(const ExperimentConfig& cfg);

// Throws InputError when the file is missing or not valid JSON.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ccfund

#endif  // CCFUND_IO_HPP_
