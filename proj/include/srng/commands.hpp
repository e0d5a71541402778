/*
Copyright 2026 The srnglab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// Batch commands. Each returns its output files in memory so that callers
// decide where they go; contents depend only on the configuration.

#ifndef SRNG_COMMANDS_HPP_
#define SRNG_COMMANDS_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srng/config.hpp"

namespace srng {

struct CommandOutput {
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::vector<std::string> violations;                     // invariant failures
  int exit_code() const { return violations.empty() ? 0 : 1; }
};

// Spectrum table and rate reports.
CommandOutput cmd_analyze(const RunConfig& config);
// Threshold and smooth-set mappings with their bound sandwich and traces.
CommandOutput cmd_construct(const RunConfig& config);
// Exhaustive optimum against the construction and the converse bound.
CommandOutput cmd_oracle(const RunConfig& config);
// Rate-distortion-perception bounds over the (D, Delta) grid.
CommandOutput cmd_rdp(const RunConfig& config);
// Per-n rate table with trend flags.
CommandOutput cmd_sweep(const RunConfig& config);

// Dispatches by subcommand name; throws kConfig for unknown names.
CommandOutput run_command(std::string_view name, const RunConfig& config);

}  // namespace srng

#endif  // SRNG_COMMANDS_HPP_
