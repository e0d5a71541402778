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

// srng_lab: batch front-end for the finite-blocklength analyses.
//
//   srng_lab analyze   --config source.cfg [--out DIR] [--units bits]
//   srng_lab construct --config source.cfg --exact
//   srng_lab oracle | rdp | sweep ...

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "srng/commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string units = "nats";
  bool exact = false;
  bool floating = false;
  std::optional<std::size_t> cap;
};

void add_common(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "Run configuration file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", flags.out, "Output directory (stdout when omitted)");
  sub->add_option("--units", flags.units, "Display units for rates")
      ->check(CLI::IsMember({"nats", "bits"}));
  auto* exact = sub->add_flag("--exact", flags.exact, "Exact rational arithmetic");
  auto* floating = sub->add_flag("--float", flags.floating, "Double-precision arithmetic");
  exact->excludes(floating);
  sub->add_option("--caps", flags.cap, "Maximum number of outcomes in X^n");
}

int run(const std::string& command, const Flags& flags) {
  auto config = srng::load_config(flags.config);
  if (flags.exact) config.mode = srng::ArithmeticMode::kExact;
  if (flags.floating) config.mode = srng::ArithmeticMode::kFloat;
  if (flags.cap) config.cap = *flags.cap;
  config.units = flags.units == "bits" ? srng::Units::kBits : srng::Units::kNats;

  const auto output = srng::run_command(command, config);
  if (flags.out.empty()) {
    for (const auto& [name, contents] : output.files) std::cout << "# " << name << '\n' << contents;
  } else {
    std::filesystem::create_directories(flags.out);
    for (const auto& [name, contents] : output.files) {
      std::ofstream file(std::filesystem::path(flags.out) / name, std::ios::binary);
      file << contents;
      if (!file) throw srng::Error(srng::ErrorKind::kConfig, "cannot write " + name);
    }
  }
  for (const auto& v : output.violations) std::cerr << "violation: " << v << '\n';
  return output.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-blocklength self-random-number-generation lab"};
  app.require_subcommand(1);
  std::map<std::string, Flags> flags;
  const std::map<std::string, std::string> commands = {
      {"analyze", "Information spectrum and rate reports"},
      {"construct", "Mappings with converse and achievability bounds"},
      {"oracle", "Exhaustive optimum on tiny instances"},
      {"rdp", "Rate-distortion-perception bounds"},
      {"sweep", "Rate convergence over blocklengths"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags[name]);
  CLI11_PARSE(app, argc, argv);

  const auto* sub = app.get_subcommands().front();
  try {
    return run(sub->get_name(), flags[sub->get_name()]);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
