// Copyright 2026 The fracgreen Authors.
//
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


#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fracgreen/app.hpp"

int main(int argc, char** argv) {
  using namespace fracgreen;
  CLI::App cli{"fracgreen: Green's functions of the fractional Laplacian on balls and half-spaces"};
  std::string command, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::string commands;
  for (const auto& c : command_names()) commands += (commands.empty() ? "" : ", ") + c;
  cli.add_option("command", command, "one of: " + commands)->required();
  cli.add_option("--config", config_path, "JSON configuration file")->required();
  cli.add_option("--seed", seed, "override the configured seed");
  cli.add_option("--out", out_dir, "override the configured output directory");
  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kExitUsage;
  }
  bool known = false;
  for (const auto& c : command_names()) known = known || c == command;
  if (!known) {
    std::cerr << "error: unknown command '" << command << "'\n" << cli.help();
    return kExitUsage;
  }
  Config cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (seed) cfg.seed = *seed;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  return run_command(command, cfg);
}
