// Copyright 2026 The kwprune Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kwprune/llm.hpp"
#include "kwprune/simulator.hpp"
#include "kwprune/synthetic.hpp"

namespace kwprune {

/// Bad config file, unknown key or unparsable value. what() names the source
/// (file or flag) and the section.key involved.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, std::string key, std::string why);
  const std::string& source() const { return source_; }
  const std::string& key() const { return key_; }

 private:
  std::string source_;
  std::string key_;
};

struct RunConfig {
  SimulationConfig simulation;
  SyntheticConfig synthetic;

  std::string log_path;
  /// Existing memory store to start from; empty means start empty.
  std::string memory_path;
  std::string out_dir = "out";

  /// "scripted" or "live".
  std::string backend = "scripted";
  std::string script_path;
  bool script_cycle = false;
  LiveBackendConfig live;

  /// n_min values for compare; strictly increasing, positive.
  std::vector<std::size_t> sweep;
};

/// Every recognised key as "section.key", in documentation order.
const std::vector<std::string>& config_keys();

/// Sets one key. \p source labels errors (a file path or "command line").
void set_config_value(RunConfig& config, std::string_view key, std::string_view value,
                      std::string_view source);

/// Reads an INI-style file ("[simulation]\nn_min = 5") on top of \p config.
void load_config_file(RunConfig& config, const std::string& path);

/// Checks cross-field invariants that do not need the log.
void validate_run_config(const RunConfig& config);

}  // namespace kwprune
