// Copyright 2026 The segcue Authors
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

#ifndef SEGCUE_TOOLS_COMMANDS_H_
#define SEGCUE_TOOLS_COMMANDS_H_

#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace segcue::cli {

struct Command {
  CLI::App* app = nullptr;
  std::function<void()> run;
  // Primary output path, if any; its resolved config is written next to it.
  std::function<std::string()> primary_output;
  bool* dump_config = nullptr;
};

std::vector<Command> register_commands(CLI::App& app);

}  // namespace segcue::cli

#endif  // SEGCUE_TOOLS_COMMANDS_H_
