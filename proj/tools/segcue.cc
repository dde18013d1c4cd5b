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

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "commands.h"
#include "segcue/common.h"

int main(int argc, char** argv) {
  CLI::App app{"segcue: word segmentation from prediction cues"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "segcue 1.0.0");
  auto commands = segcue::cli::register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (auto& command : commands) {
    if (!command.app->parsed()) continue;
    const std::string config = command.app->config_to_str(true, false);
    if (*command.dump_config) {
      std::cout << config;
      return 0;
    }
    try {
      command.run();
      const std::string out = command.primary_output();
      // Sidecar config next to regular-file outputs only (not /dev/stdout and the like).
      if (!out.empty() && out != "-" && std::filesystem::is_regular_file(out)) {
        std::ofstream f(out + ".config.toml", std::ios::binary);
        if (!f) throw segcue::DataError("cannot write " + out + ".config.toml");
        f << "# segcue " << command.app->get_name() << "\n" << config;
      }
    } catch (const segcue::ArgumentError& e) {
      std::cerr << "segcue " << command.app->get_name() << ": " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "segcue " << command.app->get_name() << ": " << e.what() << "\n";
      return 2;
    }
    return 0;
  }
  return 1;
}
