// Copyright 2026 The bfctomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// File-based front end for the bfctomo command-line tool. Every command takes a
// JSON configuration (defaults, then an optional preset, then a --config file,
// then individual flags) and writes its outputs plus a run manifest into the
// output directory. A manifest passed back through --config reproduces the run.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

namespace bfc::cli {

using nlohmann::json;

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitIo = 3,
    kExitBudget = 4,
    kExitFit = 5,
};

/// Default output directory when neither --out nor output_dir is given.
inline constexpr const char *kOutputDirEnv = "BFC_OUTPUT_DIR";
inline constexpr const char *kArtifactVersion = "1.0.0";

/// Full parameter set of a command with default values.
json default_config(const std::string &command);

/// Named parameter sets ("ppln", "mrr"). Only keys known to the command apply.
json preset(const std::string &name);

/// Resolves presets, config files and output directory into the parameters a
/// command runs with. Throws bfc::Error on unknown keys or commands.
json resolve_config(const std::string &command, const json &file_config, const std::string &preset_name,
                    const json &overrides);

/// Runs a command on fully resolved parameters and returns the exit code.
int execute(const std::string &command, const json &config, std::ostream &out, std::ostream &err);

/// Entry point shared by the executable and the tests.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace bfc::cli
