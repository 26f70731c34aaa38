// Copyright 2026 The cvplateau Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file experiments.hpp
 * Experiment configuration, runners and writers behind the command-line tool.
 *
 * A configuration is a set of `key = value` pairs. Every output file repeats
 * them in its preamble (`# config: key = value` for CSV, a leading "config"
 * record for JSON lines), so any output can be passed back as --config to
 * reproduce it.
 */
#pragma once

#include "cvplateau/errors.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cvplateau::cli {

/// Invalid configuration; names the offending field.
class ConfigError : public DomainError {
  public:
    ConfigError(std::string field, const std::string &why)
        : DomainError("config field '" + field + "': " + why),
          field_(std::move(field)) {}
    [[nodiscard]] const std::string &field() const { return field_; }

  private:
    std::string field_;
};

enum class Command { Toy, Prop1, Prop2, Heterodyne, Noise, Regimes, Train };
enum class Format { Csv, Json };

[[nodiscard]] std::string_view command_name(Command c);
[[nodiscard]] Command parse_command(std::string_view name);

/// Schema string written to every output, e.g. "cvplateau.prop1/1".
[[nodiscard]] std::string schema_string(Command c);

using ConfigMap = std::map<std::string, std::string>;

/// Reads `key = value` lines (optionally prefixed by "# config:") or, when the
/// text starts with '{', the "config" object of the first JSON line. Other
/// lines are ignored.
[[nodiscard]] ConfigMap parse_config_text(std::string_view text);
[[nodiscard]] ConfigMap load_config_file(const std::filesystem::path &path);

struct ExperimentConfig {
    Command command = Command::Prop1;
    std::vector<int> modes;
    /// An intensity law (see IntensityLaw) or a comma list of explicit values.
    std::string intensity;
    std::vector<double> s;
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::uint64_t chunk = 4096;
    Format format = Format::Csv;
    /// "uniform" or a gate label such as "beamsplitter:0,1".
    std::string gate = "uniform";
    std::string outcome_intensity = "constant:0.5";
    double k = 0.9;
    std::string depth = "linear:1";
    int layers = 4;
    int runs = 1;
    double lr = 0.1;
    int max_iters = 2000;
    double tol = 1e-8;
    std::string objective = "compiling";

    /// Defaults for the command, overridden by the entries of `map`.
    /// Throws ConfigError for unknown, unused or malformed fields.
    static ExperimentConfig from_map(const ConfigMap &map);
    /// Only the fields the command uses, formatted canonically.
    [[nodiscard]] ConfigMap to_map() const;
};

/// Keys used by a command, in preamble order.
[[nodiscard]] std::vector<std::string_view> config_keys(Command c);

/// Runs the experiment and writes the full output (preamble, header, rows).
void run_experiment(const ExperimentConfig &config, std::ostream &out);

/// $CVPLATEAU_OUTPUT_DIR/<command>_seed<seed>.<csv|jsonl>, or empty when the
/// variable is unset (meaning standard output).
[[nodiscard]] std::filesystem::path default_output_path(const ExperimentConfig &config);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace cvplateau::cli
