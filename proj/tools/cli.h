// Copyright 2026 The cvswitch Authors
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

#ifndef CVSWITCH_TOOLS_CLI_H
#define CVSWITCH_TOOLS_CLI_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cvswitch::cli {

inline constexpr const char *kVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitNumerical = 2,
    kExitTolerance = 3,
};

/// Fully resolved settings for one command. Unset optionals fall back to per-command defaults.
struct ExperimentConfig {
    std::string command;
    std::vector<std::string> schemes;
    std::vector<int> n_values;
    std::optional<int64_t> nu;
    int trials = 500;
    std::optional<uint64_t> seed;
    std::optional<double> x_bar;
    std::optional<double> p_bar;
    std::vector<double> x_range;
    std::vector<double> p_range;
    std::vector<double> energies;
    std::optional<double> z_max;
    std::optional<double> budget;
    double beta_gup = 0.01;
    double zbar_min = 0.05;
    double zbar_max = 1.0;
    double zbar_step = 0.05;
    int64_t dim = 64;
    int cases = 200;
    std::optional<double> slope_tolerance;
    std::string out;
    std::string format = "csv";
    unsigned workers = 1;
};

using Cell = std::variant<std::string, double, int64_t>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    /// Index of `column`; throws std::out_of_range if absent.
    size_t column(const std::string &column) const;
    double number(size_t row, const std::string &column) const;
    std::string text(size_t row, const std::string &column) const;
};

struct CommandResult {
    std::vector<Table> tables;
    int exit_code = kExitOk;
};

/// Fills per-command defaults and validates every field. Throws cvswitch::InputError on bad settings.
ExperimentConfig resolve(ExperimentConfig config);

/// Stable 64-bit hash of the settings that determine the output (workers and the output path excluded).
uint64_t config_hash(const ExperimentConfig &config);

CommandResult cmd_simulate(const ExperimentConfig &config);
CommandResult cmd_scaling(const ExperimentConfig &config);
CommandResult cmd_figure3(const ExperimentConfig &config);
CommandResult cmd_bounds(const ExperimentConfig &config);
CommandResult cmd_fisher(const ExperimentConfig &config);
CommandResult cmd_oracle_check(const ExperimentConfig &config);

/// Expected log-log slope and tolerance band of a scheme's RMSE against N.
/// cmd_scaling replaces the switch_joint value with the fitted slope of its analytic bound.
std::pair<double, double> expected_slope(const std::string &scheme);

void write_csv(const CommandResult &result, const ExperimentConfig &config, std::ostream &out);
void write_json(const CommandResult &result, const ExperimentConfig &config, std::ostream &out);

/// Entry point shared by the executable and the tests. args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace cvswitch::cli

#endif
