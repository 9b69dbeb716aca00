#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "duel/config.hpp"

namespace duel {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;  // bad params, bad input values, bad bracket
inline constexpr int kExitIo = 2;          // unreadable/unwritable files

struct RunOptions {
  ScenarioConfig config;
  std::optional<std::uint64_t> seed;     // overrides config.tp.seed
  std::optional<std::string> tp_file;    // overrides config.tp.file
  std::optional<int> periods;
  std::string out_dir = "out";
  bool plot_data = false;
};

struct BatchOptions {
  ScenarioConfig config;
  std::optional<int> reps;
  std::optional<std::uint64_t> base_seed;
  std::optional<int> periods;
  std::string out_dir = "out";
};

struct CalibrateOptions {
  ScenarioConfig config;
  std::optional<double> m_exp_low;
  std::optional<double> m_exp_high;
  std::optional<double> tolerance;
  std::optional<int> reps_per_eval;
  std::optional<int> max_iterations;
  std::optional<std::uint64_t> base_seed;
  std::optional<int> periods;
  std::string out_dir = "out";
};

struct SweepOptions {
  ScenarioConfig config;
  std::vector<double> grid;
  std::optional<int> reps;
  std::optional<std::uint64_t> base_seed;
  std::optional<int> periods;
  std::string out_dir = "out";
};

// Single simulation run. Requires exactly one TP source after merging flags
// over the config. Writes trajectory.csv and summary.json, plus shares.dat
// and tp.dat when plot_data is set. Returns an exit code.
int cmd_run(const RunOptions& options);

// Monte Carlo batch: writes batch.json (win stats + shape census).
int cmd_batch(const BatchOptions& options);

// Balanced-exponent search: writes calibration.json including the bracket
// history. An invalid bracket reports both endpoint win rates and exits 1.
int cmd_calibrate(const CalibrateOptions& options);

// Win-rate curve over a grid: writes sweep.csv.
int cmd_sweep(const SweepOptions& options);

// Parses "low:high:count" into an evenly spaced grid.
std::vector<double> parse_grid_spec(const std::string& spec);

}  // namespace duel
