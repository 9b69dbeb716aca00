#include "duel/commands.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <system_error>
#include <thread>
#include <vector>

#include "duel/engine.hpp"
#include "duel/errors.hpp"
#include "duel/experiments.hpp"
#include "duel/io.hpp"
#include "duel/tp.hpp"

namespace duel {

namespace {

namespace fs = std::filesystem;

// Runs a command body and maps exceptions onto the documented exit codes.
template <typename Body>
int guard(Body&& body) {
  try {
    body();
    return kExitOk;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
}

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw IoError("cannot create output directory: " + out_dir);
  }
}

std::string out_path(const std::string& out_dir, const char* name) {
  return (fs::path(out_dir) / name).string();
}

int worker_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Flags replace the config's TP section outright; exactly one source must
// remain after the merge.
TpProvider resolve_tp(const ScenarioConfig& config, const std::optional<std::uint64_t>& seed,
                      const std::optional<std::string>& tp_file) {
  if (seed && tp_file) {
    throw ValidationError("choose one TP source: --seed or --tp-file, not both");
  }
  if (seed) return TpProvider::seeded(*seed);
  if (tp_file) return load_tp_file(*tp_file);
  if (config.tp.seed && config.tp.file) {
    throw ValidationError("config carries both tp.seed and tp.file; keep one");
  }
  if (config.tp.seed) return TpProvider::seeded(*config.tp.seed);
  if (config.tp.file) return load_tp_file(*config.tp.file);
  throw ValidationError(
      "no TP source: pass --seed or --tp-file, or set tp.seed / tp.file in the config");
}

double parse_double_field(const std::string& text, const char* what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(std::string("grid spec: ") + what + " is not a number: '" + text +
                          "'");
  }
  return value;
}

}  // namespace

int cmd_run(const RunOptions& options) {
  return guard([&] {
    ScenarioConfig config = options.config;
    if (options.periods) config.params.periods = *options.periods;
    config.params.validate();

    const TpProvider provider = resolve_tp(config, options.seed, options.tp_file);
    const Trajectory trajectory = run_cycle(config.params, provider);

    ensure_out_dir(options.out_dir);
    write_trajectory_csv(trajectory, out_path(options.out_dir, "trajectory.csv"));
    write_json_file(summary_json(trajectory, config_hash(config)),
                    out_path(options.out_dir, "summary.json"));
    if (options.plot_data) {
      write_shares_dat(trajectory, out_path(options.out_dir, "shares.dat"));
      write_tp_dat(trajectory, out_path(options.out_dir, "tp.dat"));
    }
  });
}

int cmd_batch(const BatchOptions& options) {
  return guard([&] {
    ScenarioConfig config = options.config;
    if (options.periods) config.params.periods = *options.periods;
    if (options.reps) config.batch.reps = *options.reps;
    if (options.base_seed) config.batch.base_seed = *options.base_seed;

    BatchSpec spec = config.batch_spec();
    spec.validate();
    spec.base_params.validate();

    const std::vector<Outcome> outcomes = run_batch(spec, worker_threads());
    const WinStats stats = aggregate_win_stats(outcomes);
    const ShapeCensus census = aggregate_census(outcomes);

    nlohmann::json doc;
    doc["config_hash"] = config_hash(config);
    doc["base_seed"] = spec.base_seed;
    doc["periods"] = spec.base_params.periods;
    doc["win_stats"] = win_stats_json(stats);
    doc["shape_census"] = census_json(census);

    ensure_out_dir(options.out_dir);
    write_json_file(doc, out_path(options.out_dir, "batch.json"));
  });
}

int cmd_calibrate(const CalibrateOptions& options) {
  return guard([&] {
    ScenarioConfig config = options.config;
    if (options.periods) config.params.periods = *options.periods;
    if (options.m_exp_low) config.calibration.m_exp_low = *options.m_exp_low;
    if (options.m_exp_high) config.calibration.m_exp_high = *options.m_exp_high;
    if (options.tolerance) config.calibration.tolerance = *options.tolerance;
    if (options.reps_per_eval) config.calibration.reps_per_eval = *options.reps_per_eval;
    if (options.max_iterations) config.calibration.max_iterations = *options.max_iterations;
    if (options.base_seed) config.calibration.base_seed = *options.base_seed;

    CalibrationSpec spec = config.calibration_spec();
    spec.validate();
    spec.base_params.validate();

    const CalibrationResult result = find_balanced_exponent(spec, worker_threads());
    if (!result.converged) {
      std::fprintf(stderr,
                   "warning: search stopped after %d iterations at m_exp=%.17g "
                   "(m_win_rate=%.17g), outside the requested tolerance\n",
                   result.iterations_used, result.balanced_m_exp,
                   result.achieved_stats.m_win_rate);
    }

    ensure_out_dir(options.out_dir);
    write_json_file(calibration_json(spec, result, config_hash(config)),
                    out_path(options.out_dir, "calibration.json"));
  });
}

int cmd_sweep(const SweepOptions& options) {
  return guard([&] {
    ScenarioConfig config = options.config;
    if (options.periods) config.params.periods = *options.periods;
    config.params.validate();
    const int reps = options.reps.value_or(config.batch.reps);
    const std::uint64_t base_seed = options.base_seed.value_or(config.batch.base_seed);

    const std::vector<SweepPoint> points =
        exponent_sweep(config.params, options.grid, reps, base_seed, worker_threads());

    ensure_out_dir(options.out_dir);
    write_sweep_csv(points, out_path(options.out_dir, "sweep.csv"));
  });
}

std::vector<double> parse_grid_spec(const std::string& spec) {
  const size_t first = spec.find(':');
  const size_t second = first == std::string::npos ? std::string::npos : spec.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos ||
      spec.find(':', second + 1) != std::string::npos) {
    throw ValidationError("grid spec must look like low:high:count, got '" + spec + "'");
  }
  const double low = parse_double_field(spec.substr(0, first), "low");
  const double high = parse_double_field(spec.substr(first + 1, second - first - 1), "high");

  const std::string count_text = spec.substr(second + 1);
  int count = 0;
  const char* begin = count_text.data();
  const char* end = begin + count_text.size();
  auto [ptr, ec] = std::from_chars(begin, end, count);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("grid spec: count is not an integer: '" + count_text + "'");
  }
  if (count < 1) {
    throw ValidationError("grid spec: count must be at least 1");
  }
  if (low > high) {
    throw ValidationError("grid spec: low must not exceed high");
  }
  if (count == 1) {
    if (low != high) {
      throw ValidationError("grid spec: a single point needs low == high");
    }
    return {low};
  }
  if (low == high) {
    throw ValidationError("grid spec: low == high allows only count 1");
  }
  std::vector<double> grid(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    grid[static_cast<size_t>(i)] = low + (high - low) * i / (count - 1);
  }
  grid.front() = low;
  grid.back() = high;
  return grid;
}

}  // namespace duel
