#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "duel/commands.hpp"
#include "duel/config.hpp"
#include "duel/errors.hpp"

namespace {

constexpr const char* kVersion = "duel 1.0.0";

duel::ScenarioConfig load_or_default(const std::string& path) {
  if (path.empty()) return duel::ScenarioConfig{};
  return duel::load_config_file(path);
}

template <typename Body>
int guarded(Body&& body) {
  try {
    return body();
  } catch (const duel::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return duel::kExitIo;
  } catch (const duel::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return duel::kExitValidation;
  }
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  int periods = 0;
  CLI::Option* periods_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scenario config file (JSON)");
    cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    periods_opt = cmd->add_option("--periods", periods, "Override the simulated horizon");
  }

  std::optional<int> periods_override() const {
    if (periods_opt != nullptr && periods_opt->count() > 0) return periods;
    return std::nullopt;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-firm market-share duel: simulator, batch runner, calibrator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // run / replay
  CommonArgs run_args;
  std::uint64_t run_seed = 0;
  std::string run_tp_file;
  bool run_plot = false;
  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one contest and write its trajectory");
  run_args.attach(run_cmd);
  CLI::Option* run_seed_opt = run_cmd->add_option("--seed", run_seed, "TP stream seed");
  CLI::Option* run_tp_opt =
      run_cmd->add_option("--tp-file", run_tp_file, "File with one TP value per line");
  run_cmd->add_flag("--plot-data", run_plot, "Also write shares.dat and tp.dat");

  CommonArgs replay_args;
  std::string replay_tp_file;
  bool replay_plot = false;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "Re-run a contest from a recorded TP file");
  replay_args.attach(replay_cmd);
  replay_cmd->add_option("--tp-file", replay_tp_file, "File with one TP value per line")
      ->required();
  replay_cmd->add_flag("--plot-data", replay_plot, "Also write shares.dat and tp.dat");

  // batch
  CommonArgs batch_args;
  int batch_reps = 0;
  std::uint64_t batch_seed = 0;
  CLI::App* batch_cmd =
      app.add_subcommand("batch", "Estimate win rates over many seeded replications");
  batch_args.attach(batch_cmd);
  CLI::Option* batch_reps_opt =
      batch_cmd->add_option("--reps", batch_reps, "Number of replications");
  CLI::Option* batch_seed_opt =
      batch_cmd->add_option("--base-seed", batch_seed, "Seed of replication 0");

  // calibrate
  CommonArgs cal_args;
  double cal_low = 0.0, cal_high = 0.0, cal_tol = 0.0;
  int cal_reps = 0, cal_iters = 0;
  std::uint64_t cal_seed = 0;
  CLI::App* cal_cmd = app.add_subcommand(
      "calibrate", "Find the challenger exponent that balances the duel");
  cal_args.attach(cal_cmd);
  CLI::Option* cal_low_opt =
      cal_cmd->add_option("--bracket-low", cal_low, "Lower bracket for the challenger exponent");
  CLI::Option* cal_high_opt =
      cal_cmd->add_option("--bracket-high", cal_high, "Upper bracket for the challenger exponent");
  CLI::Option* cal_tol_opt =
      cal_cmd->add_option("--tolerance", cal_tol, "Acceptable |win rate - target|");
  CLI::Option* cal_reps_opt =
      cal_cmd->add_option("--reps-per-eval", cal_reps, "Replications per bisection evaluation");
  CLI::Option* cal_iters_opt =
      cal_cmd->add_option("--max-iters", cal_iters, "Maximum bisection iterations");
  CLI::Option* cal_seed_opt =
      cal_cmd->add_option("--base-seed", cal_seed, "Seed of replication 0 (shared by all evals)");

  // sweep
  CommonArgs sweep_args;
  std::string sweep_grid;
  int sweep_reps = 0;
  std::uint64_t sweep_seed = 0;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Win-rate curve over a grid of challenger exponents");
  sweep_args.attach(sweep_cmd);
  sweep_cmd->add_option("--grid", sweep_grid, "Exponent grid as low:high:count")->required();
  CLI::Option* sweep_reps_opt =
      sweep_cmd->add_option("--reps", sweep_reps, "Replications per grid point");
  CLI::Option* sweep_seed_opt =
      sweep_cmd->add_option("--base-seed", sweep_seed, "Seed of replication 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? duel::kExitOk : duel::kExitValidation;
  }

  if (app.got_subcommand(run_cmd)) {
    return guarded([&] {
      duel::RunOptions options;
      options.config = load_or_default(run_args.config_path);
      if (run_seed_opt->count() > 0) options.seed = run_seed;
      if (run_tp_opt->count() > 0) options.tp_file = run_tp_file;
      options.periods = run_args.periods_override();
      options.out_dir = run_args.out_dir;
      options.plot_data = run_plot;
      return duel::cmd_run(options);
    });
  }
  if (app.got_subcommand(replay_cmd)) {
    return guarded([&] {
      duel::RunOptions options;
      options.config = load_or_default(replay_args.config_path);
      options.config.tp.seed.reset();  // a replay follows the file, never a seed
      options.config.tp.file.reset();
      options.tp_file = replay_tp_file;
      options.periods = replay_args.periods_override();
      options.out_dir = replay_args.out_dir;
      options.plot_data = replay_plot;
      return duel::cmd_run(options);
    });
  }
  if (app.got_subcommand(batch_cmd)) {
    return guarded([&] {
      duel::BatchOptions options;
      options.config = load_or_default(batch_args.config_path);
      if (batch_reps_opt->count() > 0) options.reps = batch_reps;
      if (batch_seed_opt->count() > 0) options.base_seed = batch_seed;
      options.periods = batch_args.periods_override();
      options.out_dir = batch_args.out_dir;
      return duel::cmd_batch(options);
    });
  }
  if (app.got_subcommand(cal_cmd)) {
    return guarded([&] {
      duel::CalibrateOptions options;
      options.config = load_or_default(cal_args.config_path);
      if (cal_low_opt->count() > 0) options.m_exp_low = cal_low;
      if (cal_high_opt->count() > 0) options.m_exp_high = cal_high;
      if (cal_tol_opt->count() > 0) options.tolerance = cal_tol;
      if (cal_reps_opt->count() > 0) options.reps_per_eval = cal_reps;
      if (cal_iters_opt->count() > 0) options.max_iterations = cal_iters;
      if (cal_seed_opt->count() > 0) options.base_seed = cal_seed;
      options.periods = cal_args.periods_override();
      options.out_dir = cal_args.out_dir;
      return duel::cmd_calibrate(options);
    });
  }
  if (app.got_subcommand(sweep_cmd)) {
    return guarded([&] {
      duel::SweepOptions options;
      options.config = load_or_default(sweep_args.config_path);
      options.grid = duel::parse_grid_spec(sweep_grid);
      if (sweep_reps_opt->count() > 0) options.reps = sweep_reps;
      if (sweep_seed_opt->count() > 0) options.base_seed = sweep_seed;
      options.periods = sweep_args.periods_override();
      options.out_dir = sweep_args.out_dir;
      return duel::cmd_sweep(options);
    });
  }
  return duel::kExitValidation;  // unreachable: a subcommand is required
}
