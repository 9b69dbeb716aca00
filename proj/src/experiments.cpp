#include "duel/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "duel/errors.hpp"

namespace duel {

namespace {

std::string fmt(double v) { return std::to_string(v); }

}  // namespace

void BatchSpec::validate() const {
  base_params.validate();
  if (n_reps < 1) {
    throw ValidationError("n_reps must be >= 1, got " + std::to_string(n_reps));
  }
}

void CalibrationSpec::validate() const {
  base_params.validate();
  if (!(m_exp_low > 0.0)) {
    throw ValidationError("m_exp_low must be > 0, got " + fmt(m_exp_low));
  }
  if (!(m_exp_low < m_exp_high)) {
    throw ValidationError("calibration bracket must satisfy m_exp_low < m_exp_high, got [" +
                          fmt(m_exp_low) + ", " + fmt(m_exp_high) + "]");
  }
  if (!(target > 0.0 && target < 1.0)) {
    throw ValidationError("target win rate must be strictly between 0 and 1, got " + fmt(target));
  }
  if (!(tolerance > 0.0)) {
    throw ValidationError("tolerance must be > 0, got " + fmt(tolerance));
  }
  if (reps_per_eval < 1) {
    throw ValidationError("reps_per_eval must be >= 1, got " + std::to_string(reps_per_eval));
  }
  if (max_iterations < 1) {
    throw ValidationError("max_iterations must be >= 1, got " + std::to_string(max_iterations));
  }
}

std::vector<Outcome> run_batch(const BatchSpec& spec, int n_threads) {
  spec.validate();
  std::vector<Outcome> outcomes(static_cast<size_t>(spec.n_reps));
  auto run_range = [&spec, &outcomes](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      TpProvider provider =
          TpProvider::seeded(spec.base_seed + static_cast<std::uint64_t>(i));
      outcomes[static_cast<size_t>(i)] = run_cycle(spec.base_params, provider).outcome;
    }
  };
  const int workers = std::min(std::max(n_threads, 1), spec.n_reps);
  if (workers == 1) {
    run_range(0, spec.n_reps);
    return outcomes;
  }
  // Static index partition: replications share nothing, so the outcome vector
  // is identical for every worker count.
  const int chunk = (spec.n_reps + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(spec.n_reps, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(run_range, begin, end);
  }
  for (std::thread& t : pool) t.join();
  return outcomes;
}

WinStats aggregate_win_stats(std::span<const Outcome> outcomes) {
  WinStats stats;
  stats.n_reps = static_cast<int>(outcomes.size());
  for (const Outcome& o : outcomes) {
    switch (o.winner) {
      case Winner::kH: ++stats.h_wins; break;
      case Winner::kM: ++stats.m_wins; break;
      case Winner::kNone: ++stats.undecided; break;
    }
  }
  if (stats.n_reps > 0) {
    stats.m_win_rate = static_cast<double>(stats.m_wins) / stats.n_reps;
    stats.standard_error =
        std::sqrt(stats.m_win_rate * (1.0 - stats.m_win_rate) / stats.n_reps);
  }
  return stats;
}

ShapeCensus aggregate_census(std::span<const Outcome> outcomes) {
  ShapeCensus census;
  census.n_reps = static_cast<int>(outcomes.size());
  for (const Outcome& o : outcomes) {
    ++census.crossing_histogram[o.half_crossings];
    WinTally& tally = census.by_winner[o.half_crossings];
    switch (o.winner) {
      case Winner::kH: ++tally.h_wins; break;
      case Winner::kM: ++tally.m_wins; break;
      case Winner::kNone: ++tally.undecided; break;
    }
  }
  return census;
}

WinStats estimate_win_rate(const BatchSpec& spec, int n_threads) {
  return aggregate_win_stats(run_batch(spec, n_threads));
}

ShapeCensus shape_census(const BatchSpec& spec, int n_threads) {
  return aggregate_census(run_batch(spec, n_threads));
}

CalibrationResult find_balanced_exponent(const CalibrationSpec& spec, int n_threads) {
  spec.validate();
  auto eval = [&spec, n_threads](double m_exp) {
    BatchSpec batch;
    batch.base_params = spec.base_params;
    batch.base_params.firm_m.tech_exponent = m_exp;
    batch.n_reps = spec.reps_per_eval;
    batch.base_seed = spec.base_seed;  // common random numbers across evaluations
    return estimate_win_rate(batch, n_threads);
  };

  CalibrationResult result;
  const WinStats low_stats = eval(spec.m_exp_low);
  const WinStats high_stats = eval(spec.m_exp_high);
  result.bracket_history.push_back({spec.m_exp_low, low_stats.m_win_rate});
  result.bracket_history.push_back({spec.m_exp_high, high_stats.m_win_rate});

  if (!(low_stats.m_win_rate <= spec.target && spec.target <= high_stats.m_win_rate)) {
    throw BracketError("calibration bracket [" + fmt(spec.m_exp_low) + ", " +
                           fmt(spec.m_exp_high) + "] does not straddle the target " +
                           fmt(spec.target) + ": m win rate is " + fmt(low_stats.m_win_rate) +
                           " at the low end and " + fmt(high_stats.m_win_rate) +
                           " at the high end",
                       low_stats.m_win_rate, high_stats.m_win_rate);
  }

  // Track the best evaluation seen, endpoints included.
  result.balanced_m_exp = spec.m_exp_low;
  result.achieved_stats = low_stats;
  double best_error = std::abs(low_stats.m_win_rate - spec.target);
  if (std::abs(high_stats.m_win_rate - spec.target) < best_error) {
    best_error = std::abs(high_stats.m_win_rate - spec.target);
    result.balanced_m_exp = spec.m_exp_high;
    result.achieved_stats = high_stats;
  }
  if (best_error <= spec.tolerance) {
    result.converged = true;
    return result;
  }

  double low = spec.m_exp_low;
  double high = spec.m_exp_high;
  for (int iteration = 1; iteration <= spec.max_iterations; ++iteration) {
    const double mid = 0.5 * (low + high);
    const WinStats stats = eval(mid);
    result.bracket_history.push_back({mid, stats.m_win_rate});
    result.iterations_used = iteration;
    const double error = std::abs(stats.m_win_rate - spec.target);
    if (error < best_error) {
      best_error = error;
      result.balanced_m_exp = mid;
      result.achieved_stats = stats;
    }
    if (error <= spec.tolerance) {
      result.converged = true;
      result.balanced_m_exp = mid;
      result.achieved_stats = stats;
      return result;
    }
    if (stats.m_win_rate < spec.target) {
      low = mid;
    } else {
      high = mid;
    }
  }
  result.converged = false;
  return result;
}

std::vector<SweepPoint> exponent_sweep(const SimParams& base_params,
                                       std::span<const double> m_exp_grid,
                                       int reps_per_point, std::uint64_t base_seed,
                                       int n_threads) {
  base_params.validate();
  if (m_exp_grid.empty()) throw ValidationError("sweep grid must not be empty");
  for (size_t i = 0; i < m_exp_grid.size(); ++i) {
    if (!(m_exp_grid[i] > 0.0)) {
      throw ValidationError("sweep grid values must be > 0, got " + fmt(m_exp_grid[i]));
    }
    if (i > 0 && !(m_exp_grid[i] > m_exp_grid[i - 1])) {
      throw ValidationError("sweep grid must be strictly increasing, got " +
                            fmt(m_exp_grid[i - 1]) + " then " + fmt(m_exp_grid[i]));
    }
  }
  if (reps_per_point < 1) {
    throw ValidationError("reps_per_point must be >= 1, got " + std::to_string(reps_per_point));
  }
  std::vector<SweepPoint> points;
  points.reserve(m_exp_grid.size());
  for (double m_exp : m_exp_grid) {
    BatchSpec batch;
    batch.base_params = base_params;
    batch.base_params.firm_m.tech_exponent = m_exp;
    batch.n_reps = reps_per_point;
    batch.base_seed = base_seed;  // common random numbers along the curve
    points.push_back({m_exp, estimate_win_rate(batch, n_threads)});
  }
  return points;
}

}  // namespace duel
