#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "duel/engine.hpp"
#include "duel/params.hpp"

namespace duel {

// A batch of independent replications. Replication i (0-based) runs with TP
// seed base_seed + i (wrapping uint64 addition), so any replication can be
// reproduced standalone and results do not depend on execution order.
struct BatchSpec {
  SimParams base_params;
  int n_reps = 1000;
  std::uint64_t base_seed = 1000;

  void validate() const;
};

struct WinStats {
  int n_reps = 0;
  int h_wins = 0;
  int m_wins = 0;
  int undecided = 0;
  double m_win_rate = 0.0;      // m_wins / n_reps
  double standard_error = 0.0;  // sqrt(p(1-p)/n) for p = m_win_rate
};

struct WinTally {
  int h_wins = 0;
  int m_wins = 0;
  int undecided = 0;
};

// Distribution of trajectory shapes: how often the lead changed hands, and
// who won for each crossing count.
struct ShapeCensus {
  int n_reps = 0;
  std::map<int, int> crossing_histogram;
  std::map<int, WinTally> by_winner;
};

// Runs the batch and returns per-replication outcomes indexed by replication.
// n_threads > 1 splits the index range across threads; results are identical
// for any thread count because replications share no state.
std::vector<Outcome> run_batch(const BatchSpec& spec, int n_threads = 1);

WinStats aggregate_win_stats(std::span<const Outcome> outcomes);
ShapeCensus aggregate_census(std::span<const Outcome> outcomes);

WinStats estimate_win_rate(const BatchSpec& spec, int n_threads = 1);
ShapeCensus shape_census(const BatchSpec& spec, int n_threads = 1);

// Bisection search for the challenger exponent that balances the duel.
// Every evaluation reuses the same base_seed (common random numbers), so the
// empirical win-rate curve is a deterministic nondecreasing function of
// m_exp and bisection is sound.
struct CalibrationSpec {
  SimParams base_params;
  double m_exp_low = 2.0;
  double m_exp_high = 4.0;
  double target = 0.5;
  double tolerance = 0.03;
  int reps_per_eval = 2000;
  int max_iterations = 40;
  std::uint64_t base_seed = 1000;

  void validate() const;
};

struct BracketPoint {
  double m_exp = 0.0;
  double m_win_rate = 0.0;
};

struct CalibrationResult {
  double balanced_m_exp = 0.0;
  WinStats achieved_stats;
  bool converged = false;
  int iterations_used = 0;                  // midpoint evaluations
  std::vector<BracketPoint> bracket_history;  // every evaluation, in order
};

// Throws BracketError (with both endpoint rates) unless
// rate(m_exp_low) <= target <= rate(m_exp_high). On hitting max_iterations
// without |rate - target| <= tolerance, returns converged = false with the
// best iterate seen.
CalibrationResult find_balanced_exponent(const CalibrationSpec& spec, int n_threads = 1);

struct SweepPoint {
  double m_exp = 0.0;
  WinStats stats;
};

// Win-rate curve over a strictly increasing grid of challenger exponents,
// every point estimated with the same base_seed and rep count.
std::vector<SweepPoint> exponent_sweep(const SimParams& base_params,
                                       std::span<const double> m_exp_grid,
                                       int reps_per_point, std::uint64_t base_seed,
                                       int n_threads = 1);

}  // namespace duel
