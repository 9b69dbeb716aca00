#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "duel/errors.hpp"
#include "duel/experiments.hpp"

using namespace duel;

namespace {

SimParams symmetric_params() {
  SimParams p;
  p.initial_share_h = 0.5;
  p.firm_h.tech_exponent = 2.0;
  p.firm_m.tech_exponent = 2.0;
  p.aggression.alpha_protect = 0.0;
  p.aggression.alpha_attack = 0.0;
  return p;
}

}  // namespace

TEST_CASE("win accounting always balances") {
  BatchSpec spec;
  spec.n_reps = 200;
  spec.base_seed = 42;
  WinStats stats = estimate_win_rate(spec);
  CHECK(stats.n_reps == 200);
  CHECK(stats.h_wins + stats.m_wins + stats.undecided == 200);
  CHECK(stats.m_win_rate == static_cast<double>(stats.m_wins) / 200.0);
  double p = stats.m_win_rate;
  CHECK(stats.standard_error == doctest::Approx(std::sqrt(p * (1.0 - p) / 200.0)).epsilon(1e-15));
}

TEST_CASE("a symmetric duel never produces a winner") {
  BatchSpec spec;
  spec.base_params = symmetric_params();
  spec.n_reps = 50;
  spec.base_seed = 7;
  WinStats stats = estimate_win_rate(spec);
  CHECK(stats.h_wins == 0);
  CHECK(stats.m_wins == 0);
  CHECK(stats.undecided == 50);
  CHECK(stats.m_win_rate == 0.0);
  CHECK(stats.standard_error == 0.0);
}

TEST_CASE("replication i equals a standalone run with seed base_seed + i") {
  BatchSpec spec;
  spec.n_reps = 8;
  spec.base_seed = 900;
  std::vector<Outcome> outcomes = run_batch(spec);
  REQUIRE(outcomes.size() == 8);
  for (int i = 0; i < 8; ++i) {
    Trajectory solo =
        run_cycle(spec.base_params, TpProvider::seeded(spec.base_seed + static_cast<std::uint64_t>(i)));
    CHECK(outcomes[static_cast<size_t>(i)].winner == solo.outcome.winner);
    CHECK(outcomes[static_cast<size_t>(i)].final_share_h == solo.outcome.final_share_h);
    CHECK(outcomes[static_cast<size_t>(i)].half_crossings == solo.outcome.half_crossings);
  }
}

TEST_CASE("results do not depend on the degree of parallelism") {
  BatchSpec spec;
  spec.n_reps = 64;
  spec.base_seed = 1234;
  std::vector<Outcome> serial = run_batch(spec, 1);
  std::vector<Outcome> parallel = run_batch(spec, 4);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].winner == parallel[i].winner);
    CHECK(serial[i].final_share_h == parallel[i].final_share_h);
    CHECK(serial[i].half_crossings == parallel[i].half_crossings);
  }
  WinStats a = aggregate_win_stats(serial);
  WinStats b = aggregate_win_stats(parallel);
  CHECK(a.m_win_rate == b.m_win_rate);
  CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("estimates are reproducible") {
  BatchSpec spec;
  spec.n_reps = 100;
  spec.base_seed = 5;
  WinStats a = estimate_win_rate(spec);
  WinStats b = estimate_win_rate(spec);
  CHECK(a.h_wins == b.h_wins);
  CHECK(a.m_wins == b.m_wins);
  CHECK(a.undecided == b.undecided);
}

TEST_CASE("a hugely advantaged challenger wins every run") {
  BatchSpec spec;
  spec.base_params.firm_m.tech_exponent = spec.base_params.firm_h.tech_exponent + 2.0;
  spec.n_reps = 100;
  spec.base_seed = 11;
  WinStats stats = estimate_win_rate(spec);
  CHECK(stats.m_win_rate == 1.0);
  CHECK(stats.undecided == 0);
}

TEST_CASE("batch spec validation") {
  BatchSpec spec;
  spec.n_reps = 0;
  CHECK_THROWS_AS(estimate_win_rate(spec), ValidationError);
  BatchSpec bad_params;
  bad_params.base_params.periods = -3;
  CHECK_THROWS_AS(estimate_win_rate(bad_params), ValidationError);
}

TEST_CASE("calibration lands on an even match") {
  CalibrationSpec spec;  // defaults: bracket [2, 4], 2000 reps, seed 1000
  spec.reps_per_eval = 400;  // lighter for the unit suite
  CalibrationResult result = find_balanced_exponent(spec);
  CHECK(result.converged);
  CHECK(result.balanced_m_exp > spec.base_params.firm_h.tech_exponent);
  CHECK(result.balanced_m_exp < spec.m_exp_high);
  CHECK(std::abs(result.achieved_stats.m_win_rate - 0.5) <= spec.tolerance);
  CHECK(result.iterations_used <= spec.max_iterations);
  // History holds both endpoints plus every midpoint evaluation.
  REQUIRE(result.bracket_history.size() >= 3);
  CHECK(result.bracket_history[0].m_exp == spec.m_exp_low);
  CHECK(result.bracket_history[1].m_exp == spec.m_exp_high);

  // Soundness: re-estimating at the returned exponent reproduces the stats.
  BatchSpec check_spec;
  check_spec.base_params = spec.base_params;
  check_spec.base_params.firm_m.tech_exponent = result.balanced_m_exp;
  check_spec.n_reps = spec.reps_per_eval;
  check_spec.base_seed = spec.base_seed;
  WinStats again = estimate_win_rate(check_spec);
  CHECK(again.m_wins == result.achieved_stats.m_wins);
  CHECK(again.h_wins == result.achieved_stats.h_wins);
}

TEST_CASE("calibration rejects a bracket that misses the target") {
  CalibrationSpec spec;
  spec.m_exp_low = 3.5;  // challenger already dominant across the bracket
  spec.m_exp_high = 4.0;
  spec.reps_per_eval = 200;
  try {
    find_balanced_exponent(spec);
    FAIL("expected BracketError");
  } catch (const BracketError& e) {
    CHECK(e.rate_low > 0.5);
    CHECK(e.rate_high >= e.rate_low);
    CHECK(std::string(e.what()).find("bracket") != std::string::npos);
  }
}

TEST_CASE("calibration reports non-convergence honestly") {
  CalibrationSpec spec;
  spec.reps_per_eval = 200;
  spec.target = 0.500001;  // unreachable exactly; empirical rates are k/200
  spec.tolerance = 1e-9;
  spec.max_iterations = 5;
  CalibrationResult result = find_balanced_exponent(spec);
  CHECK_FALSE(result.converged);
  CHECK(result.iterations_used == 5);
  // Best iterate is still a sensible interior point.
  CHECK(result.balanced_m_exp >= spec.m_exp_low);
  CHECK(result.balanced_m_exp <= spec.m_exp_high);
}

TEST_CASE("calibration spec validation") {
  CalibrationSpec spec;
  spec.m_exp_low = 3.0;
  spec.m_exp_high = 2.0;
  CHECK_THROWS_AS(find_balanced_exponent(spec), ValidationError);
  CalibrationSpec bad_target;
  bad_target.target = 1.5;
  CHECK_THROWS_AS(find_balanced_exponent(bad_target), ValidationError);
}

TEST_CASE("sweep walks the win-rate curve upward") {
  SimParams base;
  std::vector<double> grid{1.8, 2.2, 2.6, 3.0, 3.4};
  std::vector<SweepPoint> points = exponent_sweep(base, grid, 300, 1000);
  REQUIRE(points.size() == grid.size());
  for (size_t i = 0; i < grid.size(); ++i) CHECK(points[i].m_exp == grid[i]);
  CHECK(points.front().stats.m_win_rate <= 0.1);
  CHECK(points.back().stats.m_win_rate >= 0.9);
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    double se = std::hypot(points[i].stats.standard_error, points[i + 1].stats.standard_error);
    CHECK(points[i + 1].stats.m_win_rate >= points[i].stats.m_win_rate - 2.0 * se);
  }
}

TEST_CASE("sweep validates its grid") {
  SimParams base;
  std::vector<double> unsorted{2.0, 1.5};
  CHECK_THROWS_AS(exponent_sweep(base, unsorted, 50, 1), ValidationError);
  std::vector<double> duplicated{2.0, 2.0};
  CHECK_THROWS_AS(exponent_sweep(base, duplicated, 50, 1), ValidationError);
  std::vector<double> empty;
  CHECK_THROWS_AS(exponent_sweep(base, empty, 50, 1), ValidationError);
  std::vector<double> single{2.5};
  CHECK(exponent_sweep(base, single, 50, 1).size() == 1);
}

TEST_CASE("census tallies every run exactly once") {
  BatchSpec spec;
  spec.n_reps = 300;
  spec.base_seed = 1000;
  ShapeCensus census = shape_census(spec);
  CHECK(census.n_reps == 300);
  int histogram_total = 0;
  for (const auto& [crossings, count] : census.crossing_histogram) {
    CHECK(crossings >= 0);
    CHECK(count > 0);
    histogram_total += count;
  }
  CHECK(histogram_total == 300);
  int tally_total = 0;
  for (const auto& [crossings, tally] : census.by_winner) {
    CHECK(census.crossing_histogram.at(crossings) ==
          tally.h_wins + tally.m_wins + tally.undecided);
    tally_total += tally.h_wins + tally.m_wins + tally.undecided;
  }
  CHECK(tally_total == 300);
}

TEST_CASE("a one-sided duel gives monotone H-win shapes") {
  BatchSpec spec;
  spec.base_params.firm_m.tech_exponent = 1.0;  // far below H's 2.0
  spec.base_params.aggression.alpha_protect = 0.0;
  spec.base_params.aggression.alpha_attack = 0.0;
  spec.n_reps = 60;
  spec.base_seed = 3;
  ShapeCensus census = shape_census(spec);
  // Every run: H pulls away immediately and never cedes the lead.
  REQUIRE(census.by_winner.count(0) == 1);
  CHECK(census.by_winner.at(0).h_wins == 60);
  CHECK(census.crossing_histogram.at(0) == 60);
}

TEST_CASE("a symmetric batch lands entirely in the undecided bucket") {
  BatchSpec spec;
  spec.base_params = symmetric_params();
  spec.n_reps = 40;
  spec.base_seed = 9;
  ShapeCensus census = shape_census(spec);
  REQUIRE(census.by_winner.count(0) == 1);
  CHECK(census.by_winner.at(0).undecided == 40);
}
