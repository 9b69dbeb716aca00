#pragma once

#include <span>
#include <string>
#include <vector>

#include "duel/params.hpp"
#include "duel/tp.hpp"

namespace duel {

// One firm's slice of a period: the loan it invested, the profit the market
// returned, and its normalized share of that profit pool.
struct FirmState {
  double investment = 0.0;
  double profit = 0.0;
  double market_share = 0.0;
};

struct PeriodRecord {
  int period = 0;  // 1-based
  double tp = 0.0;
  FirmState h;
  FirmState m;
  double protect_bonus = 0.0;  // money added to M's share numerator
  double attack_bonus = 0.0;
};

enum class Winner { kH, kM, kNone };

struct Outcome {
  Winner winner = Winner::kNone;
  double final_share_h = 0.0;
  int half_crossings = 0;  // strict sign changes of (h_share - 1/2)
};

struct Trajectory {
  SimParams params;
  std::string tp_source;
  std::vector<PeriodRecord> records;
  Outcome outcome;
};

// ---- per-period operations on plain money amounts ----

// profit = tp^tech_exponent * investment
double profit(double tp, double tech_exponent, double investment);

// loan = loan_scale * prev_profit^money_exponent; a firm with zero previous
// profit gets nothing.
double bank_loan(double prev_profit, const BankParams& bank);

// "Protect your success": fires when M's share rose strictly on each of the
// last two recorded transitions. Histories include the initial (period-0)
// share, so the rule can first fire in period 3.
bool protect_triggered(std::span<const double> m_share_history);

// "Attack when the adversary hesitates": fires when H's share fell strictly
// on the last recorded transition; possible from period 2 on.
bool attack_triggered(std::span<const double> h_share_history);

double protect_bonus(std::span<const double> m_share_history, double alpha_protect,
                     double m_profit);
double attack_bonus(std::span<const double> h_share_history, double alpha_attack,
                    double m_profit);

struct SharePair {
  double h = 0.0;
  double m = 0.0;
};

// Normalizes the period's profit pool: H's numerator is its profit, M's is
// profit + bonuses. A dead market (zero pool) keeps the previous shares.
SharePair market_shares(double h_profit, double m_profit, double protect_bonus,
                        double attack_bonus, SharePair prev_shares);

// ---- the simulation loop ----

// Period state between steps. Money amounts are carried as natural logs: the
// bank/tech recurrence is linear in logs, and decisive runs push raw profits
// far outside double range. log_ratio = log(profit_h / profit_m) is carried
// by its own recurrence so the duel's decision variable never suffers
// cancellation between the two level variables.
struct EngineState {
  int completed_periods = 0;
  double log_profit_h = 0.0;
  double log_profit_m = 0.0;
  double log_ratio = 0.0;
  double last_bonus_log = 0.0;  // log of last period's bonus factor on M
  std::vector<double> h_share_history;  // entry 0 = initial share
  std::vector<double> m_share_history;
};

// Previous-period profits start at initial_profit_scale * initial share, and
// the share histories start with the period-0 shares.
EngineState init_state(const SimParams& params);

// Advances one period: TP is given; both firms borrow against last period's
// profit, earn tp^exponent per unit invested, M's bonuses are judged on the
// history so far, and shares are renormalized.
PeriodRecord step(EngineState& state, double tp, const SimParams& params);

// Winner H if the final h share reached 1 - win_epsilon, M if it fell to
// win_epsilon, none otherwise. Crossings are counted between consecutive
// recorded periods.
Outcome classify_outcome(std::span<const PeriodRecord> records, double win_epsilon);

// Runs `params.periods` periods. Validates params first, and checks that an
// exogenous provider holds enough values before any period runs.
Trajectory run_cycle(const SimParams& params, const TpProvider& provider);

}  // namespace duel
