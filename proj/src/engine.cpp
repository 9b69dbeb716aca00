#include "duel/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "duel/errors.hpp"

namespace duel {

namespace {

// Log-domain state is saturated here so that no finite horizon can push the
// recurrences into non-finite arithmetic. exp() of anything near the clamp is
// already 0 or inf, so the saturation is unobservable in records.
constexpr double kLogClamp = 1e300;

double clamp_log(double x) { return std::clamp(x, -kLogClamp, kLogClamp); }

// Numerically stable 1 / (1 + e^-r); exact 0.5 at r = 0.
double logistic(double r) {
  if (r >= 0.0) {
    return 1.0 / (1.0 + std::exp(-r));
  }
  const double e = std::exp(r);
  return e / (1.0 + e);
}

[[noreturn]] void fail(const std::string& message) { throw ValidationError(message); }

void check_positive(double v, const char* field) {
  // The upper cap keeps every log-domain intermediate finite.
  if (!(v > 0.0) || !(v <= 1e6)) {
    fail(std::string(field) + " must be in (0, 1e6], got " + std::to_string(v));
  }
}

}  // namespace

void SimParams::validate() const {
  if (periods < 1 || periods > 10'000'000) {
    fail("periods must be between 1 and 10000000, got " + std::to_string(periods));
  }
  if (!(initial_share_h > 0.0 && initial_share_h < 1.0)) {
    fail("initial_share_h must be strictly between 0 and 1, got " +
         std::to_string(initial_share_h));
  }
  if (!(initial_profit_scale > 0.0) || !std::isfinite(initial_profit_scale)) {
    fail("initial_profit_scale must be a positive finite value, got " +
         std::to_string(initial_profit_scale));
  }
  check_positive(firm_h.tech_exponent, "firm_h.tech_exponent");
  check_positive(firm_m.tech_exponent, "firm_m.tech_exponent");
  check_positive(bank.loan_scale, "bank.loan_scale");
  check_positive(bank.money_exponent, "bank.money_exponent");
  if (!(aggression.alpha_protect >= 0.0) || !(aggression.alpha_protect <= 1e6)) {
    fail("aggression.alpha_protect must be in [0, 1e6], got " +
         std::to_string(aggression.alpha_protect));
  }
  if (!(aggression.alpha_attack >= 0.0) || !(aggression.alpha_attack <= 1e6)) {
    fail("aggression.alpha_attack must be in [0, 1e6], got " +
         std::to_string(aggression.alpha_attack));
  }
  if (!(win_epsilon > 0.0 && win_epsilon < 0.5)) {
    fail("win_epsilon must be strictly between 0 and 0.5, got " + std::to_string(win_epsilon));
  }
}

double profit(double tp, double tech_exponent, double investment) {
  return std::pow(tp, tech_exponent) * investment;
}

double bank_loan(double prev_profit, const BankParams& bank) {
  return bank.loan_scale * std::pow(prev_profit, bank.money_exponent);
}

bool protect_triggered(std::span<const double> m_share_history) {
  const size_t n = m_share_history.size();
  return n >= 3 && m_share_history[n - 3] < m_share_history[n - 2] &&
         m_share_history[n - 2] < m_share_history[n - 1];
}

bool attack_triggered(std::span<const double> h_share_history) {
  const size_t n = h_share_history.size();
  return n >= 2 && h_share_history[n - 1] < h_share_history[n - 2];
}

double protect_bonus(std::span<const double> m_share_history, double alpha_protect,
                     double m_profit) {
  return protect_triggered(m_share_history) ? alpha_protect * m_profit : 0.0;
}

double attack_bonus(std::span<const double> h_share_history, double alpha_attack,
                    double m_profit) {
  return attack_triggered(h_share_history) ? alpha_attack * m_profit : 0.0;
}

SharePair market_shares(double h_profit, double m_profit, double protect_bonus,
                        double attack_bonus, SharePair prev_shares) {
  const double m_numerator = m_profit + protect_bonus + attack_bonus;
  const double total = h_profit + m_numerator;
  if (total == 0.0) return prev_shares;  // dead market: nothing to renormalize
  return {h_profit / total, m_numerator / total};
}

EngineState init_state(const SimParams& params) {
  const double prev_h = params.initial_profit_scale * params.initial_share_h;
  const double prev_m = params.initial_profit_scale * (1.0 - params.initial_share_h);
  EngineState s;
  s.log_profit_h = std::log(prev_h);
  s.log_profit_m = std::log(prev_m);
  s.log_ratio = std::log(prev_h / prev_m);
  s.last_bonus_log = 0.0;
  s.h_share_history = {params.initial_share_h};
  s.m_share_history = {1.0 - params.initial_share_h};
  return s;
}

PeriodRecord step(EngineState& s, double tp, const SimParams& p) {
  if (!(tp >= kTpMin && tp <= kTpMax)) {
    fail("TP value " + std::to_string(tp) + " outside [1, 10]");
  }
  const double log_tp = std::log(tp);
  const double log_scale = std::log(p.bank.loan_scale);
  const double mu = p.bank.money_exponent;
  // When bonuses count toward the loan base, M borrows against profit times
  // last period's bonus factor.
  const double carry = p.aggression.bonus_in_loan_base ? s.last_bonus_log : 0.0;

  // Bank window: both firms invest exactly what they are lent.
  const double log_inv_h = log_scale + mu * s.log_profit_h;
  const double log_inv_m = log_scale + mu * (s.log_profit_m + carry);
  // Market window: profit = tp^exponent * investment.
  const double log_prof_h = p.firm_h.tech_exponent * log_tp + log_inv_h;
  const double log_prof_m = p.firm_m.tech_exponent * log_tp + log_inv_m;
  // log(P_H / P_M) by its own recurrence; subtracting the level variables
  // would amplify rounding when the bank is superlinear.
  const double log_ratio = mu * (s.log_ratio - carry) +
                           (p.firm_h.tech_exponent - p.firm_m.tech_exponent) * log_tp;

  // Aggression rules are judged on completed periods only.
  const bool protect = protect_triggered(s.m_share_history);
  const bool attack = attack_triggered(s.h_share_history);
  const double bonus_factor = 1.0 + (protect ? p.aggression.alpha_protect : 0.0) +
                              (attack ? p.aggression.alpha_attack : 0.0);
  const double log_bonus = std::log(bonus_factor);

  // Share normalization: h = P_H / (P_H + factor * P_M).
  const double h_share = logistic(log_ratio - log_bonus);
  const double m_share = 1.0 - h_share;

  PeriodRecord r;
  r.period = s.completed_periods + 1;
  r.tp = tp;
  const double prof_m = std::exp(log_prof_m);
  r.h = {std::exp(log_inv_h), std::exp(log_prof_h), h_share};
  r.m = {std::exp(log_inv_m), prof_m, m_share};
  r.protect_bonus = protect ? p.aggression.alpha_protect * prof_m : 0.0;
  r.attack_bonus = attack ? p.aggression.alpha_attack * prof_m : 0.0;

  s.log_profit_h = clamp_log(log_prof_h);
  s.log_profit_m = clamp_log(log_prof_m);
  s.log_ratio = clamp_log(log_ratio);
  s.last_bonus_log = log_bonus;
  s.h_share_history.push_back(h_share);
  s.m_share_history.push_back(m_share);
  ++s.completed_periods;
  return r;
}

Outcome classify_outcome(std::span<const PeriodRecord> records, double win_epsilon) {
  if (records.empty()) fail("cannot classify an empty trajectory");
  Outcome o;
  o.final_share_h = records.back().h.market_share;
  if (o.final_share_h >= 1.0 - win_epsilon) {
    o.winner = Winner::kH;
  } else if (o.final_share_h <= win_epsilon) {
    o.winner = Winner::kM;
  } else {
    o.winner = Winner::kNone;
  }
  for (size_t i = 1; i < records.size(); ++i) {
    const double a = records[i - 1].h.market_share - 0.5;
    const double b = records[i].h.market_share - 0.5;
    if (a * b < 0.0) ++o.half_crossings;
  }
  return o;
}

Trajectory run_cycle(const SimParams& params, const TpProvider& provider) {
  params.validate();
  if (provider.mode == TpMode::kExogenousSequence &&
      provider.sequence.size() < static_cast<size_t>(params.periods)) {
    throw SequenceExhausted(provider.origin + ": sequence provides " +
                            std::to_string(provider.sequence.size()) + " values but " +
                            std::to_string(params.periods) + " periods were requested");
  }
  Trajectory traj;
  traj.params = params;
  traj.tp_source = provider.descriptor();
  traj.records.reserve(static_cast<size_t>(params.periods));
  EngineState state = init_state(params);
  TpStream stream(provider);
  for (int t = 0; t < params.periods; ++t) {
    traj.records.push_back(step(state, stream.next(), params));
  }
  traj.outcome = classify_outcome(traj.records, params.win_epsilon);
  return traj;
}

}  // namespace duel
