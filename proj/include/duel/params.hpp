#pragma once

#include <cstdint>

namespace duel {

// Challenger tech exponent shipped in the default scenario. Produced by the
// calibrate command (bracket [2,4], 2000 reps per eval, base seed 1000) so the
// default duel is an even match; see configs/default.json.
inline constexpr double kDefaultChallengerExponent = 2.34375;

// A firm turns bank money into profit at rate tp^tech_exponent per unit
// invested; the exponent is the firm's ability to exploit technical progress.
struct FirmParams {
  double tech_exponent = 1.0;
};

// The bank lends loan_scale * prev_profit^money_exponent each period.
// money_exponent > 1 makes lending superlinear in last period's success.
struct BankParams {
  double loan_scale = 1.0;
  double money_exponent = 1.5;
};

// Behavioural bonuses for the challenger M, expressed as fractions of M's
// current profit added to M's share numerator. bonus_in_loan_base additionally
// counts the previous period's bonuses toward M's next loan base (off by
// default: bonuses affect standing in the market, not the bank's books).
struct AggressionParams {
  double alpha_protect = 0.1;
  double alpha_attack = 0.1;
  bool bonus_in_loan_base = false;
};

struct SimParams {
  int periods = 30;
  double initial_share_h = 0.75;
  double initial_profit_scale = 1.0;
  FirmParams firm_h{2.0};
  FirmParams firm_m{kDefaultChallengerExponent};
  BankParams bank{};
  AggressionParams aggression{};
  // A run is decided when the final leading share reaches 1 - win_epsilon.
  double win_epsilon = 1e-3;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

}  // namespace duel
