#include "duel/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <initializer_list>
#include <string>

#include "duel/errors.hpp"
#include "duel/io.hpp"

namespace duel {

namespace {

using nlohmann::json;

std::string joined(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json& obj, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* name : allowed) {
      if (it.key() == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError("config: unknown key \"" + joined(prefix, it.key()) + "\"");
    }
  }
}

const json* child_object(const json& obj, const char* key, const std::string& prefix) {
  if (!obj.contains(key)) return nullptr;
  const json& child = obj.at(key);
  if (!child.is_object()) {
    throw ValidationError("config: key \"" + joined(prefix, key) + "\": expected an object");
  }
  return &child;
}

void get_double(const json& obj, const char* key, const std::string& prefix, double& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw ValidationError("config: key \"" + joined(prefix, key) + "\": expected a number");
  }
  out = v.get<double>();
}

void get_int(const json& obj, const char* key, const std::string& prefix, int& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ValidationError("config: key \"" + joined(prefix, key) + "\": expected an integer");
  }
  out = v.get<int>();
}

void get_uint64(const json& obj, const char* key, const std::string& prefix,
                std::uint64_t& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0)) {
    throw ValidationError("config: key \"" + joined(prefix, key) +
                          "\": expected a non-negative integer");
  }
  out = v.get<std::uint64_t>();
}

void get_bool(const json& obj, const char* key, const std::string& prefix, bool& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_boolean()) {
    throw ValidationError("config: key \"" + joined(prefix, key) + "\": expected a boolean");
  }
  out = v.get<bool>();
}

void get_string(const json& obj, const char* key, const std::string& prefix, std::string& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_string()) {
    throw ValidationError("config: key \"" + joined(prefix, key) + "\": expected a string");
  }
  out = v.get<std::string>();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace

BatchSpec ScenarioConfig::batch_spec() const {
  BatchSpec spec;
  spec.base_params = params;
  spec.n_reps = batch.reps;
  spec.base_seed = batch.base_seed;
  return spec;
}

CalibrationSpec ScenarioConfig::calibration_spec() const {
  CalibrationSpec spec;
  spec.base_params = params;
  spec.m_exp_low = calibration.m_exp_low;
  spec.m_exp_high = calibration.m_exp_high;
  spec.target = calibration.target;
  spec.tolerance = calibration.tolerance;
  spec.reps_per_eval = calibration.reps_per_eval;
  spec.max_iterations = calibration.max_iterations;
  spec.base_seed = calibration.base_seed;
  return spec;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: parse error: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("config: top level must be a JSON object");
  }

  ScenarioConfig config;
  check_keys(doc, "",
             {"periods", "initial_share_h", "initial_profit_scale", "win_epsilon", "firm_h",
              "firm_m", "bank", "aggression", "tp", "batch", "calibration"});

  get_int(doc, "periods", "", config.params.periods);
  get_double(doc, "initial_share_h", "", config.params.initial_share_h);
  get_double(doc, "initial_profit_scale", "", config.params.initial_profit_scale);
  get_double(doc, "win_epsilon", "", config.params.win_epsilon);

  if (const json* firm_h = child_object(doc, "firm_h", "")) {
    check_keys(*firm_h, "firm_h", {"tech_exponent"});
    get_double(*firm_h, "tech_exponent", "firm_h", config.params.firm_h.tech_exponent);
  }
  if (const json* firm_m = child_object(doc, "firm_m", "")) {
    check_keys(*firm_m, "firm_m", {"tech_exponent"});
    get_double(*firm_m, "tech_exponent", "firm_m", config.params.firm_m.tech_exponent);
  }
  if (const json* bank = child_object(doc, "bank", "")) {
    check_keys(*bank, "bank", {"loan_scale", "money_exponent"});
    get_double(*bank, "loan_scale", "bank", config.params.bank.loan_scale);
    get_double(*bank, "money_exponent", "bank", config.params.bank.money_exponent);
  }
  if (const json* aggression = child_object(doc, "aggression", "")) {
    check_keys(*aggression, "aggression",
               {"alpha_protect", "alpha_attack", "bonus_in_loan_base"});
    get_double(*aggression, "alpha_protect", "aggression",
               config.params.aggression.alpha_protect);
    get_double(*aggression, "alpha_attack", "aggression", config.params.aggression.alpha_attack);
    get_bool(*aggression, "bonus_in_loan_base", "aggression",
             config.params.aggression.bonus_in_loan_base);
  }
  if (const json* tp = child_object(doc, "tp", "")) {
    check_keys(*tp, "tp", {"seed", "file"});
    if (tp->contains("seed")) {
      std::uint64_t seed = 0;
      get_uint64(*tp, "seed", "tp", seed);
      config.tp.seed = seed;
    }
    if (tp->contains("file")) {
      std::string file;
      get_string(*tp, "file", "tp", file);
      config.tp.file = file;
    }
    if (config.tp.seed && config.tp.file) {
      throw ValidationError("config: tp: set at most one of \"seed\" and \"file\"");
    }
  }
  if (const json* batch = child_object(doc, "batch", "")) {
    check_keys(*batch, "batch", {"reps", "base_seed"});
    get_int(*batch, "reps", "batch", config.batch.reps);
    get_uint64(*batch, "base_seed", "batch", config.batch.base_seed);
  }
  if (const json* calibration = child_object(doc, "calibration", "")) {
    check_keys(*calibration, "calibration",
               {"m_exp_low", "m_exp_high", "target", "tolerance", "reps_per_eval",
                "max_iterations", "base_seed"});
    get_double(*calibration, "m_exp_low", "calibration", config.calibration.m_exp_low);
    get_double(*calibration, "m_exp_high", "calibration", config.calibration.m_exp_high);
    get_double(*calibration, "target", "calibration", config.calibration.target);
    get_double(*calibration, "tolerance", "calibration", config.calibration.tolerance);
    get_int(*calibration, "reps_per_eval", "calibration", config.calibration.reps_per_eval);
    get_int(*calibration, "max_iterations", "calibration", config.calibration.max_iterations);
    get_uint64(*calibration, "base_seed", "calibration", config.calibration.base_seed);
  }

  config.params.validate();
  config.batch_spec().validate();
  config.calibration_spec().validate();
  return config;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::string text = read_text_file(path);
  try {
    return parse_config_text(text);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

nlohmann::json serialize_config(const ScenarioConfig& config) {
  json doc;
  doc["periods"] = config.params.periods;
  doc["initial_share_h"] = config.params.initial_share_h;
  doc["initial_profit_scale"] = config.params.initial_profit_scale;
  doc["win_epsilon"] = config.params.win_epsilon;
  doc["firm_h"] = {{"tech_exponent", config.params.firm_h.tech_exponent}};
  doc["firm_m"] = {{"tech_exponent", config.params.firm_m.tech_exponent}};
  doc["bank"] = {{"loan_scale", config.params.bank.loan_scale},
                 {"money_exponent", config.params.bank.money_exponent}};
  doc["aggression"] = {{"alpha_protect", config.params.aggression.alpha_protect},
                       {"alpha_attack", config.params.aggression.alpha_attack},
                       {"bonus_in_loan_base", config.params.aggression.bonus_in_loan_base}};
  json tp = json::object();
  if (config.tp.seed) tp["seed"] = *config.tp.seed;
  if (config.tp.file) tp["file"] = *config.tp.file;
  if (!tp.empty()) doc["tp"] = tp;
  doc["batch"] = {{"reps", config.batch.reps}, {"base_seed", config.batch.base_seed}};
  doc["calibration"] = {{"m_exp_low", config.calibration.m_exp_low},
                        {"m_exp_high", config.calibration.m_exp_high},
                        {"target", config.calibration.target},
                        {"tolerance", config.calibration.tolerance},
                        {"reps_per_eval", config.calibration.reps_per_eval},
                        {"max_iterations", config.calibration.max_iterations},
                        {"base_seed", config.calibration.base_seed}};
  return doc;
}

std::string config_hash(const ScenarioConfig& config) {
  json doc = serialize_config(config);
  doc.erase("tp");  // the scenario, not the particular TP source
  const std::uint64_t hash = fnv1a64(doc.dump());
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, hash);
  return buf;
}

}  // namespace duel
