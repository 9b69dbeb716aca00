#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "duel/experiments.hpp"
#include "duel/params.hpp"

namespace duel {

struct TpConfig {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> file;
};

struct BatchConfig {
  int reps = 1000;
  std::uint64_t base_seed = 1000;
};

struct CalibrationConfig {
  double m_exp_low = 2.0;
  double m_exp_high = 4.0;
  double target = 0.5;
  double tolerance = 0.03;
  int reps_per_eval = 2000;
  int max_iterations = 40;
  std::uint64_t base_seed = 1000;
};

// Full scenario file: simulation parameters plus TP source and experiment
// settings. Every key is optional; an empty document means all defaults.
// Unknown keys are rejected with their dotted path, so typos cannot silently
// fall back to defaults.
struct ScenarioConfig {
  SimParams params;
  TpConfig tp;
  BatchConfig batch;
  CalibrationConfig calibration;

  BatchSpec batch_spec() const;
  CalibrationSpec calibration_spec() const;
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

// Serializes every resolved field (tp entries only when set). Parsing the
// result yields an equivalent config.
nlohmann::json serialize_config(const ScenarioConfig& config);

// FNV-1a 64 hash over the canonical serialization with the tp section
// removed: result files carry it so they are self-identifying, and a seeded
// run and its replay report the same scenario hash.
std::string config_hash(const ScenarioConfig& config);

}  // namespace duel
