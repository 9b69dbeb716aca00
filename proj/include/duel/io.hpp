#pragma once

#include <span>
#include <string>

#include "json.hpp"

#include "duel/config.hpp"
#include "duel/engine.hpp"
#include "duel/experiments.hpp"

namespace duel {

// Fixed decimal formatting for emitted reals: %.17g, enough digits to
// round-trip any double exactly, so identical runs produce byte-identical
// files and a replayed TP column reproduces the original bits.
std::string fmt_real(double value);

std::string winner_name(Winner winner);

// trajectory.csv: header
// period,tp,h_investment,m_investment,h_profit,m_profit,protect_bonus,attack_bonus,h_share,m_share
// and one row per period.
void write_trajectory_csv(const Trajectory& trajectory, const std::string& path);

// Gnuplot-style two-column files: "period h_share" and "period tp".
void write_shares_dat(const Trajectory& trajectory, const std::string& path);
void write_tp_dat(const Trajectory& trajectory, const std::string& path);

nlohmann::json summary_json(const Trajectory& trajectory, const std::string& config_hash);
nlohmann::json win_stats_json(const WinStats& stats);
nlohmann::json census_json(const ShapeCensus& census);
nlohmann::json calibration_json(const CalibrationSpec& spec, const CalibrationResult& result,
                                const std::string& config_hash);

// sweep.csv: exactly four columns m_exp,m_win_rate,stderr,undecided_fraction.
void write_sweep_csv(std::span<const SweepPoint> points, const std::string& path);

void write_json_file(const nlohmann::json& doc, const std::string& path);
void write_text_file(const std::string& text, const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace duel
