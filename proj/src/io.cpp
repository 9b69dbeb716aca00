#include "duel/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "duel/errors.hpp"

namespace duel {

namespace {

using nlohmann::json;

void write_or_throw(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) {
    throw IoError("cannot open for writing: " + path);
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out.good()) {
    throw IoError("write failed: " + path);
  }
}

}  // namespace

std::string fmt_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string winner_name(Winner winner) {
  switch (winner) {
    case Winner::kH:
      return "H";
    case Winner::kM:
      return "M";
    case Winner::kNone:
      return "none";
  }
  return "none";
}

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
  std::string text =
      "period,tp,h_investment,m_investment,h_profit,m_profit,"
      "protect_bonus,attack_bonus,h_share,m_share\n";
  for (const PeriodRecord& rec : trajectory.records) {
    text += std::to_string(rec.period);
    text += ',';
    text += fmt_real(rec.tp);
    text += ',';
    text += fmt_real(rec.h.investment);
    text += ',';
    text += fmt_real(rec.m.investment);
    text += ',';
    text += fmt_real(rec.h.profit);
    text += ',';
    text += fmt_real(rec.m.profit);
    text += ',';
    text += fmt_real(rec.protect_bonus);
    text += ',';
    text += fmt_real(rec.attack_bonus);
    text += ',';
    text += fmt_real(rec.h.market_share);
    text += ',';
    text += fmt_real(rec.m.market_share);
    text += '\n';
  }
  write_or_throw(text, path);
}

void write_shares_dat(const Trajectory& trajectory, const std::string& path) {
  std::string text;
  for (const PeriodRecord& rec : trajectory.records) {
    text += std::to_string(rec.period);
    text += ' ';
    text += fmt_real(rec.h.market_share);
    text += '\n';
  }
  write_or_throw(text, path);
}

void write_tp_dat(const Trajectory& trajectory, const std::string& path) {
  std::string text;
  for (const PeriodRecord& rec : trajectory.records) {
    text += std::to_string(rec.period);
    text += ' ';
    text += fmt_real(rec.tp);
    text += '\n';
  }
  write_or_throw(text, path);
}

nlohmann::json summary_json(const Trajectory& trajectory, const std::string& config_hash) {
  json doc;
  doc["config_hash"] = config_hash;
  doc["tp_source"] = trajectory.tp_source;
  doc["periods"] = trajectory.records.size();
  doc["outcome"] = {{"winner", winner_name(trajectory.outcome.winner)},
                    {"final_share_h", trajectory.outcome.final_share_h},
                    {"half_crossings", trajectory.outcome.half_crossings}};
  return doc;
}

nlohmann::json win_stats_json(const WinStats& stats) {
  return json{{"n_reps", stats.n_reps},
              {"h_wins", stats.h_wins},
              {"m_wins", stats.m_wins},
              {"undecided", stats.undecided},
              {"m_win_rate", stats.m_win_rate},
              {"standard_error", stats.standard_error}};
}

nlohmann::json census_json(const ShapeCensus& census) {
  json rows = json::array();
  for (const auto& [crossings, count] : census.crossing_histogram) {
    json row{{"half_crossings", crossings}, {"count", count}};
    auto it = census.by_winner.find(crossings);
    if (it != census.by_winner.end()) {
      row["h_wins"] = it->second.h_wins;
      row["m_wins"] = it->second.m_wins;
      row["undecided"] = it->second.undecided;
    }
    rows.push_back(std::move(row));
  }
  return json{{"n_reps", census.n_reps}, {"crossings", rows}};
}

nlohmann::json calibration_json(const CalibrationSpec& spec, const CalibrationResult& result,
                                const std::string& config_hash) {
  json history = json::array();
  for (const BracketPoint& point : result.bracket_history) {
    history.push_back({{"m_exp", point.m_exp}, {"m_win_rate", point.m_win_rate}});
  }
  json doc;
  doc["config_hash"] = config_hash;
  doc["spec"] = {{"m_exp_low", spec.m_exp_low},
                 {"m_exp_high", spec.m_exp_high},
                 {"target", spec.target},
                 {"tolerance", spec.tolerance},
                 {"reps_per_eval", spec.reps_per_eval},
                 {"max_iterations", spec.max_iterations},
                 {"base_seed", spec.base_seed}};
  doc["result"] = {{"balanced_m_exp", result.balanced_m_exp},
                   {"converged", result.converged},
                   {"iterations_used", result.iterations_used},
                   {"achieved", win_stats_json(result.achieved_stats)},
                   {"bracket_history", std::move(history)}};
  return doc;
}

void write_sweep_csv(std::span<const SweepPoint> points, const std::string& path) {
  std::string text = "m_exp,m_win_rate,stderr,undecided_fraction\n";
  for (const SweepPoint& point : points) {
    const double undecided_fraction =
        point.stats.n_reps > 0
            ? static_cast<double>(point.stats.undecided) / point.stats.n_reps
            : 0.0;
    text += fmt_real(point.m_exp);
    text += ',';
    text += fmt_real(point.stats.m_win_rate);
    text += ',';
    text += fmt_real(point.stats.standard_error);
    text += ',';
    text += fmt_real(undecided_fraction);
    text += '\n';
  }
  write_or_throw(text, path);
}

void write_json_file(const nlohmann::json& doc, const std::string& path) {
  write_or_throw(doc.dump(2) + "\n", path);
}

void write_text_file(const std::string& text, const std::string& path) {
  write_or_throw(text, path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw IoError("cannot open for reading: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failed: " + path);
  }
  return buffer.str();
}

}  // namespace duel
