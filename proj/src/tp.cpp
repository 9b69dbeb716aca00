#include "duel/tp.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <utility>

#include "duel/errors.hpp"

namespace duel {

namespace {

std::string trimmed(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

TpProvider TpProvider::seeded(std::uint64_t seed) {
  TpProvider p;
  p.mode = TpMode::kSeededRandom;
  p.seed = seed;
  p.origin = "seed:" + std::to_string(seed);
  return p;
}

TpProvider TpProvider::exogenous(std::vector<double> values, std::string origin) {
  for (size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (!(v >= kTpMin && v <= kTpMax)) {
      throw ValidationError(origin + ": TP value " + std::to_string(v) + " at position " +
                            std::to_string(i + 1) + " outside [1, 10]");
    }
  }
  TpProvider p;
  p.mode = TpMode::kExogenousSequence;
  p.sequence = std::move(values);
  p.origin = std::move(origin);
  return p;
}

std::string TpProvider::descriptor() const { return origin; }

double tp_from_bits(std::uint64_t bits) {
  // Top 53 bits as a uniform draw on [0, 1), then affine map onto [1, 10).
  double unit = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return kTpMin + (kTpMax - kTpMin) * unit;
}

double tp_next(const TpProvider& provider, int index) {
  if (index < 1) {
    throw ValidationError("TP draw index must be >= 1, got " + std::to_string(index));
  }
  if (provider.mode == TpMode::kExogenousSequence) {
    size_t i = static_cast<size_t>(index);
    if (i > provider.sequence.size()) {
      throw SequenceExhausted(provider.origin + ": sequence has " +
                              std::to_string(provider.sequence.size()) +
                              " values, draw " + std::to_string(index) + " requested");
    }
    return provider.sequence[i - 1];
  }
  std::mt19937_64 engine(provider.seed);
  engine.discard(static_cast<unsigned long long>(index) - 1);
  return tp_from_bits(engine());
}

TpStream::TpStream(const TpProvider& provider) : provider_(&provider), engine_(provider.seed) {}

double TpStream::next() {
  ++index_;
  if (provider_->mode == TpMode::kExogenousSequence) {
    if (static_cast<size_t>(index_) > provider_->sequence.size()) {
      throw SequenceExhausted(provider_->origin + ": sequence has " +
                              std::to_string(provider_->sequence.size()) +
                              " values, draw " + std::to_string(index_) + " requested");
    }
    return provider_->sequence[static_cast<size_t>(index_) - 1];
  }
  return tp_from_bits(engine_());
}

TpProvider load_tp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open TP file: " + path);
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trimmed(line);
    if (t.empty()) {
      throw ValidationError(path + ": line " + std::to_string(line_no) +
                            ": empty line (one decimal literal per line)");
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw ValidationError(path + ": line " + std::to_string(line_no) +
                            ": not a decimal literal: '" + t + "'");
    }
    if (!(v >= kTpMin && v <= kTpMax)) {
      throw ValidationError(path + ": line " + std::to_string(line_no) + ": TP value " + t +
                            " outside [1, 10]");
    }
    values.push_back(v);
  }
  if (in.bad()) throw IoError("read failure on TP file: " + path);
  return TpProvider::exogenous(std::move(values), "file:" + path);
}

}  // namespace duel
