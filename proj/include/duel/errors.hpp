#pragma once

#include <stdexcept>
#include <string>

namespace duel {

// Bad parameters, malformed config/input values. CLI exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// An exogenous TP sequence was asked for more values than it holds.
struct SequenceExhausted : ValidationError {
  explicit SequenceExhausted(const std::string& what) : ValidationError(what) {}
};

// Calibration target not straddled by the win rates at the bracket endpoints.
struct BracketError : ValidationError {
  BracketError(const std::string& what, double rate_low_, double rate_high_)
      : ValidationError(what), rate_low(rate_low_), rate_high(rate_high_) {}
  double rate_low;
  double rate_high;
};

// Filesystem / stream failures. CLI exit code 2.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace duel
