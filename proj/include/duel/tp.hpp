#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace duel {

// Technical progress draws live in [kTpMin, kTpMax].
inline constexpr double kTpMin = 1.0;
inline constexpr double kTpMax = 10.0;

enum class TpMode { kSeededRandom, kExogenousSequence };

// Source of the per-period technical-progress draw. Immutable after
// construction; a value at a given draw index is a pure function of the
// provider, so runs are reproducible and replayable.
//
// Seeded mode: draw i is the i-th variate of a std::mt19937_64 seeded with
// `seed`, mapped to [1, 10) via the top 53 bits of the 64-bit output
// (u = (x >> 11) * 2^-53; tp = 1 + 9u). Both the engine stream and the
// mapping are pinned by the C++ standard, so sequences are identical across
// platforms and compilers.
struct TpProvider {
  TpMode mode = TpMode::kSeededRandom;
  std::uint64_t seed = 0;
  std::vector<double> sequence;  // exogenous mode only
  std::string origin;            // human-readable source tag

  static TpProvider seeded(std::uint64_t seed);
  // Validates every value into [1, 10]; offending entries are reported with
  // their 1-based position. `origin` labels error messages and trajectories.
  static TpProvider exogenous(std::vector<double> values, std::string origin = "sequence");

  std::string descriptor() const;  // e.g. "seed:42" or "file:shocks.txt"
};

// Maps one engine output to [1, 10). Exposed for tests.
double tp_from_bits(std::uint64_t bits);

// The TP value for 1-based draw `index`. Pure in (provider, index); throws
// SequenceExhausted when an exogenous sequence is too short and
// ValidationError for index < 1.
double tp_next(const TpProvider& provider, int index);

// Sequential reader producing tp_next(provider, 1), tp_next(provider, 2), ...
// without re-seeding on every draw.
class TpStream {
 public:
  explicit TpStream(const TpProvider& provider);
  double next();

 private:
  const TpProvider* provider_;
  std::mt19937_64 engine_;
  int index_ = 0;  // draws handed out so far
};

// Loads an exogenous sequence: one decimal literal per line. Errors carry the
// 1-based line number; line i supplies period i's TP.
TpProvider load_tp_file(const std::string& path);

}  // namespace duel
