#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lexent {

// All recoverable failures in the library surface as this exception. The
// message carries enough context (stage, line number, offending value) to
// be shown to a user as-is.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics (clamped SVD rank, empty dataset, ...). The default
// handler writes to stderr; tests install their own to capture them.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

// Seeded generator used everywhere randomness is needed. Draws are built from
// raw 64-bit outputs so results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n).
  std::size_t below(std::size_t n);
  // Index drawn proportionally to exp(log_weights[i]).
  std::size_t categorical_log(const std::vector<double>& log_weights);
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a salt.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t stable_hash(std::string_view text);

std::vector<std::string> split(std::string_view text, char delimiter);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view trim(std::string_view text);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

}  // namespace lexent
