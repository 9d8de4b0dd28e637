#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace frontnet {

// Thrown for malformed configs / bad user input. CLI maps this to exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a computation produces NaN/Inf, divides by zero, or an
// iteration fails to converge. CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

using Vec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

inline double sq(double x) { return x * x; }

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double dist2(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += sq(x[i] - y[i]);
  return std::sqrt(s);
}

// splitmix64, used to derive independent seeds for the per-phase RNG streams.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed for a named substream. Distinct tags and indices give unrelated streams,
// so e.g. the control phase of step n draws the same batches in every scheme.
inline uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t idx = 0) {
  return mix64(master ^ mix64(fnv1a64(tag)) ^ mix64(idx * 0x9e3779b97f4a7c15ULL + 1));
}

// mt19937_64 with an explicit uniform mapping. std::uniform_real_distribution
// is implementation defined; this keeps streams bit-identical everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    double u = (eng_() >> 11) * 0x1.0p-53;  // [0,1)
    return lo + (hi - lo) * u;
  }

  uint64_t next_u64() { return eng_(); }

  int uniform_int(int n) {  // [0, n)
    return static_cast<int>(eng_() % static_cast<uint64_t>(n));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace frontnet
