#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace statarb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error taxonomy used across the library. Callers that need to distinguish
// bad arguments from malformed files or numerically degenerate data can
// catch the specific type; everything derives from std::runtime_error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// splitmix64 step; used to derive independent sub-streams from one seed so
// that restarts / replications are reproducible regardless of scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Sample (n-1) standard deviation; the one convention used everywhere.
inline double sample_sd(const Vector& x) {
  const auto n = x.size();
  if (n < 2) return 0.0;
  const double mean = x.mean();
  return std::sqrt((x.array() - mean).square().sum() / static_cast<double>(n - 1));
}

inline double sample_sd(const std::vector<double>& x) {
  return sample_sd(Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size())));
}

// Half-open index range [begin, end) into a date axis.
struct IndexRange {
  int begin = 0;
  int end = 0;
  int length() const { return end - begin; }
  bool empty() const { return end <= begin; }
};

// FNV-1a over a string; used for config fingerprints in output files.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v);

}  // namespace statarb
