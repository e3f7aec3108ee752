#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace jointlife {

// Mixes a base seed with a stream name and index into an independent seed.
// Every random draw in the library descends from one user seed through here.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

/// Portable generator: mt19937_64 is fully specified by the standard and the
/// variate transforms below avoid std::*_distribution, whose output differs
/// between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  int poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace jointlife
