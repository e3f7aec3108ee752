#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace jointlife {

/// Malformed or inconsistent input (maps to CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An optimizer or root finder could not satisfy its tolerance (exit code 3).
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A conditional quantity was requested on an empty risk set (exit code 4).
class EmptyRiskSetError : public std::runtime_error {
 public:
  EmptyRiskSetError(std::string condition, const std::string& what)
      : std::runtime_error(what), condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

// Worker cap shared by every parallel loop. Defaults to JOINTLIFE_THREADS if
// set, otherwise the hardware concurrency.
std::size_t max_threads();
void set_max_threads(std::size_t n);

// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
// write results into slot i so the outcome never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Shortest decimal representation that round-trips; used for every CSV/JSON
// number so outputs are byte-stable.
std::string format_double(double value);

}  // namespace jointlife
