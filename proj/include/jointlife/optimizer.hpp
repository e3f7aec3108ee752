#pragma once

#include <functional>
#include <span>
#include <vector>

namespace jointlife {

struct NelderMeadOptions {
  int max_evaluations = 5000;
  // Converged when the simplex's function spread is below
  // f_abs_tolerance + f_rel_tolerance * |f_best| and its diameter below
  // x_tolerance.
  double f_abs_tolerance = 1e-14;
  double f_rel_tolerance = 1e-10;
  double x_tolerance = 1e-7;
  double initial_step = 0.25;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Adaptive Nelder-Mead (dimension-dependent coefficients). After the simplex
/// collapses it restarts around the incumbent; convergence is declared only
/// when a restart fails to improve.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace jointlife
