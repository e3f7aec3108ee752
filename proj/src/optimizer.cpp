#include "jointlife/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace jointlife {

namespace {

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> fx;
};

double safe_eval(const Objective& f, const std::vector<double>& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / dn;
  const double rho = 0.75 - 1.0 / (2.0 * dn);
  const double sigma = 1.0 - 1.0 / dn;

  NelderMeadResult result;
  result.x = start;
  result.value = safe_eval(f, start);
  result.evaluations = 1;
  if (n == 0) {
    result.converged = true;
    return result;
  }

  // Once the budget is spent, further trial points are treated as infeasible.
  auto eval = [&](const std::vector<double>& x) {
    if (result.evaluations >= options.max_evaluations) return std::numeric_limits<double>::max();
    ++result.evaluations;
    return safe_eval(f, x);
  };

  double step = options.initial_step;
  while (result.evaluations < options.max_evaluations) {
    Simplex s;
    s.x.assign(n + 1, result.x);
    s.fx.assign(n + 1, result.value);
    for (std::size_t i = 0; i < n; ++i) {
      s.x[i + 1][i] += (s.x[i + 1][i] != 0.0 ? step * std::max(1.0, std::abs(s.x[i + 1][i])) : step);
      s.fx[i + 1] = eval(s.x[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    bool collapsed = false;
    while (result.evaluations < options.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return s.fx[a] < s.fx[b]; });
      const auto best = order.front(), worst = order.back(), second = order[n - 1];

      double diameter = 0.0;
      for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t i = 0; i < n; ++i) diameter = std::max(diameter, std::abs(s.x[j][i] - s.x[best][i]));
      const double spread = s.fx[worst] - s.fx[best];
      if (spread <= options.f_abs_tolerance + options.f_rel_tolerance * std::abs(s.fx[best]) &&
          diameter <= options.x_tolerance) {
        collapsed = true;
        break;
      }
      ++result.iterations;

      std::vector<double> centroid(n, 0.0);
      for (std::size_t j = 0; j <= n; ++j)
        if (j != worst)
          for (std::size_t i = 0; i < n; ++i) centroid[i] += s.x[j][i] / dn;

      auto along = [&](double t) {
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + t * (s.x[worst][i] - centroid[i]);
        return p;
      };

      auto xr = along(-alpha);
      const double fr = eval(xr);
      if (fr < s.fx[best]) {
        auto xe = along(-alpha * gamma);
        const double fe = eval(xe);
        if (fe < fr) {
          s.x[worst] = std::move(xe), s.fx[worst] = fe;
        } else {
          s.x[worst] = std::move(xr), s.fx[worst] = fr;
        }
        continue;
      }
      if (fr < s.fx[second]) {
        s.x[worst] = std::move(xr), s.fx[worst] = fr;
        continue;
      }
      const bool outside = fr < s.fx[worst];
      auto xc = along(outside ? -alpha * rho : rho);
      const double fc = eval(xc);
      if (fc < (outside ? fr : s.fx[worst])) {
        s.x[worst] = std::move(xc), s.fx[worst] = fc;
        continue;
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (j == best) continue;
        for (std::size_t i = 0; i < n; ++i) s.x[j][i] = s.x[best][i] + sigma * (s.x[j][i] - s.x[best][i]);
        s.fx[j] = eval(s.x[j]);
      }
    }

    const auto best = static_cast<std::size_t>(std::min_element(s.fx.begin(), s.fx.end()) - s.fx.begin());
    const double previous = result.value;
    if (s.fx[best] <= result.value) {
      result.value = s.fx[best];
      result.x = s.x[best];
    }
    if (!collapsed) break;
    const double gain = previous - result.value;
    if (gain <= options.f_abs_tolerance + options.f_rel_tolerance * std::abs(result.value) &&
        step <= options.initial_step * 0.5) {
      result.converged = true;
      break;
    }
    // Restart around the incumbent with a smaller simplex.
    step = std::max(options.initial_step * 0.1, step * 0.5);
  }
  return result;
}

}  // namespace jointlife
