#include <doctest.h>

#include <cmath>
#include <span>

#include "jointlife/optimizer.hpp"

using namespace jointlife;

TEST_CASE("simplex search finds the Rosenbrock minimum") {
  auto rosen = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = nelder_mead(rosen, {-1.2, 1.0}, {.max_evaluations = 20000});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.value < 1e-9);
}

TEST_CASE("simplex search in higher dimension") {
  auto bowl = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * std::pow(x[i] - 0.1 * i, 2);
    return s;
  };
  const auto r = nelder_mead(bowl, std::vector<double>(8, 1.0), {.max_evaluations = 40000});
  for (std::size_t i = 0; i < 8; ++i) CHECK(r.x[i] == doctest::Approx(0.1 * i).epsilon(1e-3).scale(1.0));
}

TEST_CASE("evaluation budget is respected") {
  int calls = 0;
  auto f = [&](std::span<const double> x) {
    ++calls;
    return x[0] * x[0] + x[1] * x[1];
  };
  const auto r = nelder_mead(f, {5.0, 5.0}, {.max_evaluations = 30});
  CHECK(calls <= 30);
  CHECK(r.evaluations == calls);
  CHECK_FALSE(r.converged);
}
