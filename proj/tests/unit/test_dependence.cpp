#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "jointlife/common.hpp"
#include "jointlife/dependence.hpp"
#include "jointlife/random.hpp"
#include "oracles.hpp"

using namespace jointlife;

namespace {

PairedLifetimes as_pairs(const PseudoSample& s) { return {s.u, s.v}; }

PseudoSample countermonotone(std::size_t n) {
  PseudoSample s;
  for (std::size_t i = 1; i <= n; ++i) {
    s.u.push_back(double(i) / (n + 1));
    s.v.push_back(1.0 - s.u.back());
  }
  return s;
}

}  // namespace

TEST_CASE("spearman point estimate") {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> d(0, 15);
  std::vector<double> x(300), y(300);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = d(gen);
    y[i] = x[i] + d(gen);
  }
  CHECK(spearman_rho(x, y) == doctest::Approx(oracle::spearman(x, y)).epsilon(1e-12));

  const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 4, 6, 8, 10}, c{5, 4, 3, 2, 1}, k{1, 1, 1, 1, 1};
  CHECK(spearman_rho(a, b) == doctest::Approx(1.0));
  CHECK(spearman_rho(a, c) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(spearman_rho(a, k), InputError);
  CHECK_THROWS_AS(spearman_rho(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InputError);
}

TEST_CASE("spearman bootstrap interval") {
  const auto frank = as_pairs(sample(Frank{3.367}, 10000, 5));
  const auto r = spearman(frank, 200, 9);
  CHECK(std::abs(r.rho - 0.5) < 0.03);
  CHECK(r.ci_low < r.rho);
  CHECK(r.rho < r.ci_high);
  CHECK(r.resamples == 200);
  CHECK(r.n == 10000);

  const auto again = spearman(frank, 200, 9);
  CHECK(again.ci_low == r.ci_low);
  CHECK(again.ci_high == r.ci_high);

  const auto co = spearman(PairedLifetimes{{1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 6}}, 50, 1);
  CHECK(co.rho == doctest::Approx(1.0));
}

TEST_CASE("independent data: interval covers zero") {
  const int runs = 30;
  int covered = 0;
  for (int s = 0; s < runs; ++s) {
    const auto r = spearman(as_pairs(sample(Independent{}, 10000, 100 + s)), 200, 7 + s);
    covered += r.ci_low <= 0.0 && 0.0 <= r.ci_high;
  }
  CHECK(covered >= 27);
}

TEST_CASE("cohort buckets") {
  const auto pairs = as_pairs(sample(Frank{3.367}, 600, 13));
  std::vector<int> same_year(pairs.size(), 1834);
  const auto single = spearman_by_cohort(pairs, same_year, 100, 4);
  REQUIRE(single.cohorts.size() == 1);
  CHECK(single.cohorts[0].cohort == "1830-1839");
  const auto direct = spearman(pairs, 100, derive_seed(4, "cohort", 1830));
  CHECK(single.cohorts[0].result.rho == direct.rho);
  CHECK(single.cohorts[0].result.ci_low == direct.ci_low);
  CHECK(single.cohorts[0].result.ci_high == direct.ci_high);

  std::vector<int> years(pairs.size(), 1850);
  years[0] = years[1] = 1800;
  const auto split = spearman_by_cohort(pairs, years, 50, 4);
  CHECK(split.cohorts.size() == 1);
  CHECK(split.cohorts[0].first_year == 1850);
  REQUIRE(split.warnings.size() == 1);
  CHECK(split.warnings[0].find("1800-1809") != std::string::npos);

  std::ostringstream out;
  write_cohort_csv(out, split);
  CHECK(out.str().rfind("cohort,rho,ci_low,ci_high,n\n1850-1859,", 0) == 0);
}

TEST_CASE("constant dependence across cohorts") {
  const auto pairs = as_pairs(sample(Frank{3.367}, 10000, 31));
  std::vector<int> years(pairs.size());
  for (std::size_t i = 0; i < years.size(); ++i) years[i] = 1800 + 10 * static_cast<int>(i % 5);
  const auto report = spearman_by_cohort(pairs, years, 100, 2);
  REQUIRE(report.cohorts.size() == 5);
  double mean = 0.0;
  for (const auto& c : report.cohorts) {
    CHECK(std::abs(c.result.rho - 0.5) < 0.06);
    mean += c.result.rho / 5;
  }
  CHECK(std::abs(mean - 0.5) < 0.03);
}

TEST_CASE("empirical copula counts") {
  const std::vector<double> u{0.1, 0.5, 0.5, 0.95}, v{0.9, 0.25, 0.6, 0.05};
  const int g = 4;
  const auto c = empirical_copula_counts(u, v, g);
  for (int a = 0; a <= g; ++a) {
    for (int b = 0; b <= g; ++b) {
      int expected = 0;
      for (std::size_t i = 0; i < u.size(); ++i) expected += u[i] <= a / double(g) && v[i] <= b / double(g);
      CHECK(c[a * (g + 1) + b] == static_cast<std::uint32_t>(expected));
    }
  }
}

TEST_CASE("quadrant dependence test") {
  const PqdTestOptions opts{.grid = 100, .bootstraps = 500, .seed = 17};
  const auto counter = pqd_test(countermonotone(500), opts);
  CHECK(counter.p_value < 0.01);
  CHECK(counter.statistic > 0.0);

  const auto co = pqd_test(pseudo_observations(as_pairs(sample(Comonotone{}, 500, 2))), opts);
  CHECK(co.p_value > 0.5);

  const auto frank = pseudo_observations(as_pairs(sample(Frank{3.367}, 2000, 6)));
  auto nqd = opts;
  nqd.hypothesis = QuadrantHypothesis::nqd;
  CHECK(pqd_test(frank, nqd).p_value < 0.001);
  CHECK(pqd_test(frank, opts).p_value > 0.05);

  const auto again = pqd_test(countermonotone(500), opts);
  CHECK(again.statistic == counter.statistic);
  CHECK(again.exceedances == counter.exceedances);
  CHECK(counter.p_value == doctest::Approx(counter.exceedances / 500.0));

  CHECK_THROWS_AS(pqd_test(countermonotone(10), opts), InputError);
}

TEST_CASE("finer grids never lower the statistic") {
  const auto pseudo = pseudo_observations(as_pairs(sample(Clayton{0.5}, 400, 8)));
  for (int g : {5, 20, 50}) {
    const auto coarse = pqd_test(pseudo, {.grid = g, .bootstraps = 1});
    const auto fine = pqd_test(pseudo, {.grid = 2 * g, .bootstraps = 1});
    CHECK(std::isfinite(coarse.statistic));
    CHECK(fine.statistic >= coarse.statistic);
  }
}

TEST_CASE("rank statistics ignore increasing transforms") {
  const auto s = sample(Gaussian{0.4}, 500, 19);
  std::vector<double> tu(s.u.size()), tv(s.v.size());
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    tu[i] = std::exp(5 * s.u[i]);
    tv[i] = 1.0 / (1.5 - s.v[i]);
  }
  CHECK(spearman_rho(tu, tv) == doctest::Approx(spearman_rho(s.u, s.v)).epsilon(1e-14));
  const auto a = pqd_test(pseudo_observations({s.u, s.v}), {.grid = 50, .bootstraps = 50});
  const auto b = pqd_test(pseudo_observations({tu, tv}), {.grid = 50, .bootstraps = 50});
  CHECK(a.statistic == b.statistic);
  CHECK(a.p_value == b.p_value);
}
