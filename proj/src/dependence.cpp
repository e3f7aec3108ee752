#include "jointlife/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "jointlife/common.hpp"
#include "jointlife/random.hpp"

namespace jointlife {

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double rank_correlation(std::span<const double> x, std::span<const double> y) {
  const auto rx = survival_ranks(x), ry = survival_ranks(y);
  return pearson(rx, ry);
}

// Linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Smallest a in [0, grid] with u <= a / grid.
int grid_cell(double u, int grid) {
  int a = std::clamp(static_cast<int>(std::ceil(u * grid)), 0, grid);
  while (a > 0 && u <= static_cast<double>(a - 1) / grid) --a;
  while (a < grid && u > static_cast<double>(a) / grid) ++a;
  return a;
}

std::vector<double> ascending_ranks(std::span<const double> values) {
  std::vector<double> negated(values.size());
  std::transform(values.begin(), values.end(), negated.begin(), [](double x) { return -x; });
  return survival_ranks(negated);
}

// max over a, b = 1..G of sign * (count_x - count_y) / n with integer counts.
double max_count_gap(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y, int grid) {
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  const auto stride = static_cast<std::size_t>(grid) + 1;
  for (std::size_t a = 1; a <= static_cast<std::size_t>(grid); ++a)
    for (std::size_t b = 1; b <= static_cast<std::size_t>(grid); ++b)
      best = std::max(best, static_cast<std::int64_t>(x[a * stride + b]) - static_cast<std::int64_t>(y[a * stride + b]));
  return static_cast<double>(best);
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("spearman: margins have different lengths");
  if (x.size() < 3) throw InputError("spearman needs at least 3 pairs");
  const double rho = rank_correlation(x, y);
  if (std::isnan(rho)) throw InputError("spearman is undefined for a constant margin");
  return rho;
}

SpearmanResult spearman(const PairedLifetimes& pairs, int resamples, std::uint64_t seed, double level) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0, 1)");
  if (resamples < 1) throw InputError("bootstrap needs at least one resample");
  SpearmanResult out;
  out.rho = spearman_rho(pairs.t1, pairs.t2);
  out.n = pairs.size();
  out.level = level;

  std::vector<double> reps(static_cast<std::size_t>(resamples));
  parallel_for(reps.size(), [&](std::size_t b) {
    Rng rng(derive_seed(seed, "spearman-bootstrap", b));
    std::vector<double> x(out.n), y(out.n);
    for (std::size_t i = 0; i < out.n; ++i) {
      const auto j = rng.below(out.n);
      x[i] = pairs.t1[j];
      y[i] = pairs.t2[j];
    }
    reps[b] = rank_correlation(x, y);
  });
  std::erase_if(reps, [](double r) { return std::isnan(r); });
  out.resamples = static_cast<int>(reps.size());
  if (reps.empty()) {
    out.ci_low = out.ci_high = out.rho;
    return out;
  }
  std::sort(reps.begin(), reps.end());
  out.ci_low = quantile(reps, (1.0 - level) / 2.0);
  out.ci_high = quantile(reps, 1.0 - (1.0 - level) / 2.0);
  return out;
}

CohortSpearmanReport spearman_by_cohort(const PairedLifetimes& pairs, std::span<const int> cohort_year,
                                        int resamples, std::uint64_t seed, int width, std::size_t min_n) {
  if (cohort_year.size() != pairs.size()) throw InputError("one cohort year is needed per pair");
  if (width < 1) throw InputError("cohort width must be positive");
  std::map<int, PairedLifetimes> buckets;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int y = cohort_year[i];
    const int first = y - (((y % width) + width) % width);
    auto& bucket = buckets[first];
    bucket.t1.push_back(pairs.t1[i]);
    bucket.t2.push_back(pairs.t2[i]);
  }
  CohortSpearmanReport report;
  for (const auto& [first, bucket] : buckets) {
    const std::string label = std::to_string(first) + "-" + std::to_string(first + width - 1);
    if (bucket.size() < std::max<std::size_t>(min_n, 3)) {
      report.warnings.push_back("cohort " + label + " skipped: " + std::to_string(bucket.size()) + " pairs");
      continue;
    }
    try {
      report.cohorts.push_back(
          {label, first, spearman(bucket, resamples, derive_seed(seed, "cohort", static_cast<std::uint64_t>(first)))});
    } catch (const InputError& e) {
      report.warnings.push_back("cohort " + label + " skipped: " + e.what());
    }
  }
  return report;
}

void write_cohort_csv(std::ostream& out, const CohortSpearmanReport& report) {
  out << "cohort,rho,ci_low,ci_high,n\n";
  for (const auto& c : report.cohorts)
    out << c.cohort << ',' << format_double(c.result.rho) << ',' << format_double(c.result.ci_low) << ','
        << format_double(c.result.ci_high) << ',' << c.result.n << '\n';
}

std::vector<std::uint32_t> empirical_copula_counts(std::span<const double> u, std::span<const double> v, int grid) {
  const auto stride = static_cast<std::size_t>(grid) + 1;
  std::vector<std::uint32_t> counts(stride * stride, 0);
  for (std::size_t i = 0; i < u.size(); ++i)
    ++counts[static_cast<std::size_t>(grid_cell(u[i], grid)) * stride + static_cast<std::size_t>(grid_cell(v[i], grid))];
  for (std::size_t a = 0; a < stride; ++a)
    for (std::size_t b = 1; b < stride; ++b) counts[a * stride + b] += counts[a * stride + b - 1];
  for (std::size_t a = 1; a < stride; ++a)
    for (std::size_t b = 0; b < stride; ++b) counts[a * stride + b] += counts[(a - 1) * stride + b];
  return counts;
}

PqdTestResult pqd_test(const PseudoSample& pseudo, const PqdTestOptions& options) {
  const std::size_t n = pseudo.size();
  if (pseudo.v.size() != n) throw InputError("pseudo-sample margins have different lengths");
  if (n < 20) throw InputError("the quadrant dependence test needs at least 20 pairs");
  if (options.grid < 2) throw InputError("the test grid must be at least 2 x 2");
  if (options.bootstraps < 1) throw InputError("the test needs at least one bootstrap replicate");
  const int g = options.grid;
  const auto stride = static_cast<std::size_t>(g) + 1;
  const double dn = static_cast<double>(n);
  const double root_n = std::sqrt(dn);
  const bool pqd = options.hypothesis == QuadrantHypothesis::pqd;

  const auto counts = empirical_copula_counts(pseudo.u, pseudo.v, g);
  double sup = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 1; a < stride; ++a) {
    for (std::size_t b = 1; b < stride; ++b) {
      const double indep = static_cast<double>(a * b) / static_cast<double>(g * g);
      const double emp = counts[a * stride + b] / dn;
      sup = std::max(sup, pqd ? indep - emp : emp - indep);
    }
  }

  PqdTestResult out;
  out.statistic = root_n * sup;
  out.grid = g;
  out.bootstraps = options.bootstraps;
  out.n = n;
  out.hypothesis = options.hypothesis;

  std::vector<double> stats(static_cast<std::size_t>(options.bootstraps));
  parallel_for(stats.size(), [&](std::size_t r) {
    Rng rng(derive_seed(options.seed, "pqd-bootstrap", r));
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = rng.below(n);
      u[i] = pseudo.u[j];
      v[i] = pseudo.v[j];
    }
    const auto star = empirical_copula_counts(ascending_ranks(u), ascending_ranks(v), g);
    const double gap = pqd ? max_count_gap(star, counts, g) : max_count_gap(counts, star, g);
    stats[r] = root_n * gap / dn;
  });
  for (double s : stats)
    if (s > out.statistic) ++out.exceedances;
  out.p_value = static_cast<double>(out.exceedances) / options.bootstraps;
  return out;
}

std::string to_string(QuadrantHypothesis h) { return h == QuadrantHypothesis::pqd ? "pqd" : "nqd"; }

}  // namespace jointlife
