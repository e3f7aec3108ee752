#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jointlife/copulas.hpp"

namespace jointlife {

// Rank correlation with average ranks for ties. Throws InputError for n < 3
// or a constant margin.
double spearman_rho(std::span<const double> x, std::span<const double> y);

struct SpearmanResult {
  double rho = 0.0;
  double ci_low = 0.0, ci_high = 0.0;
  double level = 0.95;
  std::size_t n = 0;
  int resamples = 0;  // bootstrap replicates that produced a finite correlation
};

/// Point estimate plus a percentile bootstrap interval from pair resampling.
SpearmanResult spearman(const PairedLifetimes& pairs, int resamples = 1000, std::uint64_t seed = 1,
                        double level = 0.95);

struct CohortSpearman {
  std::string cohort;  // e.g. "1800-1809"
  int first_year = 0;
  SpearmanResult result;
};

struct CohortSpearmanReport {
  std::vector<CohortSpearman> cohorts;  // ascending by first_year
  std::vector<std::string> warnings;    // one per skipped bucket
};

/// Spearman per bucket of `width` years of cohort_year (the first member's
/// birth year). Buckets with fewer than min_n pairs are skipped with a warning.
CohortSpearmanReport spearman_by_cohort(const PairedLifetimes& pairs, std::span<const int> cohort_year,
                                        int resamples = 1000, std::uint64_t seed = 1, int width = 10,
                                        std::size_t min_n = 3);

// CSV `cohort,rho,ci_low,ci_high,n`.
void write_cohort_csv(std::ostream& out, const CohortSpearmanReport& report);

/// Empirical copula counts on the grid (a/G, b/G), a, b = 0..G, stored
/// row-major with stride G + 1: entry (a, b) = #{u_i <= a/G, v_i <= b/G}.
std::vector<std::uint32_t> empirical_copula_counts(std::span<const double> u, std::span<const double> v, int grid);

enum class QuadrantHypothesis {
  pqd,  // H0: C >= C_perp; statistic sqrt(n) max(uv - C_n)
  nqd,  // H0: C <= C_perp; statistic sqrt(n) max(C_n - uv)
};

struct PqdTestOptions {
  int grid = 500;
  int bootstraps = 5000;
  std::uint64_t seed = 1;
  QuadrantHypothesis hypothesis = QuadrantHypothesis::pqd;
};

struct PqdTestResult {
  double statistic = 0.0;
  double p_value = 0.0;
  int exceedances = 0;  // bootstrap statistics strictly above the observed one
  int grid = 0;
  int bootstraps = 0;
  std::size_t n = 0;
  QuadrantHypothesis hypothesis = QuadrantHypothesis::pqd;
};

/// Kolmogorov-Smirnov type test of positive quadrant dependence. Each
/// replicate resamples the pseudo-pairs, re-ranks them, and compares its
/// empirical copula with the original one on the grid points a/G, a = 1..G.
/// Throws InputError for n < 20 or grid < 2.
PqdTestResult pqd_test(const PseudoSample& pseudo, const PqdTestOptions& options = {});

std::string to_string(QuadrantHypothesis h);

}  // namespace jointlife
