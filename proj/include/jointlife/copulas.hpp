#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jointlife {

struct PairedLifetimes {
  std::vector<double> t1, t2;
  std::string label1 = "t1", label2 = "t2";

  std::size_t size() const { return t1.size(); }
};

/// Survival-rank pseudo-observations: u_i = (number of t1_j > t1_i, ties
/// averaged, plus one) / (n + 1). Long lives sit near (0, 0).
struct PseudoSample {
  std::vector<double> u, v;

  std::size_t size() const { return u.size(); }
};

// Throws InputError on length mismatch, n < 2 or non-positive lifetimes.
PseudoSample pseudo_observations(const PairedLifetimes& pairs);
// Survival ranks of one margin, rescaled to (0, 1).
std::vector<double> survival_ranks(std::span<const double> values);

struct Independent {};
struct Comonotone {};
struct Clayton {
  double theta = 1.0;  // >= 0
};
struct Gumbel {
  double theta = 1.5;  // >= 1
};
struct Frank {
  double theta = 1.0;
};
struct Gaussian {
  double rho = 0.0;  // in (-1, 1)
};
struct Empirical {
  PseudoSample sample;
};
// Probit-transformed Gaussian product kernel; bandwidths are per margin on
// the probit scale.
struct SmoothedEmpirical {
  PseudoSample sample;
  double bandwidth_u = 0.0;
  double bandwidth_v = 0.0;
};

using CopulaModel = std::variant<Independent, Comonotone, Clayton, Gumbel, Frank, Gaussian, Empirical, SmoothedEmpirical>;

enum class CopulaFamily { independent, comonotone, clayton, gumbel, frank, gaussian, empirical, smoothed_empirical };

CopulaFamily family_of(const CopulaModel& model);
std::string to_string(CopulaFamily family);
// Throws InputError.
CopulaFamily parse_copula_family(std::string_view text);

// Parametric families only; throws InputError for the others.
CopulaModel make_parametric(CopulaFamily family, double theta);
// The single dependence parameter (rho for Gaussian); NaN when there is none.
double parameter_of(const CopulaModel& model);

// Throws InputError when the parameter is outside the family's domain.
void validate(const CopulaModel& model);

// Silverman's normal-reference rule on the probit scale, times `scale`.
SmoothedEmpirical smooth(PseudoSample sample, double scale = 1.0);

/// C(u, v). Boundary values are exact for every model; the two empirical
/// models are projected onto the Frechet-Hoeffding band.
double copula_cdf(const CopulaModel& model, double u, double v);

// Throws InputError for Comonotone and Empirical, which have no density.
double copula_density(const CopulaModel& model, double u, double v);
double copula_log_density(const CopulaModel& model, double u, double v);

// dC/du: the distribution of V given U = u, evaluated at v.
double conditional_cdf(const CopulaModel& model, double u, double v);
// v with conditional_cdf(model, u, v) == w. Parametric models only.
double conditional_inverse(const CopulaModel& model, double u, double w);

/// n pairs from C. Parametric families use conditional inversion; Empirical
/// and SmoothedEmpirical resample the stored pairs (the latter adds kernel
/// noise on the probit scale).
PseudoSample sample(const CopulaModel& model, std::size_t n, std::uint64_t seed);

struct FittedCopula {
  CopulaModel model;
  double loglik = 0.0;
  std::size_t n = 0;
  bool at_boundary = false;
};

/// Maximum pseudo-likelihood over the family's parameter range: a grid scan
/// followed by Brent refinement. Throws InputError for non-parametric
/// families, n < 10, or a margin with a single distinct value.
FittedCopula fit_semiparametric(CopulaFamily family, const PseudoSample& pseudo);

// CSV `u,v,c` on an n x n grid of cell midpoints.
void write_density_grid_csv(std::ostream& out, const CopulaModel& model, int n = 51);

}  // namespace jointlife
