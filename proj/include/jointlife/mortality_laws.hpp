#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jointlife/lifetable.hpp"
#include "jointlife/random.hpp"

namespace jointlife {

struct Gompertz {
  double a = 1e-4;
  double b = 0.1;
};

// Logistic-type law: mu(x) = A e^{Bx} / (1 + K A e^{Bx}).
struct Beard {
  double a = 1e-4;
  double b = 0.1;
  double k = 0.0;
};

/// Three-component mixture of survival functions:
///   S(x) = psi1 S_weibull(x) + psi2 S_lognormal(x) + psi3 S_gompertz(x)
/// covering childhood, the young-adult hump and senescence.
struct Carriere {
  double psi1 = 0.1, psi2 = 0.1, psi3 = 0.8;
  double weibull_scale = 1.0, weibull_shape = 0.5;
  double hump_median = 25.0, hump_spread = 0.3;  // lognormal median age and log-sd
  double senescent_mode = 80.0, senescent_scale = 10.0;
};

// q/p = A^{(x+B)^C} + D exp(-E (ln x - ln F)^2) + G H^x
struct HeligmanPollard {
  double a = 5e-4, b = 0.01, c = 0.1;
  double d = 5e-4, e = 10.0, f = 20.0;
  double g = 5e-5, h = 1.1;
};

using LawParams = std::variant<Gompertz, Beard, Carriere, HeligmanPollard>;

enum class LawKind { gompertz, beard, carriere, heligman_pollard };

LawKind kind_of(const LawParams& law);
std::string to_string(LawKind kind);
// Accepts gompertz, beard, carriere, heligman-pollard (or hp). Throws InputError.
LawKind parse_law_kind(std::string_view text);
std::size_t parameter_count(LawKind kind);
std::vector<std::string> parameter_names(LawKind kind);
std::vector<double> parameter_values(const LawParams& law);
LawParams make_law(LawKind kind, std::span<const double> values);

// Throws InputError when a parameter is outside the law's domain.
void validate(const LawParams& law);

double hazard(const LawParams& law, double x);
double survival(const LawParams& law, double x);
// -ln(S(x+1)/S(x)), the hazard integrated over one year of age.
double year_hazard(const LawParams& law, int x);
double death_probability(const LawParams& law, int x);
// Heligman-Pollard odds q/p at integer age x (x = 0 drops the hump term).
double heligman_pollard_odds(const HeligmanPollard& law, int x);

LifeTable to_lifetable(const LawParams& law, int omega = LifeTable::kDefaultOmega);

/// Inverse-transform sampler on a fixed grid of ages with linear interpolation
/// of the survival curve. Lifetimes are capped at max_age.
class LawSampler {
 public:
  explicit LawSampler(const LawParams& law, double max_age = LifeTable::kDefaultOmega, double step = 0.01);

  // The age t with S(t) = u; u is in survival orientation (u near 1 means an
  // early death).
  double lifetime(double u) const;
  std::vector<double> sample(std::size_t n, Rng& rng) const;

 private:
  double step_;
  double max_age_;
  std::vector<double> s_;
};

struct AgeObservation {
  int age = 0;
  double qx = 0.0;
  double exposure = 0.0;
};

// Ages below omega with positive exposure and 0 < qx < 1. A table without
// exposure uses lx as weights.
std::vector<AgeObservation> fit_observations(const LifeTable& table);

struct FitOptions {
  int starts = 8;
  int max_evaluations = 5000;
  std::uint64_t seed = 20210401;
};

struct FitReport {
  LawParams params;
  double loss = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::vector<std::string> at_boundary;  // parameters sitting on a search bound
  std::vector<int> ages;
  std::vector<double> residuals;
};

/// Weighted least squares on log year-hazard (Gompertz, Beard,
/// Carriere) or on log odds q/p (Heligman-Pollard). Weights are exposure
/// times the delta-method precision of each transformed estimate. Minimized by a
/// multi-start simplex search. Throws InputError when fewer than
/// 2 * parameter_count ages are usable.
FitReport fit(LawKind kind, std::span<const AgeObservation> data, const FitOptions& options = {});

// CSV `age,mu_hat,mu_fit,qx_fit` for ages 0..omega-1.
void write_fit_curve_csv(std::ostream& out, const LawParams& law, std::span<const AgeObservation> data,
                         int omega = LifeTable::kDefaultOmega);

}  // namespace jointlife
