#include "jointlife/copulas.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "jointlife/common.hpp"
#include "jointlife/normal.hpp"
#include "jointlife/random.hpp"

namespace jointlife {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ParameterRange {
  double lo, hi;
};

ParameterRange search_range(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::clayton: return {0.0, 50.0};
    case CopulaFamily::gumbel: return {1.0, 50.0};
    case CopulaFamily::frank: return {-50.0, 50.0};
    case CopulaFamily::gaussian: return {-0.999, 0.999};
    default: throw InputError("family " + to_string(family) + " has no parameter to fit");
  }
}

// log(u^-t + v^-t - 1) without overflow for large t.
double clayton_log_sum(double t, double lu, double lv) {
  const double a = -t * lu, b = -t * lv;
  const double m = std::max(a, b);
  if (m < 30.0) return std::log1p(std::expm1(a) + std::expm1(b));
  return m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
}

double clayton_cdf(double t, double u, double v) {
  if (t == 0.0) return u * v;
  return std::exp(-clayton_log_sum(t, std::log(u), std::log(v)) / t);
}

double frank_cdf(double t, double u, double v) {
  if (t == 0.0) return u * v;
  if (std::abs(t) < 1.0) return -std::log1p(std::expm1(-t * u) * std::expm1(-t * v) / std::expm1(-t)) / t;
  if (t < 0.0) return u - frank_cdf(-t, u, 1.0 - v);
  // Factor out exp(-t min(u, v)); the naive form loses digits near the upper bound.
  const double lo = std::min(u, v), hi = std::max(u, v);
  const double r = std::exp(-t * (hi - lo)) - std::exp(-t * hi) - std::exp(-t * (1.0 - lo));
  return lo - (std::log1p(r) - std::log1p(-std::exp(-t))) / t;
}

double gumbel_cdf(double t, double u, double v) {
  const double a = std::pow(-std::log(u), t) + std::pow(-std::log(v), t);
  return std::exp(-std::pow(a, 1.0 / t));
}

double clayton_log_density(double t, double u, double v) {
  if (t == 0.0) return 0.0;
  const double lu = std::log(u), lv = std::log(v);
  const double s = clayton_log_sum(t, lu, lv);
  return std::log1p(t) - (t + 1.0) * (lu + lv) - (2.0 + 1.0 / t) * s;
}

double frank_log_density(double t, double u, double v) {
  if (t == 0.0) return 0.0;
  const double em = std::expm1(-t);
  const double denom = -em - std::expm1(-t * u) * std::expm1(-t * v);
  return std::log(t * -em) - t * (u + v) - 2.0 * std::log(std::abs(denom));
}

double gumbel_log_density(double t, double u, double v) {
  const double x = -std::log(u), y = -std::log(v);
  const double a = std::pow(x, t) + std::pow(y, t);
  const double a1t = std::pow(a, 1.0 / t);
  return -a1t + (t - 1.0) * (std::log(x) + std::log(y)) + x + y + (1.0 / t - 2.0) * std::log(a) +
         std::log(a1t + t - 1.0);
}

double gaussian_log_density(double rho, double u, double v) {
  const double x = norm_quantile(u), y = norm_quantile(v);
  const double r2 = 1.0 - rho * rho;
  return -(rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * r2) - 0.5 * std::log(r2);
}

double gumbel_conditional(double t, double u, double v) {
  const double x = -std::log(u), y = -std::log(v);
  const double a = std::pow(x, t) + std::pow(y, t);
  return std::exp(-std::pow(a, 1.0 / t)) * std::pow(a, 1.0 / t - 1.0) * std::pow(x, t - 1.0) / u;
}

double sample_sd(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

double frechet_clamp(double c, double u, double v) { return std::clamp(c, std::max(0.0, u + v - 1.0), std::min(u, v)); }

void check_unit(double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) throw InputError("copula arguments must lie in [0, 1]");
}

}  // namespace

std::vector<double> survival_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] > values[b]; });
  std::vector<double> out(n);
  const double scale = 1.0 / (static_cast<double>(n) + 1.0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) out[order[k]] = rank * scale;
    i = j;
  }
  return out;
}

PseudoSample pseudo_observations(const PairedLifetimes& pairs) {
  if (pairs.t1.size() != pairs.t2.size()) throw InputError("paired lifetimes have different lengths");
  if (pairs.size() < 2) throw InputError("pseudo-observations need at least 2 pairs");
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (!(pairs.t1[i] > 0.0) || !(pairs.t2[i] > 0.0))
      throw InputError("lifetimes must be positive (pair " + std::to_string(i + 1) + ")");
  return {survival_ranks(pairs.t1), survival_ranks(pairs.t2)};
}

CopulaFamily family_of(const CopulaModel& model) { return static_cast<CopulaFamily>(model.index()); }

std::string to_string(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::independent: return "independent";
    case CopulaFamily::comonotone: return "comonotone";
    case CopulaFamily::clayton: return "clayton";
    case CopulaFamily::gumbel: return "gumbel";
    case CopulaFamily::frank: return "frank";
    case CopulaFamily::gaussian: return "gaussian";
    case CopulaFamily::empirical: return "empirical";
    case CopulaFamily::smoothed_empirical: return "smoothed-empirical";
  }
  return "unknown";
}

CopulaFamily parse_copula_family(std::string_view text) {
  for (auto f : {CopulaFamily::independent, CopulaFamily::comonotone, CopulaFamily::clayton, CopulaFamily::gumbel,
                 CopulaFamily::frank, CopulaFamily::gaussian, CopulaFamily::empirical,
                 CopulaFamily::smoothed_empirical})
    if (text == to_string(f)) return f;
  throw InputError("unknown copula family '" + std::string(text) + "'");
}

CopulaModel make_parametric(CopulaFamily family, double theta) {
  CopulaModel model;
  switch (family) {
    case CopulaFamily::independent: model = Independent{}; break;
    case CopulaFamily::comonotone: model = Comonotone{}; break;
    case CopulaFamily::clayton: model = Clayton{theta}; break;
    case CopulaFamily::gumbel: model = Gumbel{theta}; break;
    case CopulaFamily::frank: model = Frank{theta}; break;
    case CopulaFamily::gaussian: model = Gaussian{theta}; break;
    default: throw InputError("family " + to_string(family) + " is not parametric");
  }
  validate(model);
  return model;
}

double parameter_of(const CopulaModel& model) {
  return std::visit(Overloaded{
                        [](const Clayton& c) { return c.theta; },
                        [](const Gumbel& c) { return c.theta; },
                        [](const Frank& c) { return c.theta; },
                        [](const Gaussian& c) { return c.rho; },
                        [](const auto&) { return kNaN; },
                    },
                    model);
}

void validate(const CopulaModel& model) {
  std::visit(Overloaded{
                 [](const Clayton& c) {
                   if (!(c.theta >= 0.0) || !std::isfinite(c.theta)) throw InputError("Clayton theta must be >= 0");
                 },
                 [](const Gumbel& c) {
                   if (!(c.theta >= 1.0) || !std::isfinite(c.theta)) throw InputError("Gumbel theta must be >= 1");
                 },
                 [](const Frank& c) {
                   if (!std::isfinite(c.theta)) throw InputError("Frank theta must be finite");
                 },
                 [](const Gaussian& c) {
                   if (!(std::abs(c.rho) < 1.0)) throw InputError("Gaussian rho must lie in (-1, 1)");
                 },
                 [](const Empirical& c) {
                   if (c.sample.u.size() != c.sample.v.size() || c.sample.u.empty())
                     throw InputError("empirical copula needs a non-empty sample");
                 },
                 [](const SmoothedEmpirical& c) {
                   if (c.sample.u.size() != c.sample.v.size() || c.sample.u.empty())
                     throw InputError("empirical copula needs a non-empty sample");
                   if (!(c.bandwidth_u > 0.0) || !(c.bandwidth_v > 0.0))
                     throw InputError("smoothing bandwidths must be positive");
                 },
                 [](const auto&) {},
             },
             model);
}

SmoothedEmpirical smooth(PseudoSample sample, double scale) {
  if (sample.size() < 2) throw InputError("smoothing needs at least 2 pseudo-observations");
  if (!(scale > 0.0)) throw InputError("bandwidth scale must be positive");
  std::vector<double> x(sample.size()), y(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    x[i] = norm_quantile(sample.u[i]);
    y[i] = norm_quantile(sample.v[i]);
  }
  const double factor = scale * std::pow(static_cast<double>(sample.size()), -1.0 / 6.0);
  SmoothedEmpirical out{std::move(sample), factor * sample_sd(x), factor * sample_sd(y)};
  if (!(out.bandwidth_u > 0.0) || !(out.bandwidth_v > 0.0)) throw InputError("cannot smooth a constant margin");
  return out;
}

double copula_cdf(const CopulaModel& model, double u, double v) {
  check_unit(u, v);
  if (u == 0.0 || v == 0.0) return 0.0;
  if (u == 1.0) return v;
  if (v == 1.0) return u;
  return std::visit(Overloaded{
                        [&](const Independent&) { return u * v; },
                        [&](const Comonotone&) { return std::min(u, v); },
                        [&](const Clayton& c) { return clayton_cdf(c.theta, u, v); },
                        [&](const Gumbel& c) { return gumbel_cdf(c.theta, u, v); },
                        [&](const Frank& c) { return frank_cdf(c.theta, u, v); },
                        [&](const Gaussian& c) {
                          return bivariate_normal_cdf(norm_quantile(u), norm_quantile(v), c.rho);
                        },
                        [&](const Empirical& c) {
                          std::size_t count = 0;
                          for (std::size_t i = 0; i < c.sample.size(); ++i)
                            if (c.sample.u[i] <= u && c.sample.v[i] <= v) ++count;
                          return frechet_clamp(static_cast<double>(count) / static_cast<double>(c.sample.size()), u, v);
                        },
                        [&](const SmoothedEmpirical& c) {
                          const double x = norm_quantile(u), y = norm_quantile(v);
                          double sum = 0.0;
                          for (std::size_t i = 0; i < c.sample.size(); ++i)
                            sum += norm_cdf((x - norm_quantile(c.sample.u[i])) / c.bandwidth_u) *
                                   norm_cdf((y - norm_quantile(c.sample.v[i])) / c.bandwidth_v);
                          return frechet_clamp(sum / static_cast<double>(c.sample.size()), u, v);
                        },
                    },
                    model);
}

double copula_log_density(const CopulaModel& model, double u, double v) {
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0)) throw InputError("copula density needs u, v in (0, 1)");
  return std::visit(Overloaded{
                        [&](const Independent&) { return 0.0; },
                        [&](const Comonotone&) -> double { throw InputError("the comonotone copula has no density"); },
                        [&](const Clayton& c) { return clayton_log_density(c.theta, u, v); },
                        [&](const Gumbel& c) { return gumbel_log_density(c.theta, u, v); },
                        [&](const Frank& c) { return frank_log_density(c.theta, u, v); },
                        [&](const Gaussian& c) { return gaussian_log_density(c.rho, u, v); },
                        [&](const Empirical&) -> double {
                          throw InputError("the raw empirical copula has no density; smooth it first");
                        },
                        [&](const SmoothedEmpirical& c) {
                          const double x = norm_quantile(u), y = norm_quantile(v);
                          double sum = 0.0;
                          for (std::size_t i = 0; i < c.sample.size(); ++i)
                            sum += norm_pdf((x - norm_quantile(c.sample.u[i])) / c.bandwidth_u) *
                                   norm_pdf((y - norm_quantile(c.sample.v[i])) / c.bandwidth_v);
                          const double f = sum / (static_cast<double>(c.sample.size()) * c.bandwidth_u * c.bandwidth_v);
                          return std::log(f) - std::log(norm_pdf(x)) - std::log(norm_pdf(y));
                        },
                    },
                    model);
}

double copula_density(const CopulaModel& model, double u, double v) { return std::exp(copula_log_density(model, u, v)); }

double conditional_cdf(const CopulaModel& model, double u, double v) {
  check_unit(u, v);
  if (v == 0.0) return 0.0;
  if (v == 1.0) return 1.0;
  return std::visit(Overloaded{
                        [&](const Independent&) { return v; },
                        [&](const Comonotone&) { return v >= u ? 1.0 : 0.0; },
                        [&](const Clayton& c) {
                          if (c.theta == 0.0) return v;
                          const double t = c.theta;
                          const double s = clayton_log_sum(t, std::log(u), std::log(v));
                          return std::exp(-(t + 1.0) * std::log(u) - (1.0 / t + 1.0) * s);
                        },
                        [&](const Gumbel& c) { return gumbel_conditional(c.theta, u, v); },
                        [&](const Frank& c) {
                          if (c.theta == 0.0) return v;
                          const double t = c.theta;
                          const double a = std::expm1(-t * u), b = std::expm1(-t * v), e = std::expm1(-t);
                          return std::exp(-t * u) * b / (e + a * b);
                        },
                        [&](const Gaussian& c) {
                          return norm_cdf((norm_quantile(v) - c.rho * norm_quantile(u)) / std::sqrt(1.0 - c.rho * c.rho));
                        },
                        [&](const auto&) -> double {
                          throw InputError("conditional distribution needs a parametric copula");
                        },
                    },
                    model);
}

double conditional_inverse(const CopulaModel& model, double u, double w) {
  if (!(u > 0.0 && u < 1.0 && w > 0.0 && w < 1.0)) throw InputError("conditional inverse needs u, w in (0, 1)");
  return std::visit(Overloaded{
                        [&](const Independent&) { return w; },
                        [&](const Comonotone&) { return u; },
                        [&](const Clayton& c) {
                          if (c.theta == 0.0) return w;
                          const double t = c.theta;
                          const double s = std::exp(-t * std::log(u)) * std::expm1(-t / (1.0 + t) * std::log(w));
                          return std::exp(-std::log1p(s) / t);
                        },
                        [&](const Frank& c) {
                          if (c.theta == 0.0) return w;
                          const double t = c.theta;
                          return -std::log1p(w * std::expm1(-t) / (w + (1.0 - w) * std::exp(-t * u))) / t;
                        },
                        [&](const Gaussian& c) {
                          return norm_cdf(c.rho * norm_quantile(u) + std::sqrt(1.0 - c.rho * c.rho) * norm_quantile(w));
                        },
                        [&](const Gumbel& c) {
                          double lo = 0.0, hi = 1.0;
                          for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                            const double mid = 0.5 * (lo + hi);
                            (gumbel_conditional(c.theta, u, mid) < w ? lo : hi) = mid;
                          }
                          return 0.5 * (lo + hi);
                        },
                        [&](const auto&) -> double {
                          throw InputError("conditional inverse needs a parametric copula");
                        },
                    },
                    model);
}

PseudoSample sample(const CopulaModel& model, std::size_t n, std::uint64_t seed) {
  validate(model);
  Rng rng(derive_seed(seed, "copula-sample"));
  PseudoSample out;
  out.u.resize(n);
  out.v.resize(n);
  std::visit(Overloaded{
                 [&](const Empirical& c) {
                   for (std::size_t i = 0; i < n; ++i) {
                     const auto j = rng.below(c.sample.size());
                     out.u[i] = c.sample.u[j];
                     out.v[i] = c.sample.v[j];
                   }
                 },
                 [&](const SmoothedEmpirical& c) {
                   for (std::size_t i = 0; i < n; ++i) {
                     const auto j = rng.below(c.sample.size());
                     out.u[i] = norm_cdf(norm_quantile(c.sample.u[j]) + c.bandwidth_u * rng.normal());
                     out.v[i] = norm_cdf(norm_quantile(c.sample.v[j]) + c.bandwidth_v * rng.normal());
                   }
                 },
                 [&](const auto&) {
                   for (std::size_t i = 0; i < n; ++i) {
                     out.u[i] = rng.uniform();
                     out.v[i] = conditional_inverse(model, out.u[i], rng.uniform());
                   }
                 },
             },
             model);
  return out;
}

FittedCopula fit_semiparametric(CopulaFamily family, const PseudoSample& pseudo) {
  const auto range = search_range(family);
  const std::size_t n = pseudo.size();
  if (pseudo.v.size() != n) throw InputError("pseudo-sample margins have different lengths");
  if (n < 10) throw InputError("copula fitting needs at least 10 pairs");
  auto constant = [](const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); });
  };
  if (constant(pseudo.u) || constant(pseudo.v)) throw InputError("pseudo-sample has a constant margin");

  auto loglik = [&](double theta) {
    const CopulaModel model = make_parametric(family, theta);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += copula_log_density(model, pseudo.u[i], pseudo.v[i]);
    return std::isfinite(sum) ? sum : -std::numeric_limits<double>::infinity();
  };

  constexpr int kGrid = 200;
  const double step = (range.hi - range.lo) / kGrid;
  std::vector<double> values(kGrid + 1);
  parallel_for(values.size(), [&](std::size_t k) { values[k] = loglik(range.lo + step * static_cast<double>(k)); });
  const auto best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());

  const double lo = range.lo + step * std::max(0, best - 1);
  const double hi = range.lo + step * std::min(kGrid, best + 1);
  const auto [theta, negll] = boost::math::tools::brent_find_minima([&](double t) { return -loglik(t); }, lo, hi, 40);

  FittedCopula out{make_parametric(family, theta), -negll, n, false};
  if (values[best] > out.loglik) out = {make_parametric(family, range.lo + step * best), values[best], n, false};
  const double edge = 1e-3 * step;
  const double fitted = parameter_of(out.model);
  out.at_boundary = fitted <= range.lo + edge || fitted >= range.hi - edge;
  return out;
}

void write_density_grid_csv(std::ostream& out, const CopulaModel& model, int n) {
  out << "u,v,c\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = (i + 0.5) / n, v = (j + 0.5) / n;
      out << format_double(u) << ',' << format_double(v) << ',' << format_double(copula_density(model, u, v))
          << '\n';
    }
  }
}

}  // namespace jointlife
