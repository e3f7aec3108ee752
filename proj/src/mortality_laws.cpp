#include "jointlife/mortality_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "jointlife/common.hpp"
#include "jointlife/normal.hpp"
#include "jointlife/optimizer.hpp"

namespace jointlife {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double carriere_weibull(const Carriere& c, double x) { return std::exp(-std::pow(x / c.weibull_scale, c.weibull_shape)); }

double carriere_lognormal(const Carriere& c, double x) {
  if (x <= 0.0) return 1.0;
  return norm_cdf(-(std::log(x) - std::log(c.hump_median)) / c.hump_spread);
}

double carriere_gompertz(const Carriere& c, double x) {
  return std::exp(std::exp(-c.senescent_mode / c.senescent_scale) -
                  std::exp((x - c.senescent_mode) / c.senescent_scale));
}

double carriere_survival(const Carriere& c, double x) {
  return c.psi1 * carriere_weibull(c, x) + c.psi2 * carriere_lognormal(c, x) + c.psi3 * carriere_gompertz(c, x);
}

double carriere_density(const Carriere& c, double x) {
  double f = 0.0;
  if (c.psi1 > 0.0 && x > 0.0) {
    const double r = x / c.weibull_scale;
    f += c.psi1 * c.weibull_shape / c.weibull_scale * std::pow(r, c.weibull_shape - 1.0) *
         std::exp(-std::pow(r, c.weibull_shape));
  }
  if (c.psi2 > 0.0 && x > 0.0) {
    const double z = (std::log(x) - std::log(c.hump_median)) / c.hump_spread;
    f += c.psi2 * norm_pdf(z) / (x * c.hump_spread);
  }
  if (c.psi3 > 0.0) {
    f += c.psi3 / c.senescent_scale * std::exp((x - c.senescent_mode) / c.senescent_scale) * carriere_gompertz(c, x);
  }
  return f;
}

// Parameters are searched on a transformed scale; each entry describes one
// coordinate.
enum class Scale { log, log_excess_one, free };

struct ParamSpec {
  Scale scale;
  double lo, hi;              // hard box on the natural scale
  double start_lo, start_hi;  // multi-start box on the natural scale
};

double to_internal(Scale s, double v) {
  switch (s) {
    case Scale::log: return std::log(v);
    case Scale::log_excess_one: return std::log(v - 1.0);
    case Scale::free: return v;
  }
  return v;
}

double from_internal(Scale s, double y) {
  switch (s) {
    case Scale::log: return std::exp(y);
    case Scale::log_excess_one: return 1.0 + std::exp(y);
    case Scale::free: return y;
  }
  return y;
}

// Carriere's weights are carried as two free log-ratios against psi3.
std::vector<ParamSpec> specs(LawKind kind) {
  switch (kind) {
    case LawKind::gompertz:
      return {{Scale::log, 1e-12, 1.0, 1e-6, 1e-2}, {Scale::log, 1e-8, 2.0, 0.01, 0.3}};
    case LawKind::beard:
      return {{Scale::log, 1e-12, 1.0, 1e-6, 1e-2},
              {Scale::log, 1e-8, 2.0, 0.01, 0.3},
              {Scale::log, 1e-10, 1e4, 1e-2, 10.0}};
    case LawKind::carriere:
      return {{Scale::free, -30.0, 30.0, -5.0, 0.0},  {Scale::free, -30.0, 30.0, -5.0, 0.0},
              {Scale::log, 1e-4, 1e3, 0.05, 5.0},     {Scale::log, 0.02, 10.0, 0.1, 1.0},
              {Scale::log, 1.0, 100.0, 15.0, 40.0},   {Scale::log, 0.01, 5.0, 0.1, 0.6},
              {Scale::log, 20.0, 130.0, 60.0, 90.0},  {Scale::log, 0.5, 50.0, 5.0, 15.0}};
    case LawKind::heligman_pollard:
      return {{Scale::log, 1e-8, 0.99, 1e-4, 5e-2},  {Scale::log, 1e-8, 5.0, 1e-3, 0.5},
              {Scale::log, 1e-3, 2.0, 0.03, 0.5},    {Scale::log, 1e-9, 0.5, 1e-5, 1e-2},
              {Scale::log, 0.01, 200.0, 1.0, 30.0},  {Scale::log, 1.0, 100.0, 12.0, 40.0},
              {Scale::log, 1e-9, 0.1, 1e-6, 1e-3},   {Scale::log_excess_one, 1.0001, 2.0, 1.05, 1.2}};
  }
  return {};
}

std::vector<std::string> internal_names(LawKind kind) {
  if (kind == LawKind::carriere)
    return {"psi1",         "psi2",        "weibull_scale",  "weibull_shape",
            "hump_median",  "hump_spread", "senescent_mode", "senescent_scale"};
  return parameter_names(kind);
}

LawParams decode(LawKind kind, const std::vector<ParamSpec>& spec, std::span<const double> y) {
  std::vector<double> v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double lo = to_internal(spec[i].scale, spec[i].lo), hi = to_internal(spec[i].scale, spec[i].hi);
    v[i] = from_internal(spec[i].scale, std::clamp(y[i], lo, hi));
  }
  if (kind == LawKind::carriere) {
    const double m = std::max({v[0], v[1], 0.0});
    const double e1 = std::exp(v[0] - m), e2 = std::exp(v[1] - m), e3 = std::exp(-m);
    const double total = e1 + e2 + e3;
    return Carriere{e1 / total, e2 / total, e3 / total, v[2], v[3], v[4], v[5], v[6], v[7]};
  }
  return make_law(kind, v);
}

// Fitted quantity on the loss scale: log year-hazard or log odds.
double model_log_target(const LawParams& law, int x) {
  if (const auto* hp = std::get_if<HeligmanPollard>(&law)) return std::log(heligman_pollard_odds(*hp, x));
  return std::log(year_hazard(law, x));
}

double empirical_log_target(LawKind kind, double q) {
  if (kind == LawKind::heligman_pollard) return std::log(q / (1.0 - q));
  return std::log(-std::log1p(-q));
}

}  // namespace

LawKind kind_of(const LawParams& law) { return static_cast<LawKind>(law.index()); }

std::string to_string(LawKind kind) {
  switch (kind) {
    case LawKind::gompertz: return "gompertz";
    case LawKind::beard: return "beard";
    case LawKind::carriere: return "carriere";
    case LawKind::heligman_pollard: return "heligman-pollard";
  }
  return "unknown";
}

LawKind parse_law_kind(std::string_view text) {
  if (text == "gompertz") return LawKind::gompertz;
  if (text == "beard") return LawKind::beard;
  if (text == "carriere") return LawKind::carriere;
  if (text == "heligman-pollard" || text == "hp") return LawKind::heligman_pollard;
  throw InputError("unknown mortality law '" + std::string(text) + "'");
}

std::size_t parameter_count(LawKind kind) { return parameter_names(kind).size(); }

std::vector<std::string> parameter_names(LawKind kind) {
  switch (kind) {
    case LawKind::gompertz: return {"A", "B"};
    case LawKind::beard: return {"A", "B", "K"};
    case LawKind::carriere:
      return {"psi1",        "psi2",          "psi3",           "weibull_scale",  "weibull_shape",
              "hump_median", "hump_spread",   "senescent_mode", "senescent_scale"};
    case LawKind::heligman_pollard: return {"A", "B", "C", "D", "E", "F", "G", "H"};
  }
  return {};
}

std::vector<double> parameter_values(const LawParams& law) {
  return std::visit(Overloaded{
                        [](const Gompertz& g) { return std::vector<double>{g.a, g.b}; },
                        [](const Beard& b) { return std::vector<double>{b.a, b.b, b.k}; },
                        [](const Carriere& c) {
                          return std::vector<double>{c.psi1,        c.psi2,           c.psi3,
                                                     c.weibull_scale, c.weibull_shape, c.hump_median,
                                                     c.hump_spread, c.senescent_mode, c.senescent_scale};
                        },
                        [](const HeligmanPollard& h) {
                          return std::vector<double>{h.a, h.b, h.c, h.d, h.e, h.f, h.g, h.h};
                        },
                    },
                    law);
}

LawParams make_law(LawKind kind, std::span<const double> v) {
  if (v.size() != parameter_count(kind))
    throw InputError(to_string(kind) + " expects " + std::to_string(parameter_count(kind)) + " parameters");
  switch (kind) {
    case LawKind::gompertz: return Gompertz{v[0], v[1]};
    case LawKind::beard: return Beard{v[0], v[1], v[2]};
    case LawKind::carriere:
      return Carriere{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
    case LawKind::heligman_pollard: return HeligmanPollard{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
  }
  throw InputError("unknown mortality law");
}

void validate(const LawParams& law) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string("parameter ") + name + " must be positive");
  };
  std::visit(Overloaded{
                 [&](const Gompertz& g) {
                   positive(g.a, "A");
                   positive(g.b, "B");
                 },
                 [&](const Beard& b) {
                   positive(b.a, "A");
                   positive(b.b, "B");
                   if (!(b.k >= 0.0) || !std::isfinite(b.k)) throw InputError("parameter K must be non-negative");
                 },
                 [&](const Carriere& c) {
                   for (double p : {c.psi1, c.psi2, c.psi3})
                     if (!(p >= 0.0)) throw InputError("mixture weights must be non-negative");
                   if (std::abs(c.psi1 + c.psi2 + c.psi3 - 1.0) > 1e-9)
                     throw InputError("mixture weights must sum to 1");
                   positive(c.weibull_scale, "weibull_scale");
                   positive(c.weibull_shape, "weibull_shape");
                   positive(c.hump_median, "hump_median");
                   positive(c.hump_spread, "hump_spread");
                   positive(c.senescent_mode, "senescent_mode");
                   positive(c.senescent_scale, "senescent_scale");
                 },
                 [&](const HeligmanPollard& h) {
                   const char* names[] = {"A", "B", "C", "D", "E", "F", "G", "H"};
                   const double values[] = {h.a, h.b, h.c, h.d, h.e, h.f, h.g, h.h};
                   for (int i = 0; i < 8; ++i) positive(values[i], names[i]);
                   if (!(h.h > 1.0)) throw InputError("parameter H must exceed 1");
                 },
             },
             law);
}

double heligman_pollard_odds(const HeligmanPollard& h, int x) {
  double odds = std::pow(h.a, std::pow(x + h.b, h.c)) + h.g * std::pow(h.h, x);
  if (x > 0) {
    const double l = std::log(static_cast<double>(x)) - std::log(h.f);
    odds += h.d * std::exp(-h.e * l * l);
  }
  return odds;
}

double hazard(const LawParams& law, double x) {
  return std::visit(Overloaded{
                        [&](const Gompertz& g) { return g.a * std::exp(g.b * x); },
                        [&](const Beard& b) {
                          const double ae = b.a * std::exp(b.b * x);
                          return ae / (1.0 + b.k * ae);
                        },
                        [&](const Carriere& c) {
                          const double s = carriere_survival(c, x);
                          return s > 0.0 ? carriere_density(c, x) / s : std::numeric_limits<double>::infinity();
                        },
                        [&](const HeligmanPollard& h) {
                          return std::log1p(heligman_pollard_odds(h, static_cast<int>(std::floor(x))));
                        },
                    },
                    law);
}

double survival(const LawParams& law, double x) {
  if (x <= 0.0) return 1.0;
  return std::visit(Overloaded{
                        [&](const Gompertz& g) { return std::exp(-g.a / g.b * std::expm1(g.b * x)); },
                        [&](const Beard& b) {
                          if (b.k == 0.0) return std::exp(-b.a / b.b * std::expm1(b.b * x));
                          const double ka = b.k * b.a;
                          const double cum = (std::log1p(ka * std::exp(b.b * x)) - std::log1p(ka)) / (b.k * b.b);
                          return std::exp(-cum);
                        },
                        [&](const Carriere& c) { return carriere_survival(c, x); },
                        [&](const HeligmanPollard& h) {
                          const int whole = static_cast<int>(std::floor(x));
                          double cum = 0.0;
                          for (int k = 0; k < whole; ++k) cum += std::log1p(heligman_pollard_odds(h, k));
                          cum += (x - whole) * std::log1p(heligman_pollard_odds(h, whole));
                          return std::exp(-cum);
                        },
                    },
                    law);
}

double year_hazard(const LawParams& law, int x) {
  return std::visit(Overloaded{
                        [&](const Gompertz& g) { return g.a * std::exp(g.b * x) * std::expm1(g.b) / g.b; },
                        [&](const Beard& b) {
                          if (b.k == 0.0) return b.a * std::exp(b.b * x) * std::expm1(b.b) / b.b;
                          const double ka = b.k * b.a;
                          return (std::log1p(ka * std::exp(b.b * (x + 1))) - std::log1p(ka * std::exp(b.b * x))) /
                                 (b.k * b.b);
                        },
                        [&](const Carriere& c) {
                          return std::log(carriere_survival(c, x)) - std::log(carriere_survival(c, x + 1.0));
                        },
                        [&](const HeligmanPollard& h) { return std::log1p(heligman_pollard_odds(h, x)); },
                    },
                    law);
}

double death_probability(const LawParams& law, int x) {
  if (const auto* hp = std::get_if<HeligmanPollard>(&law)) {
    const double odds = heligman_pollard_odds(*hp, x);
    return odds / (1.0 + odds);
  }
  const double h = year_hazard(law, x);
  return std::isfinite(h) ? -std::expm1(-h) : 1.0;
}

LifeTable to_lifetable(const LawParams& law, int omega) {
  validate(law);
  std::vector<double> q(static_cast<std::size_t>(omega) + 1, 1.0);
  for (int x = 0; x < omega; ++x) q[x] = std::clamp(death_probability(law, x), 0.0, 1.0);
  return LifeTable(std::move(q));
}

LawSampler::LawSampler(const LawParams& law, double max_age, double step) : step_(step), max_age_(max_age) {
  validate(law);
  if (!(step > 0.0) || !(max_age > 0.0)) throw InputError("sampler grid must be positive");
  const auto n = static_cast<std::size_t>(std::llround(max_age / step));
  s_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s_[i] = survival(law, static_cast<double>(i) * step);
  // Guard against rounding making the curve tick upwards.
  for (std::size_t i = 1; i <= n; ++i) s_[i] = std::min(s_[i], s_[i - 1]);
}

double LawSampler::lifetime(double u) const {
  if (u >= s_.front()) return 0.0;
  if (u <= s_.back()) return max_age_;
  const auto it = std::partition_point(s_.begin(), s_.end(), [u](double s) { return s >= u; });
  const auto i = static_cast<std::size_t>(it - s_.begin()) - 1;
  const double frac = (s_[i] - u) / (s_[i] - s_[i + 1]);
  return (static_cast<double>(i) + frac) * step_;
}

std::vector<double> LawSampler::sample(std::size_t n, Rng& rng) const {
  std::vector<double> out(n);
  for (auto& t : out) t = lifetime(rng.uniform());
  return out;
}

std::vector<AgeObservation> fit_observations(const LifeTable& table) {
  std::vector<AgeObservation> out;
  for (int x = 0; x < table.omega(); ++x) {
    const double w = table.empirical() ? table.exposure()[x] : table.lx(x);
    const double q = table.qx(x);
    if (w > 0.0 && q > 0.0 && q < 1.0) out.push_back({x, q, w});
  }
  return out;
}

FitReport fit(LawKind kind, std::span<const AgeObservation> data, const FitOptions& options) {
  std::vector<AgeObservation> usable;
  for (const auto& o : data)
    if (o.age >= 0 && o.exposure > 0.0 && o.qx > 0.0 && o.qx < 1.0) usable.push_back(o);
  const std::size_t k = parameter_count(kind);
  if (usable.size() < 2 * k)
    throw InputError("fitting " + to_string(kind) + " needs at least " + std::to_string(2 * k) +
                     " ages with positive exposure and 0 < q < 1, got " + std::to_string(usable.size()));

  // Exposure times the delta-method precision of the transformed estimate, so
  // ages with a handful of deaths do not dominate.
  std::vector<double> weight, target;
  double total = 0.0;
  for (const auto& o : usable) {
    const double q = o.qx;
    double w = o.exposure * q * (1.0 - q);
    if (kind != LawKind::heligman_pollard) {
      const double mu = -std::log1p(-q);
      w = o.exposure * (1.0 - q) * mu * mu / q;
    }
    weight.push_back(w);
    target.push_back(empirical_log_target(kind, q));
    total += w;
  }
  for (auto& w : weight) w /= total;

  const auto spec = specs(kind);
  const Objective loss = [&](std::span<const double> y) {
    const LawParams law = decode(kind, spec, y);
    double sum = 0.0;
    for (std::size_t i = 0; i < usable.size(); ++i) {
      const double r = model_log_target(law, usable[i].age) - target[i];
      sum += weight[i] * r * r;
    }
    return std::isfinite(sum) ? sum : std::numeric_limits<double>::infinity();
  };

  NelderMeadOptions nm;
  nm.max_evaluations = options.max_evaluations;
  nm.initial_step = 0.5;
  const auto starts = static_cast<std::size_t>(std::max(1, options.starts));
  std::vector<NelderMeadResult> runs(starts);
  parallel_for(starts, [&](std::size_t s) {
    Rng rng(derive_seed(options.seed, "law-fit", s));
    std::vector<double> y0(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const double lo = to_internal(spec[i].scale, spec[i].start_lo);
      const double hi = to_internal(spec[i].scale, spec[i].start_hi);
      y0[i] = lo + (hi - lo) * rng.uniform();
    }
    runs[s] = nelder_mead(loss, std::move(y0), nm);
  });

  std::size_t best = 0;
  for (std::size_t s = 1; s < starts; ++s)
    if (runs[s].value < runs[best].value) best = s;

  FitReport report;
  const auto& run = runs[best];
  report.params = decode(kind, spec, run.x);
  report.loss = run.value;
  report.iterations = run.iterations;
  for (const auto& r : runs) report.evaluations += r.evaluations;
  report.converged = run.converged && std::isfinite(run.value);

  const auto names = internal_names(kind);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double lo = to_internal(spec[i].scale, spec[i].lo), hi = to_internal(spec[i].scale, spec[i].hi);
    const double margin = 1e-3 * (hi - lo);
    if (run.x[i] <= lo + margin || run.x[i] >= hi - margin) report.at_boundary.push_back(names[i]);
  }
  for (const auto& o : usable) {
    report.ages.push_back(o.age);
    report.residuals.push_back(model_log_target(report.params, o.age) - empirical_log_target(kind, o.qx));
  }
  return report;
}

void write_fit_curve_csv(std::ostream& out, const LawParams& law, std::span<const AgeObservation> data, int omega) {
  out << "age,mu_hat,mu_fit,qx_fit\n";
  std::vector<double> mu_hat(static_cast<std::size_t>(omega), std::numeric_limits<double>::quiet_NaN());
  for (const auto& o : data)
    if (o.age >= 0 && o.age < omega && o.qx < 1.0) mu_hat[o.age] = -std::log1p(-o.qx);
  for (int x = 0; x < omega; ++x) {
    out << x << ',' << (std::isnan(mu_hat[x]) ? std::string() : format_double(mu_hat[x])) << ','
        << format_double(year_hazard(law, x)) << ',' << format_double(death_probability(law, x)) << '\n';
  }
}

}  // namespace jointlife
