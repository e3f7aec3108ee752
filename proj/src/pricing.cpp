#include "jointlife/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "jointlife/common.hpp"

namespace jointlife {

namespace {

void check_age(const LifeTable& table, int x) {
  if (x < 0 || x > table.omega())
    throw InputError("age " + std::to_string(x) + " is outside the table (0.." + std::to_string(table.omega()) + ")");
}

// kpx for k = 0..horizon, zero once the table has closed.
std::vector<double> survival_curve(const LifeTable& table, int x, int horizon) {
  check_age(table, x);
  std::vector<double> p(static_cast<std::size_t>(std::max(horizon, 0)) + 1, 0.0);
  p[0] = 1.0;
  for (int k = 1; k <= horizon && x + k - 1 <= table.omega(); ++k) p[k] = p[k - 1] * (1.0 - table.qx(x + k - 1));
  return p;
}

double insurance_sum(const LifeTable& table, int x, int terms, double nu) {
  check_age(table, x);
  double value = 0.0, kpx = 1.0, disc = nu;
  for (int k = 0; k < terms && x + k <= table.omega(); ++k) {
    const double q = table.qx(x + k);
    value += disc * kpx * q;
    kpx *= 1.0 - q;
    disc *= nu;
  }
  return value;
}

double annuity_sum(const LifeTable& table, int x, int terms, double nu) {
  const auto p = survival_curve(table, x, terms);
  double value = 0.0, disc = 1.0;
  for (int k = 1; k <= terms; ++k) {
    disc *= nu;
    value += disc * p[k];
  }
  return value;
}

void check_term(int n) {
  if (n < 1) throw InputError("contract term must be at least 1 year");
}

}  // namespace

DiscountBasis::DiscountBasis(double rate) : i(rate) {
  if (!(rate > -1.0) || !std::isfinite(rate)) throw InputError("interest rate must exceed -1");
}

double whole_life_insurance(const LifeTable& table, int x, const DiscountBasis& basis, int horizon) {
  return insurance_sum(table, x, horizon, basis.nu());
}

double term_insurance(const LifeTable& table, int x, int n, const DiscountBasis& basis) {
  check_term(n);
  return insurance_sum(table, x, n, basis.nu());
}

double endowment(const LifeTable& table, int x, int n, const DiscountBasis& basis) {
  check_term(n);
  return std::pow(basis.nu(), n) * survival_curve(table, x, n)[n];
}

double life_annuity(const LifeTable& table, int x, const DiscountBasis& basis, int horizon) {
  return annuity_sum(table, x, horizon, basis.nu());
}

double temporary_annuity(const LifeTable& table, int x, int n, const DiscountBasis& basis) {
  check_term(n);
  return annuity_sum(table, x, n, basis.nu());
}

ContinuousValue continuous_whole_life_insurance(const LifeTable& table, int x, const DiscountBasis& basis,
                                                int horizon) {
  return {whole_life_insurance(table, x, basis, horizon), true};
}

std::string to_string(Product p) {
  switch (p) {
    case Product::annuity: return "annuity";
    case Product::whole_life: return "whole";
    case Product::term: return "term";
    case Product::endowment: return "endowment";
    case Product::temporary_annuity: return "temporary";
  }
  return "unknown";
}

Product parse_product(std::string_view text) {
  for (auto p : {Product::annuity, Product::whole_life, Product::term, Product::endowment, Product::temporary_annuity})
    if (text == to_string(p)) return p;
  throw InputError("unknown product '" + std::string(text) + "'");
}

double price(Product product, const LifeTable& table, int x, const DiscountBasis& basis, int term) {
  switch (product) {
    case Product::annuity: return life_annuity(table, x, basis, term);
    case Product::whole_life: return whole_life_insurance(table, x, basis, term);
    case Product::term: return term_insurance(table, x, term, basis);
    case Product::endowment: return endowment(table, x, term, basis);
    case Product::temporary_annuity: return temporary_annuity(table, x, term, basis);
  }
  throw InputError("unknown product");
}

ConditionalPrice conditional_product(const ConditionalTable& conditional, const LifeTable& baseline, Product product,
                                     int x, const DiscountBasis& basis, int term) {
  if (x < conditional.base_age())
    throw InputError("age " + std::to_string(x) + " precedes the condition's observation age " +
                     std::to_string(conditional.base_age()));
  ConditionalPrice out;
  out.value = price(product, conditional.table, x, basis, term);
  out.baseline = price(product, baseline, x, basis, term);
  out.rel_diff_pct = out.baseline != 0.0 ? 100.0 * (out.value / out.baseline - 1.0) : 0.0;
  return out;
}

JointSurvival joint_survival(const JointModel& model, int t) {
  if (t < 0) throw InputError("time must be non-negative");
  JointSurvival s;
  s.husband = survival_curve(model.husband, model.x_f, t)[t];
  s.wife = survival_curve(model.wife, model.x_m, t)[t];
  s.joint = copula_cdf(model.copula, s.husband, s.wife);
  s.last = s.husband + s.wife - s.joint;
  return s;
}

JointAnnuities joint_annuities(const JointModel& model, const DiscountBasis& basis, int horizon) {
  validate(model.copula);
  const auto pf = survival_curve(model.husband, model.x_f, horizon);
  const auto pm = survival_curve(model.wife, model.x_m, horizon);
  const double nu = basis.nu();
  JointAnnuities a;
  double wife = 0.0, disc = 1.0;
  for (int k = 1; k <= horizon; ++k) {
    disc *= nu;
    const double joint = copula_cdf(model.copula, pf[k], pm[k]);
    a.joint += disc * joint;
    a.last += disc * (pf[k] + pm[k] - joint);
    wife += disc * pm[k];
  }
  a.reversion = a.last - a.joint;
  a.widow = wife - a.joint;
  return a;
}

JointBounds joint_bounds(const LifeTable& husband, const LifeTable& wife, int x_f, int x_m, const DiscountBasis& basis,
                         int horizon) {
  return {joint_annuities({husband, wife, Independent{}, x_f, x_m}, basis, horizon),
          joint_annuities({husband, wife, Comonotone{}, x_f, x_m}, basis, horizon)};
}

SurvivalBounds frechet_survival_bounds(double p_f, double p_m) {
  if (!(p_f >= 0.0 && p_f <= 1.0 && p_m >= 0.0 && p_m <= 1.0))
    throw InputError("survival probabilities must lie in [0, 1]");
  return {std::max(0.0, p_f + p_m - 1.0), std::min(p_f, p_m)};
}

double conditional_curtate_expectation(const JointModel& model, int t) {
  const double pm = joint_survival(model, t).wife;
  if (pm <= 0.0)
    throw EmptyRiskSetError("wife alive at +" + std::to_string(t),
                            "no probability mass for the wife surviving " + std::to_string(t) + " years");
  const int horizon = model.husband.omega() - model.x_f + 1;
  const auto pf = survival_curve(model.husband, model.x_f, horizon);
  double e = 0.0;
  for (int k = 1; k <= horizon; ++k) e += copula_cdf(model.copula, pf[k], pm);
  return e / pm;
}

void write_pricing_csv(std::ostream& out, std::span<const PricingRow> rows) {
  out << "age,condition,product,value,rel_diff_pct\n";
  for (const auto& r : rows) {
    out << r.age << ',' << r.condition << ',' << r.product << ',' << format_double(r.value) << ','
        << (r.rel_diff_pct ? format_double(*r.rel_diff_pct) : std::string()) << '\n';
  }
}

}  // namespace jointlife
