#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "jointlife/copulas.hpp"
#include "jointlife/lifetable.hpp"

namespace jointlife {

struct DiscountBasis {
  double i = 0.03;

  // Throws InputError unless i > -1.
  explicit DiscountBasis(double rate = 0.03);
  double nu() const { return 1.0 / (1.0 + i); }
};

constexpr int kDefaultHorizon = 100;

// Unit benefits, payable at the end of the year of death or survival.
double whole_life_insurance(const LifeTable& table, int x, const DiscountBasis& basis, int horizon = kDefaultHorizon);
double term_insurance(const LifeTable& table, int x, int n, const DiscountBasis& basis);
double endowment(const LifeTable& table, int x, int n, const DiscountBasis& basis);
// Immediate annuity: sum_{k=1}^{horizon} nu^k kpx.
double life_annuity(const LifeTable& table, int x, const DiscountBasis& basis, int horizon = kDefaultHorizon);
double temporary_annuity(const LifeTable& table, int x, int n, const DiscountBasis& basis);

struct ContinuousValue {
  double value = 0.0;
  bool end_of_year_approximation = true;
};
// Continuous-benefit insurance is not modelled; this returns the
// end-of-year value and says so.
ContinuousValue continuous_whole_life_insurance(const LifeTable& table, int x, const DiscountBasis& basis,
                                                int horizon = kDefaultHorizon);

enum class Product { annuity, whole_life, term, endowment, temporary_annuity };
std::string to_string(Product p);
// Accepts annuity, whole, term, endowment, temporary. Throws InputError.
Product parse_product(std::string_view text);

/// `term` is the contract length for term, endowment and temporary annuity,
/// and the horizon for whole life and annuity.
double price(Product product, const LifeTable& table, int x, const DiscountBasis& basis, int term = kDefaultHorizon);

struct ConditionalPrice {
  double value = 0.0;
  double baseline = 0.0;
  double rel_diff_pct = 0.0;  // 100 * (value / baseline - 1)
};

/// Same product priced on a conditional table and on the baseline table.
/// Throws InputError when x precedes the age the condition is observed at.
ConditionalPrice conditional_product(const ConditionalTable& conditional, const LifeTable& baseline, Product product,
                                     int x, const DiscountBasis& basis, int term = kDefaultHorizon);

/// A couple: f is the husband (father), m the wife (mother). The marginal
/// tables are linked by a survival copula, so the probability both survive
/// t more years is C(tp_f, tp_m).
struct JointModel {
  LifeTable husband;
  LifeTable wife;
  CopulaModel copula;
  int x_f = 0;
  int x_m = 0;
};

struct JointSurvival {
  double husband = 0.0;
  double wife = 0.0;
  double joint = 0.0;  // both alive
  double last = 0.0;   // at least one alive
};

JointSurvival joint_survival(const JointModel& model, int t);

struct JointAnnuities {
  double joint = 0.0;      // until the first death
  double last = 0.0;       // until the second death
  double reversion = 0.0;  // last - joint: from the first death to the second
  double widow = 0.0;      // a_m - joint: to the wife after the husband's death
};

JointAnnuities joint_annuities(const JointModel& model, const DiscountBasis& basis, int horizon = kDefaultHorizon);

struct JointBounds {
  JointAnnuities independent;
  JointAnnuities comonotone;
};

/// Values under the independence and comonotone copulas for the same
/// marginals: for positively dependent lives, joint lies between them in
/// that order and last/widow in the reverse order.
JointBounds joint_bounds(const LifeTable& husband, const LifeTable& wife, int x_f, int x_m, const DiscountBasis& basis,
                         int horizon = kDefaultHorizon);

struct SurvivalBounds {
  double lower = 0.0;
  double upper = 0.0;
};
// Frechet bounds on the probability both survive, from the marginal ones.
SurvivalBounds frechet_survival_bounds(double p_f, double p_m);

// Curtate expectation of the husband's remaining lifetime given the wife is
// alive t years after issue (t = 0 gives the unconditional value).
double conditional_curtate_expectation(const JointModel& model, int t);

struct PricingRow {
  int age = 0;
  std::string condition;
  std::string product;
  double value = 0.0;
  std::optional<double> rel_diff_pct;
};
// CSV `age,condition,product,value,rel_diff_pct`.
void write_pricing_csv(std::ostream& out, std::span<const PricingRow> rows);

}  // namespace jointlife
