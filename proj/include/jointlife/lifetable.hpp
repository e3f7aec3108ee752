#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jointlife/family_data.hpp"

namespace jointlife {

/// Discrete survival model on integer ages 0..omega. The table always closes:
/// q(omega) == 1.
class LifeTable {
 public:
  static constexpr double kRadix = 100000.0;
  static constexpr int kDefaultOmega = 105;

  // q[x] for x = 0..omega; the last entry is forced to 1. `exposure` holds the
  // number of lives entering each age when the table is empirical.
  explicit LifeTable(std::vector<double> q, std::vector<double> exposure = {});

  /// Empirical table: q(x) = deaths in [x, x+1) / survivors at x, with ages
  /// floored to the last birthday. Ages at or past omega count at omega.
  /// Ages with no survivors get q = 1.
  static LifeTable from_ages_at_death(std::span<const double> ages, int omega = kDefaultOmega);

  int omega() const { return static_cast<int>(q_.size()) - 1; }
  double qx(int x) const;
  double tpx(int x, int t) const;
  // l(x) = l(0) * xp0 with l(0) = 100000.
  double lx(int x) const;
  // Curtate expectation: sum_{t>=1} tpx.
  double curtate_ex(int x) const;

  const std::vector<double>& q() const { return q_; }
  const std::vector<double>& exposure() const { return exposure_; }
  bool empirical() const { return !exposure_.empty(); }

 private:
  std::vector<double> q_;
  std::vector<double> lx_;
  std::vector<double> exposure_;
};

/// Which family-history information a conditional table is restricted to.
struct Condition {
  enum class Kind { none, parents, grandparents };

  Kind kind = Kind::none;
  // Child age at which the relatives' status is read (and the table starts).
  double observed_at = 0.0;
  std::vector<ParentStatus> parent_statuses;
  int min_alive = 0;
  int max_alive = 4;
  bool require_all_grandparents = false;

  static Condition none(double at = 0.0);
  static Condition parents(std::vector<ParentStatus> statuses, double at);
  static Condition grandparents(int min_alive, int max_alive, double at, bool require_all = false);

  // Grammar: "none[@x]", "<status>[|<status>]@x" with status in both_alive,
  // only_father, only_mother, one_alive, both_dead; "gp<k>[-<m>]@x" with an
  // optional "/all4" suffix. Throws InputError.
  static Condition parse(std::string_view text);
  std::string label() const;

  bool matches(const ChildParentsRow& row) const;
  bool matches(const ChildGrandparentsRow& row) const;
};

struct ConditionalTable {
  Condition condition;
  std::optional<Sex> sex;
  std::size_t risk_set_n = 0;
  LifeTable table;

  int base_age() const;
};

/// Empirical table of the children alive at condition.observed_at whose
/// relatives match the condition. Throws EmptyRiskSetError.
ConditionalTable conditional_table(std::span<const ChildParentsRow> rows, const Condition& condition,
                                   std::optional<Sex> sex = std::nullopt, int omega = LifeTable::kDefaultOmega);
ConditionalTable conditional_table(std::span<const ChildGrandparentsRow> rows, const Condition& condition,
                                   std::optional<Sex> sex = std::nullopt, int omega = LifeTable::kDefaultOmega);

// CSV `age,qx,lx,ex`; the conditional variant appends `condition,risk_set_n`.
void write_lifetable_csv(std::ostream& out, const LifeTable& table);
void write_conditional_table_csv(std::ostream& out, const ConditionalTable& table);
// Reads `age,qx[,...]`. Ages must be 0..omega in order. lx, when present, is
// kept as the exposure profile.
LifeTable read_lifetable_csv(std::istream& in);

}  // namespace jointlife
