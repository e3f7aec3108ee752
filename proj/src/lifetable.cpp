#include "jointlife/lifetable.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "jointlife/common.hpp"
#include "jointlife/csv.hpp"

namespace jointlife {

LifeTable::LifeTable(std::vector<double> q, std::vector<double> exposure)
    : q_(std::move(q)), exposure_(std::move(exposure)) {
  if (q_.empty()) throw std::invalid_argument("LifeTable: empty q vector");
  if (!exposure_.empty() && exposure_.size() != q_.size())
    throw std::invalid_argument("LifeTable: exposure length differs from q");
  for (double v : q_)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("LifeTable: q outside [0,1]");
  q_.back() = 1.0;
  lx_.resize(q_.size());
  double s = 1.0;
  for (std::size_t x = 0; x < q_.size(); ++x) {
    lx_[x] = kRadix * s;
    s *= 1.0 - q_[x];
  }
}

LifeTable LifeTable::from_ages_at_death(std::span<const double> ages, int omega) {
  if (ages.empty()) throw InputError("life table: no ages at death");
  if (omega < 0) throw std::invalid_argument("life table: negative omega");
  std::vector<double> deaths(static_cast<std::size_t>(omega) + 1, 0.0);
  for (double a : ages) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw InputError("life table: invalid age at death " + format_double(a));
    const auto x = static_cast<std::size_t>(std::min<double>(std::floor(a), omega));
    deaths[x] += 1.0;
  }
  std::vector<double> q(deaths.size()), exposure(deaths.size());
  double alive = static_cast<double>(ages.size());
  for (std::size_t x = 0; x < deaths.size(); ++x) {
    exposure[x] = alive;
    q[x] = alive > 0.0 ? deaths[x] / alive : 1.0;
    alive -= deaths[x];
  }
  return LifeTable(std::move(q), std::move(exposure));
}

double LifeTable::qx(int x) const {
  if (x < 0 || x > omega()) throw std::out_of_range("LifeTable::qx: age " + std::to_string(x));
  return q_[static_cast<std::size_t>(x)];
}

double LifeTable::tpx(int x, int t) const {
  if (x < 0 || t < 0 || x > omega() || x + t > omega() + 1)
    throw std::out_of_range("LifeTable::tpx: x=" + std::to_string(x) + " t=" + std::to_string(t));
  double p = 1.0;
  for (int k = 0; k < t; ++k) p *= 1.0 - q_[static_cast<std::size_t>(x + k)];
  return p;
}

double LifeTable::lx(int x) const {
  if (x < 0 || x > omega()) throw std::out_of_range("LifeTable::lx: age " + std::to_string(x));
  return lx_[static_cast<std::size_t>(x)];
}

double LifeTable::curtate_ex(int x) const {
  if (x < 0 || x > omega()) throw std::out_of_range("LifeTable::curtate_ex: age " + std::to_string(x));
  double sum = 0.0, p = 1.0;
  for (int k = x; k <= omega(); ++k) {
    p *= 1.0 - q_[static_cast<std::size_t>(k)];
    sum += p;
  }
  return sum;
}

// ---------------------------------------------------------------------------

Condition Condition::none(double at) {
  Condition c;
  c.observed_at = at;
  return c;
}

Condition Condition::parents(std::vector<ParentStatus> statuses, double at) {
  if (statuses.empty()) throw std::invalid_argument("Condition::parents: no status");
  Condition c;
  c.kind = Kind::parents;
  c.observed_at = at;
  std::sort(statuses.begin(), statuses.end());
  statuses.erase(std::unique(statuses.begin(), statuses.end()), statuses.end());
  c.parent_statuses = std::move(statuses);
  return c;
}

Condition Condition::grandparents(int min_alive, int max_alive, double at, bool require_all) {
  if (min_alive < 0 || max_alive > 4 || min_alive > max_alive)
    throw std::invalid_argument("Condition::grandparents: bad alive range");
  Condition c;
  c.kind = Kind::grandparents;
  c.observed_at = at;
  c.min_alive = min_alive;
  c.max_alive = max_alive;
  c.require_all_grandparents = require_all;
  return c;
}

namespace {

double parse_age(std::string_view s, std::string_view whole) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || v < 0.0)
    throw InputError("invalid condition '" + std::string(whole) + "'");
  return v;
}

int parse_count(std::string_view s, std::string_view whole) {
  int v = -1;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0 || v > 4)
    throw InputError("invalid condition '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Condition Condition::parse(std::string_view text) {
  const auto at_pos = text.find('@');
  const std::string_view head = text.substr(0, at_pos);
  const double at = at_pos == std::string_view::npos ? 0.0 : parse_age(text.substr(at_pos + 1), text);
  if (head == "none") return none(at);
  if (at_pos == std::string_view::npos)
    throw InputError("condition '" + std::string(text) + "' needs an observation age (@x)");

  if (head.rfind("gp", 0) == 0) {
    std::string_view spec = head.substr(2);
    bool all = false;
    if (const auto slash = spec.find('/'); slash != std::string_view::npos) {
      if (spec.substr(slash + 1) != "all4") throw InputError("invalid condition '" + std::string(text) + "'");
      all = true;
      spec = spec.substr(0, slash);
    }
    const auto dash = spec.find('-');
    const int lo = parse_count(spec.substr(0, dash), text);
    const int hi = dash == std::string_view::npos ? lo : parse_count(spec.substr(dash + 1), text);
    if (lo > hi) throw InputError("invalid condition '" + std::string(text) + "'");
    return grandparents(lo, hi, at, all);
  }

  std::vector<ParentStatus> statuses;
  std::string_view rest = head;
  while (!rest.empty()) {
    const auto bar = rest.find('|');
    const std::string_view token = rest.substr(0, bar);
    if (token == "both_alive") {
      statuses.push_back(ParentStatus::both_alive);
    } else if (token == "only_father") {
      statuses.push_back(ParentStatus::only_father);
    } else if (token == "only_mother") {
      statuses.push_back(ParentStatus::only_mother);
    } else if (token == "one_alive") {
      statuses.push_back(ParentStatus::only_father);
      statuses.push_back(ParentStatus::only_mother);
    } else if (token == "both_dead") {
      statuses.push_back(ParentStatus::both_dead);
    } else {
      throw InputError("invalid condition '" + std::string(text) + "'");
    }
    rest = bar == std::string_view::npos ? std::string_view{} : rest.substr(bar + 1);
  }
  if (statuses.empty()) throw InputError("invalid condition '" + std::string(text) + "'");
  return parents(std::move(statuses), at);
}

std::string Condition::label() const {
  const std::string at = "@" + format_double(observed_at);
  switch (kind) {
    case Kind::none:
      return "none" + at;
    case Kind::parents: {
      if (parent_statuses == std::vector{ParentStatus::only_father, ParentStatus::only_mother})
        return "one_alive" + at;
      std::string s;
      for (auto st : parent_statuses) s += (s.empty() ? "" : "|") + to_string(st);
      return s + at;
    }
    case Kind::grandparents: {
      std::string s = "gp" + std::to_string(min_alive);
      if (max_alive != min_alive) s += "-" + std::to_string(max_alive);
      if (require_all_grandparents) s += "/all4";
      return s + at;
    }
  }
  return "unknown";
}

bool Condition::matches(const ChildParentsRow& row) const {
  if (row.t_c < observed_at) return false;
  switch (kind) {
    case Kind::none: return true;
    case Kind::parents: {
      const auto st = status_at_age(row, observed_at);
      return std::find(parent_statuses.begin(), parent_statuses.end(), st) != parent_statuses.end();
    }
    case Kind::grandparents:
      throw std::invalid_argument("grandparent condition applied to parent rows");
  }
  return false;
}

bool Condition::matches(const ChildGrandparentsRow& row) const {
  if (row.t_c < observed_at) return false;
  switch (kind) {
    case Kind::none: return true;
    case Kind::grandparents: {
      if (require_all_grandparents && !row.all_known()) return false;
      const int alive = grandparents_alive_at_age(row, observed_at);
      return alive >= min_alive && alive <= max_alive;
    }
    case Kind::parents:
      throw std::invalid_argument("parent condition applied to grandparent rows");
  }
  return false;
}

int ConditionalTable::base_age() const { return static_cast<int>(std::floor(condition.observed_at)); }

namespace {

template <class Row>
ConditionalTable build_conditional(std::span<const Row> rows, const Condition& condition, std::optional<Sex> sex,
                                   int omega) {
  std::vector<double> ages;
  for (const auto& row : rows) {
    if (sex && row.child_sex != *sex) continue;
    if (condition.matches(row)) ages.push_back(row.t_c);
  }
  std::string label = condition.label();
  if (sex) label += " sex=" + to_string(*sex);
  if (ages.empty()) throw EmptyRiskSetError(label, "empty risk set for condition " + label);
  return ConditionalTable{condition, sex, ages.size(), LifeTable::from_ages_at_death(ages, omega)};
}

}  // namespace

ConditionalTable conditional_table(std::span<const ChildParentsRow> rows, const Condition& condition,
                                   std::optional<Sex> sex, int omega) {
  return build_conditional(rows, condition, sex, omega);
}

ConditionalTable conditional_table(std::span<const ChildGrandparentsRow> rows, const Condition& condition,
                                   std::optional<Sex> sex, int omega) {
  return build_conditional(rows, condition, sex, omega);
}

// ---------------------------------------------------------------------------

void write_lifetable_csv(std::ostream& out, const LifeTable& table) {
  out << "age,qx,lx,ex\n";
  for (int x = 0; x <= table.omega(); ++x)
    out << x << ',' << format_double(table.qx(x)) << ',' << format_double(table.lx(x)) << ','
        << format_double(table.curtate_ex(x)) << '\n';
}

void write_conditional_table_csv(std::ostream& out, const ConditionalTable& ct) {
  out << "age,qx,lx,ex,condition,risk_set_n\n";
  const std::string label = ct.condition.label();
  for (int x = ct.base_age(); x <= ct.table.omega(); ++x)
    out << x << ',' << format_double(ct.table.qx(x)) << ',' << format_double(ct.table.lx(x)) << ','
        << format_double(ct.table.curtate_ex(x)) << ',' << label << ',' << ct.risk_set_n << '\n';
}

LifeTable read_lifetable_csv(std::istream& in) {
  const auto t = CsvTable::read(in, {"age", "qx"});
  if (t.size() == 0) throw InputError("life table CSV has no rows");
  const std::size_t c_age = t.column("age"), c_q = t.column("qx");
  const bool has_lx = t.has_column("lx");
  std::vector<double> q, lx;
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (t.number(r, c_age) != static_cast<double>(r))
      throw InputError("line " + std::to_string(t.line_of(r)) + ": ages must run 0,1,2,... in order");
    const double v = t.number(r, c_q);
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("line " + std::to_string(t.line_of(r)) + ": qx outside [0,1]");
    q.push_back(v);
    if (has_lx) lx.push_back(t.number(r, t.column("lx")));
  }
  return LifeTable(std::move(q), std::move(lx));
}

}  // namespace jointlife
