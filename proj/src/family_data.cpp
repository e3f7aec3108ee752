#include "jointlife/family_data.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>
#include <utility>

#include "jointlife/common.hpp"
#include "jointlife/csv.hpp"

namespace jointlife {

std::string to_string(Sex s) { return s == Sex::male ? "M" : "F"; }

Sex parse_sex(std::string_view text) {
  if (text == "M" || text == "m" || text == "male") return Sex::male;
  if (text == "F" || text == "f" || text == "female") return Sex::female;
  throw InputError("invalid sex '" + std::string(text) + "'");
}

std::vector<PersonRecord> read_persons_csv(std::istream& in) {
  const auto table = CsvTable::read(in, {"id", "sex", "birth", "death", "father_id", "mother_id"});
  const std::size_t c_id = table.column("id"), c_sex = table.column("sex"), c_birth = table.column("birth"),
                    c_death = table.column("death"), c_father = table.column("father_id"),
                    c_mother = table.column("mother_id");
  std::vector<PersonRecord> out;
  out.reserve(table.size());
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const std::string where = "line " + std::to_string(table.line_of(r)) + ": ";
    try {
      PersonRecord p;
      p.id = table.at(r, c_id);
      if (p.id.empty()) throw InputError("empty id");
      if (!seen.insert(p.id).second) throw InputError("duplicate id '" + p.id + "'");
      p.sex = parse_sex(table.at(r, c_sex));
      if (!table.at(r, c_birth).empty()) p.birth = parse_partial_date(table.at(r, c_birth));
      if (!table.at(r, c_death).empty()) p.death = parse_partial_date(table.at(r, c_death));
      p.father_id = table.at(r, c_father);
      p.mother_id = table.at(r, c_mother);
      out.push_back(std::move(p));
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  return out;
}

void write_persons_csv(std::ostream& out, std::span<const PersonRecord> persons) {
  out << "id,sex,birth,death,father_id,mother_id\n";
  for (const auto& p : persons) {
    out << p.id << ',' << to_string(p.sex) << ',' << (p.birth ? to_string(*p.birth) : "") << ','
        << (p.death ? to_string(*p.death) : "") << ',' << p.father_id << ',' << p.mother_id << '\n';
  }
}

int ChildGrandparentsRow::known() const {
  return static_cast<int>(std::count_if(grandparents.begin(), grandparents.end(),
                                        [](const auto& g) { return g.has_value(); }));
}

std::size_t BuildSummary::dropped_total() const {
  std::size_t n = 0;
  for (const auto& [_, count] : dropped) n += count;
  return n;
}

namespace {

enum class LifespanStatus { ok, missing_date, inconsistent };

struct Resolved {
  LifespanStatus status = LifespanStatus::missing_date;
  Lifespan span;
};

Resolved resolve(const PersonRecord& p) {
  Resolved r;
  if (!p.birth || !p.death) return r;
  r.span = {resolve_date(*p.birth), resolve_date(*p.death)};
  const double age = r.span.age();
  r.status = (age < 0.0 || age > kMaxAge) ? LifespanStatus::inconsistent : LifespanStatus::ok;
  return r;
}

class Index {
 public:
  explicit Index(std::span<const PersonRecord> records) {
    by_id_.reserve(records.size());
    for (const auto& p : records) by_id_.emplace(p.id, &p);
  }
  const PersonRecord* find(const std::string& id) const {
    if (id.empty()) return nullptr;
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : it->second;
  }

 private:
  std::unordered_map<std::string, const PersonRecord*> by_id_;
};

// Applies the lifespan rules to a parent/grandparent. Returns the drop reason
// or an empty string when usable.
std::string ancestor_problem(const PersonRecord* p, const std::string& role, Resolved& out) {
  if (!p) return role + "_not_found";
  out = resolve(*p);
  if (out.status == LifespanStatus::missing_date) return role + "_missing_date";
  if (out.status == LifespanStatus::inconsistent) return role + "_inconsistent_dates";
  if (out.span.age() < kMinParentAge) return role + "_age_below_15";
  return {};
}

}  // namespace

BuildResult<CoupleRow> build_couples(std::span<const PersonRecord> records) {
  const Index index(records);
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& p : records)
    if (!p.father_id.empty() && !p.mother_id.empty()) pairs.emplace(p.father_id, p.mother_id);

  BuildResult<CoupleRow> result;
  result.summary.candidates = pairs.size();
  for (const auto& [father_id, mother_id] : pairs) {
    Resolved f, m;
    std::string problem = ancestor_problem(index.find(father_id), "father", f);
    if (problem.empty()) problem = ancestor_problem(index.find(mother_id), "mother", m);
    if (!problem.empty()) {
      ++result.summary.dropped[problem];
      continue;
    }
    CoupleRow row;
    row.father_id = father_id;
    row.mother_id = mother_id;
    row.father_birth = f.span.birth;
    row.father_death = f.span.death;
    row.mother_birth = m.span.birth;
    row.mother_death = m.span.death;
    row.t_f = f.span.age();
    row.t_m = m.span.age();
    result.rows.push_back(std::move(row));
  }
  result.summary.kept = result.rows.size();
  return result;
}

namespace {

// Child-side rules shared by the parent and grandparent tables.
std::string child_problem(const PersonRecord& child, Resolved& out) {
  out = resolve(child);
  if (out.status == LifespanStatus::missing_date) return "child_missing_date";
  if (out.status == LifespanStatus::inconsistent) return "child_inconsistent_dates";
  return {};
}

template <class Row>
void sort_by_child(std::vector<Row>& rows) {
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.child_id < b.child_id; });
}

}  // namespace

BuildResult<ChildParentsRow> build_child_parents(std::span<const PersonRecord> records) {
  const Index index(records);
  BuildResult<ChildParentsRow> result;
  for (const auto& child : records) {
    if (child.father_id.empty() || child.mother_id.empty()) continue;
    ++result.summary.candidates;
    Resolved c, f, m;
    std::string problem = child_problem(child, c);
    if (problem.empty()) problem = ancestor_problem(index.find(child.father_id), "father", f);
    if (problem.empty()) problem = ancestor_problem(index.find(child.mother_id), "mother", m);
    if (!problem.empty()) {
      ++result.summary.dropped[problem];
      continue;
    }
    ChildParentsRow row;
    row.child_id = child.id;
    row.child_sex = child.sex;
    row.child_birth = c.span.birth;
    row.child_death = c.span.death;
    row.t_c = c.span.age();
    row.father_birth = f.span.birth;
    row.father_death = f.span.death;
    row.t_f = f.span.age();
    row.mother_birth = m.span.birth;
    row.mother_death = m.span.death;
    row.t_m = m.span.age();
    result.rows.push_back(std::move(row));
  }
  sort_by_child(result.rows);
  result.summary.kept = result.rows.size();
  return result;
}

BuildResult<ChildGrandparentsRow> build_child_grandparents(std::span<const PersonRecord> records) {
  const Index index(records);
  BuildResult<ChildGrandparentsRow> result;
  for (const auto& child : records) {
    if (child.father_id.empty() && child.mother_id.empty()) continue;
    ++result.summary.candidates;
    Resolved c;
    if (auto problem = child_problem(child, c); !problem.empty()) {
      ++result.summary.dropped[problem];
      continue;
    }
    const PersonRecord* father = index.find(child.father_id);
    const PersonRecord* mother = index.find(child.mother_id);
    const std::array<const PersonRecord*, 4> slots{
        father ? index.find(father->father_id) : nullptr, father ? index.find(father->mother_id) : nullptr,
        mother ? index.find(mother->father_id) : nullptr, mother ? index.find(mother->mother_id) : nullptr};

    ChildGrandparentsRow row;
    row.child_id = child.id;
    row.child_sex = child.sex;
    row.child_birth = c.span.birth;
    row.child_death = c.span.death;
    row.t_c = c.span.age();
    for (std::size_t s = 0; s < 4; ++s) {
      Resolved g;
      if (ancestor_problem(slots[s], "grandparent", g).empty())
        row.grandparents[s] = GrandparentEntry{g.span.birth, g.span.death, g.span.age()};
    }
    if (row.known() == 0) {
      ++result.summary.dropped["no_grandparent_known"];
      continue;
    }
    result.rows.push_back(std::move(row));
  }
  sort_by_child(result.rows);
  result.summary.kept = result.rows.size();
  return result;
}

std::string to_string(ParentStatus s) {
  switch (s) {
    case ParentStatus::both_alive: return "both_alive";
    case ParentStatus::only_father: return "only_father";
    case ParentStatus::only_mother: return "only_mother";
    case ParentStatus::both_dead: return "both_dead";
  }
  return "unknown";
}

ParentStatus status_at_age(const ChildParentsRow& row, double x) {
  if (row.t_c < x)
    throw InputError("child " + row.child_id + " died at " + format_double(row.t_c) + ", before age " +
                     format_double(x));
  const bool father = alive_at_child_age(row.father_death, row.child_birth, x);
  const bool mother = alive_at_child_age(row.mother_death, row.child_birth, x);
  if (father && mother) return ParentStatus::both_alive;
  if (father) return ParentStatus::only_father;
  if (mother) return ParentStatus::only_mother;
  return ParentStatus::both_dead;
}

int grandparents_alive_at_age(const ChildGrandparentsRow& row, double x) {
  if (row.t_c < x)
    throw InputError("child " + row.child_id + " died at " + format_double(row.t_c) + ", before age " +
                     format_double(x));
  int alive = 0;
  for (const auto& g : row.grandparents)
    if (g && alive_at_child_age(g->death, row.child_birth, x)) ++alive;
  return alive;
}

// ---------------------------------------------------------------------------
// Table CSV round trip

void write_couples_csv(std::ostream& out, std::span<const CoupleRow> rows) {
  out << "father_id,mother_id,father_birth,father_death,mother_birth,mother_death,t_f,t_m\n";
  for (const auto& r : rows) {
    out << r.father_id << ',' << r.mother_id << ',' << format_days(r.father_birth) << ','
        << format_days(r.father_death) << ',' << format_days(r.mother_birth) << ',' << format_days(r.mother_death)
        << ',' << format_double(r.t_f) << ',' << format_double(r.t_m) << '\n';
  }
}

void write_child_parents_csv(std::ostream& out, std::span<const ChildParentsRow> rows) {
  out << "child_id,child_sex,child_birth,child_death,t_c,father_birth,father_death,t_f,mother_birth,mother_death,t_m\n";
  for (const auto& r : rows) {
    out << r.child_id << ',' << to_string(r.child_sex) << ',' << format_days(r.child_birth) << ','
        << format_days(r.child_death) << ',' << format_double(r.t_c) << ',' << format_days(r.father_birth) << ','
        << format_days(r.father_death) << ',' << format_double(r.t_f) << ',' << format_days(r.mother_birth) << ','
        << format_days(r.mother_death) << ',' << format_double(r.t_m) << '\n';
  }
}

void write_child_grandparents_csv(std::ostream& out, std::span<const ChildGrandparentsRow> rows) {
  out << "child_id,child_sex,child_birth,child_death,t_c";
  for (const char* name : kGrandparentNames) out << ',' << name << "_birth," << name << "_death,t_" << name;
  out << '\n';
  for (const auto& r : rows) {
    out << r.child_id << ',' << to_string(r.child_sex) << ',' << format_days(r.child_birth) << ','
        << format_days(r.child_death) << ',' << format_double(r.t_c);
    for (const auto& g : r.grandparents) {
      if (g)
        out << ',' << format_days(g->birth) << ',' << format_days(g->death) << ',' << format_double(g->age_at_death);
      else
        out << ",,,";
    }
    out << '\n';
  }
}

namespace {

Days parse_full_date(const CsvTable& t, std::size_t row, std::size_t col) {
  const auto d = parse_partial_date(t.at(row, col));
  if (!d.complete())
    throw InputError("line " + std::to_string(t.line_of(row)) + ": expected a full date in column '" +
                     t.header()[col] + "'");
  return resolve_date(d);
}

template <class Fn>
void for_each_row(const CsvTable& t, Fn&& fn) {
  for (std::size_t r = 0; r < t.size(); ++r) {
    try {
      fn(r);
    } catch (const InputError& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw InputError("line " + std::to_string(t.line_of(r)) + ": " + msg);
    }
  }
}

}  // namespace

std::vector<CoupleRow> read_couples_csv(std::istream& in) {
  const auto t = CsvTable::read(in, {"father_id", "mother_id", "father_birth", "father_death", "mother_birth",
                                     "mother_death", "t_f", "t_m"});
  std::vector<CoupleRow> rows;
  for_each_row(t, [&](std::size_t r) {
    CoupleRow row;
    row.father_id = t.at(r, t.column("father_id"));
    row.mother_id = t.at(r, t.column("mother_id"));
    row.father_birth = parse_full_date(t, r, t.column("father_birth"));
    row.father_death = parse_full_date(t, r, t.column("father_death"));
    row.mother_birth = parse_full_date(t, r, t.column("mother_birth"));
    row.mother_death = parse_full_date(t, r, t.column("mother_death"));
    row.t_f = t.number(r, t.column("t_f"));
    row.t_m = t.number(r, t.column("t_m"));
    rows.push_back(std::move(row));
  });
  return rows;
}

std::vector<ChildParentsRow> read_child_parents_csv(std::istream& in) {
  const auto t = CsvTable::read(in, {"child_id", "child_sex", "child_birth", "child_death", "t_c", "father_birth",
                                     "father_death", "t_f", "mother_birth", "mother_death", "t_m"});
  std::vector<ChildParentsRow> rows;
  for_each_row(t, [&](std::size_t r) {
    ChildParentsRow row;
    row.child_id = t.at(r, t.column("child_id"));
    row.child_sex = parse_sex(t.at(r, t.column("child_sex")));
    row.child_birth = parse_full_date(t, r, t.column("child_birth"));
    row.child_death = parse_full_date(t, r, t.column("child_death"));
    row.t_c = t.number(r, t.column("t_c"));
    row.father_birth = parse_full_date(t, r, t.column("father_birth"));
    row.father_death = parse_full_date(t, r, t.column("father_death"));
    row.t_f = t.number(r, t.column("t_f"));
    row.mother_birth = parse_full_date(t, r, t.column("mother_birth"));
    row.mother_death = parse_full_date(t, r, t.column("mother_death"));
    row.t_m = t.number(r, t.column("t_m"));
    rows.push_back(std::move(row));
  });
  return rows;
}

std::vector<ChildGrandparentsRow> read_child_grandparents_csv(std::istream& in) {
  std::vector<std::string> required{"child_id", "child_sex", "child_birth", "child_death", "t_c"};
  for (const char* name : kGrandparentNames) {
    required.push_back(std::string(name) + "_birth");
    required.push_back(std::string(name) + "_death");
    required.push_back(std::string("t_") + name);
  }
  const auto t = CsvTable::read(in, required);
  std::vector<ChildGrandparentsRow> rows;
  for_each_row(t, [&](std::size_t r) {
    ChildGrandparentsRow row;
    row.child_id = t.at(r, t.column("child_id"));
    row.child_sex = parse_sex(t.at(r, t.column("child_sex")));
    row.child_birth = parse_full_date(t, r, t.column("child_birth"));
    row.child_death = parse_full_date(t, r, t.column("child_death"));
    row.t_c = t.number(r, t.column("t_c"));
    for (std::size_t s = 0; s < 4; ++s) {
      const std::string name = kGrandparentNames[s];
      const std::size_t c_age = t.column("t_" + name);
      if (t.at(r, c_age).empty()) continue;
      row.grandparents[s] = GrandparentEntry{parse_full_date(t, r, t.column(name + "_birth")),
                                             parse_full_date(t, r, t.column(name + "_death")),
                                             t.number(r, c_age)};
    }
    rows.push_back(std::move(row));
  });
  return rows;
}

}  // namespace jointlife
