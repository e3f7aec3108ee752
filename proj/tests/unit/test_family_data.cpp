#include <doctest.h>

#include <sstream>

#include "jointlife/common.hpp"
#include "jointlife/family_data.hpp"

using namespace jointlife;

namespace {

PersonRecord person(std::string id, Sex sex, const char* birth, const char* death, std::string father = {},
                    std::string mother = {}) {
  PersonRecord p;
  p.id = std::move(id);
  p.sex = sex;
  if (birth) p.birth = parse_partial_date(birth);
  if (death) p.death = parse_partial_date(death);
  p.father_id = std::move(father);
  p.mother_id = std::move(mother);
  return p;
}

std::vector<PersonRecord> family() {
  return {person("F", Sex::male, "1800-01-01", "1860-01-01"), person("M", Sex::female, "1802-01-01", "1870-01-01"),
          person("C", Sex::male, "1830-01-01", "1900-01-01", "F", "M")};
}

}  // namespace

TEST_CASE("couples") {
  auto records = family();
  auto couples = build_couples(records);
  REQUIRE(couples.rows.size() == 1);
  CHECK(couples.rows[0].t_f == doctest::Approx(60.0).epsilon(1e-3));
  CHECK(couples.rows[0].t_m == doctest::Approx(68.0).epsilon(1e-3));

  records.push_back(person("C2", Sex::female, "1832-01-01", "1890-01-01", "F", "M"));
  records.push_back(person("C3", Sex::female, "1834-01-01", "1891-01-01", "F", "M"));
  CHECK(build_couples(records).rows.size() == 1);

  records[1].death.reset();
  couples = build_couples(records);
  CHECK(couples.rows.empty());
  CHECK(couples.summary.candidates == 1);
  CHECK(couples.summary.dropped.at("mother_missing_date") == 1);
}

TEST_CASE("child-parent rows and removal rules") {
  auto records = family();
  CHECK(build_child_parents(records).rows.size() == 1);

  auto no_father_death = records;
  no_father_death[0].death.reset();
  CHECK(build_child_parents(no_father_death).rows.empty());

  auto young_parent = records;
  young_parent[0].death = parse_partial_date("1812-01-01");
  const auto r = build_child_parents(young_parent);
  CHECK(r.rows.empty());
  CHECK(r.summary.dropped.at("father_age_below_15") == 1);
  CHECK(r.summary.kept + r.summary.dropped_total() == r.summary.candidates);
}

TEST_CASE("grandparent rows keep partial knowledge") {
  std::vector<PersonRecord> records{
      person("GFF", Sex::male, "1770", "1830"),
      person("F", Sex::male, "1800-01-01", "1860-01-01", "GFF", "GMF"),
      person("M", Sex::female, "1802-01-01", "1870-01-01", "GFM", "GMM"),
      person("C", Sex::male, "1830-01-01", "1900-01-01", "F", "M"),
  };
  auto g = build_child_grandparents(records);
  auto it = std::find_if(g.rows.begin(), g.rows.end(), [](const auto& r) { return r.child_id == "C"; });
  REQUIRE(it != g.rows.end());
  CHECK(it->known() == 1);
  CHECK(it->grandparents[kGff].has_value());
  CHECK_FALSE(it->grandparents[kGmm].has_value());
  CHECK_FALSE(it->all_known());

  records.erase(records.begin());
  g = build_child_grandparents(records);
  CHECK(std::none_of(g.rows.begin(), g.rows.end(), [](const auto& r) { return r.child_id == "C"; }));
  CHECK(g.summary.dropped.at("no_grandparent_known") >= 1);

  std::vector<PersonRecord> full{
      person("A", Sex::male, "1770", "1830"),        person("B", Sex::female, "1772", "1831"),
      person("D", Sex::male, "1771", "1832"),        person("E", Sex::female, "1773", "1833"),
      person("F", Sex::male, "1800", "1860", "A", "B"), person("M", Sex::female, "1802", "1870", "D", "E"),
      person("C", Sex::male, "1830", "1900", "F", "M"),
  };
  g = build_child_grandparents(full);
  it = std::find_if(g.rows.begin(), g.rows.end(), [](const auto& r) { return r.child_id == "C"; });
  REQUIRE(it != g.rows.end());
  CHECK(it->all_known());
}

TEST_CASE("parent status at child age") {
  ChildParentsRow row;
  row.child_birth = make_days(1830, 1, 1);
  row.child_death = make_days(1900, 1, 1);
  row.t_c = years_between(row.child_birth, row.child_death);
  row.father_death = make_days(1855, 1, 1);
  row.mother_death = make_days(1875, 1, 1);
  CHECK(status_at_age(row, 20) == ParentStatus::both_alive);
  CHECK(status_at_age(row, 30) == ParentStatus::only_mother);
  CHECK(status_at_age(row, 50) == ParentStatus::both_dead);
  CHECK_THROWS_AS(status_at_age(row, 80), InputError);
}

TEST_CASE("persons csv round trip and diagnostics") {
  const auto records = family();
  std::ostringstream out;
  write_persons_csv(out, records);
  std::istringstream in(out.str());
  const auto back = read_persons_csv(in);
  REQUIRE(back.size() == records.size());
  CHECK(back[2].father_id == "F");
  CHECK(back[1].death == records[1].death);

  std::istringstream bad("id,sex,birth,death,father_id,mother_id\nA,M,1800,1850,,\nB,F,18o2,1870,,\n");
  try {
    read_persons_csv(bad);
    FAIL("expected an input error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream empty("");
  CHECK_THROWS_AS(read_persons_csv(empty), InputError);
}

TEST_CASE("derived tables round trip through csv") {
  const auto records = family();
  const auto cp = build_child_parents(records).rows;
  std::stringstream s;
  write_child_parents_csv(s, cp);
  const auto back = read_child_parents_csv(s);
  REQUIRE(back.size() == 1);
  CHECK(back[0].t_c == doctest::Approx(cp[0].t_c));
  CHECK(back[0].mother_death == cp[0].mother_death);

  const auto couples = build_couples(records).rows;
  std::stringstream c;
  write_couples_csv(c, couples);
  CHECK(read_couples_csv(c).size() == 1);
}
