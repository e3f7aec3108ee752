#include <doctest.h>

#include <sstream>

#include "jointlife/common.hpp"
#include "jointlife/lifetable.hpp"

using namespace jointlife;

TEST_CASE("empirical table from ages at death") {
  const std::vector<double> ages{0.5, 1.5, 1.5, 3.0};
  const auto t = LifeTable::from_ages_at_death(ages, 3);
  CHECK(t.qx(0) == doctest::Approx(0.25));
  CHECK(t.qx(1) == doctest::Approx(2.0 / 3.0));
  CHECK(t.qx(2) == 0.0);
  CHECK(t.qx(3) == 1.0);
  CHECK(t.exposure() == std::vector<double>{4, 3, 1, 1});

  const std::vector<double> infants{0.1, 0.2, 0.9};
  const auto d = LifeTable::from_ages_at_death(infants, 5);
  CHECK(d.qx(0) == 1.0);
  CHECK(d.curtate_ex(0) == 0.0);

  const std::vector<double> old{5.0};
  const auto o = LifeTable::from_ages_at_death(old, 5);
  for (int x = 0; x < 5; ++x) CHECK(o.qx(x) == 0.0);
  CHECK(o.curtate_ex(0) == 5.0);

  const std::vector<double> none;
  CHECK_THROWS_AS(LifeTable::from_ages_at_death(none, 5), InputError);
}

TEST_CASE("survival probabilities and expectations") {
  const LifeTable t({0.5, 0.5, 1.0});
  CHECK(t.tpx(0, 0) == 1.0);
  CHECK(t.tpx(0, 2) == doctest::Approx(0.25));
  CHECK(t.tpx(2, 1) == 0.0);
  CHECK(t.lx(1) == doctest::Approx(50000.0));

  const LifeTable h({0.5, 1.0});
  CHECK(h.curtate_ex(0) == doctest::Approx(0.5));
  CHECK(h.curtate_ex(1) == 0.0);

  // e_x = p_x (1 + e_{x+1}) on an arbitrary table.
  const LifeTable r({0.1, 0.05, 0.2, 0.3, 0.6, 1.0});
  for (int x = 0; x < r.omega(); ++x)
    CHECK(r.curtate_ex(x) == doctest::Approx((1.0 - r.qx(x)) * (1.0 + r.curtate_ex(x + 1))));
}

TEST_CASE("the last age is always closed") {
  const LifeTable t({0.1, 0.2, 0.3});
  CHECK(t.qx(2) == 1.0);
}

TEST_CASE("condition grammar") {
  CHECK(Condition::parse("none").kind == Condition::Kind::none);
  CHECK(Condition::parse("both_alive@30").label() == "both_alive@30");
  CHECK(Condition::parse("one_alive@20").label() == "one_alive@20");
  CHECK(Condition::parse("both_alive|both_dead@25.5").label() == "both_alive|both_dead@25.5");
  const auto gp = Condition::parse("gp2-4/all4@10");
  CHECK(gp.kind == Condition::Kind::grandparents);
  CHECK(gp.min_alive == 2);
  CHECK(gp.max_alive == 4);
  CHECK(gp.require_all_grandparents);
  CHECK(gp.label() == "gp2-4/all4@10");
  CHECK_THROWS_AS(Condition::parse("both_alive"), InputError);
  CHECK_THROWS_AS(Condition::parse("sometimes@3"), InputError);
  CHECK_THROWS_AS(Condition::parse("gp5@3"), InputError);
  CHECK_THROWS_AS(Condition::parse("gp3-1@3"), InputError);
}

namespace {

ChildParentsRow row(double t_c, double father_gap, double mother_gap, Sex sex = Sex::male) {
  ChildParentsRow r;
  r.child_sex = sex;
  r.child_birth = make_days(1830, 1, 1);
  r.t_c = t_c;
  r.child_death = r.child_birth + static_cast<Days>(t_c * kDaysPerYear);
  r.father_death = r.child_birth + static_cast<Days>(father_gap * kDaysPerYear);
  r.mother_death = r.child_birth + static_cast<Days>(mother_gap * kDaysPerYear);
  return r;
}

}  // namespace

TEST_CASE("conditional tables") {
  const std::vector<ChildParentsRow> rows{row(10, 40, 50), row(45, 40, 50), row(70, 25, 50), row(80, 10, 15),
                                          row(65, 50, 60, Sex::female)};
  const auto all = conditional_table(rows, Condition::none(30));
  CHECK(all.risk_set_n == 4);

  std::vector<double> survivors;
  for (const auto& r : rows)
    if (r.t_c >= 30) survivors.push_back(r.t_c);
  const auto direct = LifeTable::from_ages_at_death(survivors);
  CHECK(all.table.q() == direct.q());

  const auto alive = conditional_table(rows, Condition::parse("both_alive@30"));
  CHECK(alive.risk_set_n == 2);
  const auto dead = conditional_table(rows, Condition::parse("both_dead@30"));
  CHECK(dead.risk_set_n == 1);
  CHECK(dead.table.curtate_ex(30) == doctest::Approx(50.0));
  CHECK(conditional_table(rows, Condition::parse("both_alive@30"), Sex::female).risk_set_n == 1);
  CHECK_THROWS_AS(conditional_table(rows, Condition::parse("only_father@30")), EmptyRiskSetError);
}

TEST_CASE("life table csv round trip") {
  const LifeTable t({0.1, 0.05, 0.2, 0.3, 0.6, 1.0}, {100, 90, 85, 68, 48, 19});
  std::stringstream s;
  write_lifetable_csv(s, t);
  const auto back = read_lifetable_csv(s);
  CHECK(back.q() == t.q());
  CHECK(back.omega() == 5);

  std::istringstream gap("age,qx\n0,0.1\n2,1\n");
  CHECK_THROWS_AS(read_lifetable_csv(gap), InputError);
}
