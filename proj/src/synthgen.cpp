#include "jointlife/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "jointlife/common.hpp"
#include "jointlife/random.hpp"

namespace jointlife {

namespace {

constexpr double kMarriageAge = 20.0;
constexpr double kFirstBirthAge = 20.0;
constexpr double kLastBirthAge = 40.0;
constexpr double kGestation = 0.75;

struct SimPerson {
  Sex sex = Sex::male;
  Days birth = 0;
  double lifetime = 0.0;
  double u = 0.0;  // survival-scale uniform behind the lifetime
  long father = -1;
  long mother = -1;
};

struct Couple {
  long husband = -1;
  long wife = -1;
};

struct Samplers {
  LawSampler male;
  LawSampler female;
  double male_adult;  // S(20)
  double female_adult;

  const LawSampler& operator[](Sex s) const { return s == Sex::male ? male : female; }
  // Lifetime of someone known to reach 20, from a uniform on the scale of
  // survival given 20.
  double adult_lifetime(Sex s, double u) const { return (*this)[s].lifetime(u * (s == Sex::male ? male_adult : female_adult)); }
  double adult_scale(Sex s, double u) const { return u / (s == Sex::male ? male_adult : female_adult); }
};

Days add_years(Days d, double years) { return d + static_cast<Days>(std::llround(years * kDaysPerYear)); }

const Days kWindowEnd = make_days(1950, 12, 31);

struct Family {
  std::vector<SimPerson> children;
  std::vector<std::optional<SimPerson>> spouses;  // aligned with children
};

}  // namespace

LawParams default_male_law() { return Carriere{0.15, 0.05, 0.80, 1.0, 0.4, 25.0, 0.3, 70.0, 11.0}; }

LawParams default_female_law() { return Carriere{0.14, 0.05, 0.81, 1.0, 0.4, 25.0, 0.3, 72.0, 11.0}; }

void GenConfig::validate() const {
  if (n_founders < 1) throw InputError("n_founders must be at least 1");
  if (generations < 1) throw InputError("generations must be at least 1");
  if (!(mean_children >= 0.0) || max_children < 0) throw InputError("fertility parameters must be non-negative");
  auto rate = [](double r, const std::string& name) {
    if (!(r >= 0.0 && r <= 1.0)) throw InputError(name + " must lie in [0, 1]");
  };
  rate(year_only_rate, "year_only_rate");
  rate(missing_rate, "missing_rate");
  for (const auto& [key, r] : role_missing) {
    static const char* kKeys[] = {"father_birth", "father_death", "mother_birth",
                                  "mother_death", "child_birth",  "child_death"};
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
      throw InputError("unknown role_missing key '" + key + "'");
    rate(r, key);
  }
  jointlife::validate(male_law);
  jointlife::validate(female_law);
  for (const auto* c : {&spouse_copula, &parent_child_copula}) {
    jointlife::validate(*c);
    const auto f = family_of(*c);
    if (f == CopulaFamily::empirical || f == CopulaFamily::smoothed_empirical)
      throw InputError("generator copulas must be parametric");
  }
}

std::vector<PersonRecord> generate(const GenConfig& config) {
  config.validate();
  const Samplers samplers{LawSampler(config.male_law), LawSampler(config.female_law),
                          survival(config.male_law, kMarriageAge), survival(config.female_law, kMarriageAge)};
  const Days window_start = make_days(1800, 1, 1);
  const Days window_days = make_days(1805, 1, 1) - window_start;

  std::vector<SimPerson> people;
  std::vector<Couple> couples(config.n_founders);
  people.resize(2 * config.n_founders);
  parallel_for(config.n_founders, [&](std::size_t i) {
    Rng rng(derive_seed(config.seed, "founder", i));
    SimPerson h{Sex::male}, w{Sex::female};
    const double uh = rng.uniform();
    const double uw = conditional_inverse(config.spouse_copula, uh, rng.uniform());
    h.lifetime = samplers.adult_lifetime(Sex::male, uh);
    w.lifetime = samplers.adult_lifetime(Sex::female, uw);
    h.u = uh * samplers.male_adult;
    w.u = uw * samplers.female_adult;
    h.birth = window_start + static_cast<Days>(rng.below(static_cast<std::uint64_t>(window_days)));
    w.birth = window_start + static_cast<Days>(rng.below(static_cast<std::uint64_t>(window_days)));
    people[2 * i] = h;
    people[2 * i + 1] = w;
    couples[i] = {static_cast<long>(2 * i), static_cast<long>(2 * i + 1)};
  });

  for (int g = 1; g < config.generations && !couples.empty(); ++g) {
    std::vector<double> mean_life(couples.size());
    for (std::size_t c = 0; c < couples.size(); ++c)
      mean_life[c] = 0.5 * (people[couples[c].husband].lifetime + people[couples[c].wife].lifetime);
    const auto rank = survival_ranks(mean_life);
    const bool marry = g + 1 < config.generations;

    std::vector<Family> families(couples.size());
    parallel_for(couples.size(), [&](std::size_t c) {
      Rng rng(derive_seed(config.seed, "family-" + std::to_string(g), c));
      const SimPerson& father = people[couples[c].husband];
      const SimPerson& mother = people[couples[c].wife];
      const int n = std::min(rng.poisson(config.mean_children), config.max_children);
      auto& fam = families[c];
      for (int k = 0; k < n; ++k) {
        const double age = kFirstBirthAge + (kLastBirthAge - kFirstBirthAge) * rng.uniform();
        const bool male = rng.uniform() < 0.5;
        const double w = rng.uniform();
        SimPerson child{male ? Sex::male : Sex::female};
        child.birth = add_years(mother.birth, age);
        if (mother.lifetime <= age || father.lifetime <= years_between(father.birth, child.birth) - kGestation) continue;
        if (child.birth > kWindowEnd) continue;
        child.u = conditional_inverse(config.parent_child_copula, rank[c], w);
        child.lifetime = samplers[child.sex].lifetime(child.u);
        child.father = couples[c].husband;
        child.mother = couples[c].wife;
        std::optional<SimPerson> spouse;
        if (marry && child.lifetime >= kMarriageAge) {
          Rng spouse_rng(derive_seed(derive_seed(config.seed, "spouse-" + std::to_string(g), c), "child",
                                     static_cast<std::uint64_t>(k)));
          const Sex other = male ? Sex::female : Sex::male;
          const double v = conditional_inverse(config.spouse_copula, std::min(samplers.adult_scale(child.sex, child.u), 1.0 - 1e-12),
                                               spouse_rng.uniform());
          SimPerson s{other};
          s.lifetime = samplers.adult_lifetime(other, v);
          s.u = v * (other == Sex::male ? samplers.male_adult : samplers.female_adult);
          s.birth = add_years(child.birth, 6.0 * spouse_rng.uniform() - (male ? 1.0 : 5.0));
          spouse = s;
        }
        fam.children.push_back(child);
        fam.spouses.push_back(spouse);
      }
    });

    std::vector<Couple> next;
    for (const auto& fam : families) {
      for (std::size_t k = 0; k < fam.children.size(); ++k) {
        const long child = static_cast<long>(people.size());
        people.push_back(fam.children[k]);
        if (fam.spouses[k]) {
          const long spouse = static_cast<long>(people.size());
          people.push_back(*fam.spouses[k]);
          next.push_back(fam.children[k].sex == Sex::male ? Couple{child, spouse} : Couple{spouse, child});
        }
      }
    }
    couples = std::move(next);
  }

  std::vector<bool> is_father(people.size(), false), is_mother(people.size(), false);
  for (const auto& p : people) {
    if (p.father >= 0) is_father[p.father] = true;
    if (p.mother >= 0) is_mother[p.mother] = true;
  }
  auto role_rate = [&](const std::string& key) {
    const auto it = config.role_missing.find(key);
    return it == config.role_missing.end() ? 0.0 : it->second;
  };

  const int width = std::max<int>(6, static_cast<int>(std::to_string(people.size()).size()));
  auto id_of = [&](long index) {
    std::string digits = std::to_string(index + 1);
    return "I" + std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(width, digits.size()), '0') +
           digits;
  };

  std::vector<PersonRecord> out(people.size());
  parallel_for(people.size(), [&](std::size_t i) {
    const auto& p = people[i];
    Rng rng(derive_seed(config.seed, "missing", i));
    auto degrade = [&](Days day, const char* field) -> std::optional<PartialDate> {
      double drop = config.missing_rate;
      if (is_father[i]) drop = std::max(drop, role_rate(std::string("father_") + field));
      if (is_mother[i]) drop = std::max(drop, role_rate(std::string("mother_") + field));
      if (p.father >= 0) drop = std::max(drop, role_rate(std::string("child_") + field));
      const double a = rng.uniform(), b = rng.uniform();
      if (a < drop || day > kWindowEnd) return std::nullopt;
      PartialDate d = to_partial_date(day);
      if (b < config.year_only_rate) d.month.reset(), d.day.reset();
      return d;
    };
    PersonRecord& r = out[i];
    r.id = id_of(static_cast<long>(i));
    r.sex = p.sex;
    r.birth = degrade(p.birth, "birth");
    r.death = degrade(add_years(p.birth, p.lifetime), "death");
    if (p.father >= 0) r.father_id = id_of(p.father);
    if (p.mother >= 0) r.mother_id = id_of(p.mother);
  });
  return out;
}

}  // namespace jointlife
