#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jointlife/copulas.hpp"
#include "jointlife/family_data.hpp"
#include "jointlife/mortality_laws.hpp"

namespace jointlife {

// Default marginals: a historical mortality profile with heavy infant and
// child mortality; women live slightly longer.
LawParams default_male_law();
LawParams default_female_law();

struct GenConfig {
  std::size_t n_founders = 1000;  // founder couples, born 1800-1804
  int generations = 3;            // including the founders
  std::uint64_t seed = 1;
  LawParams male_law = default_male_law();
  LawParams female_law = default_female_law();
  CopulaModel spouse_copula = Frank{3.367};
  // Links a child's lifetime to the rank of its parents' mean lifetime.
  CopulaModel parent_child_copula = Gaussian{0.3};
  double mean_children = 2.0;
  int max_children = 10;
  // Fractions of dates reduced to the year only / removed entirely.
  double year_only_rate = 0.0;
  double missing_rate = 0.0;
  // Extra removal rates by role and field: keys are <role>_<birth|death>
  // with role father, mother or child.
  std::map<std::string, double> role_missing;

  // Throws InputError.
  void validate() const;
};

/// Simulates founder couples and their descendants. Spouses are married only
/// when both reach 20, and the spouse copula acts on survival given 20; children are born at mother ages uniform in [20, 40]
/// while both parents live. Records close at the end of 1950: later births are
/// not emitted and later deaths are left blank. Ids follow creation order, so
/// the same config always yields the same corpus.
std::vector<PersonRecord> generate(const GenConfig& config);

}  // namespace jointlife
