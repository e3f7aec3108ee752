#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jointlife/dates.hpp"

namespace jointlife {

enum class Sex { male, female };

std::string to_string(Sex s);
Sex parse_sex(std::string_view text);

struct PersonRecord {
  std::string id;
  Sex sex = Sex::male;
  std::optional<PartialDate> birth;
  std::optional<PartialDate> death;
  std::string father_id;  // empty when unknown
  std::string mother_id;
};

inline constexpr double kMinParentAge = 15.0;
inline constexpr double kMaxAge = 105.0;

/// Reads the persons CSV (`id,sex,birth,death,father_id,mother_id`).
/// Throws InputError naming the offending line.
std::vector<PersonRecord> read_persons_csv(std::istream& in);
void write_persons_csv(std::ostream& out, std::span<const PersonRecord> persons);

/// Resolved lifespan of one person.
struct Lifespan {
  Days birth = 0;
  Days death = 0;
  double age() const { return years_between(birth, death); }
};

struct CoupleRow {
  std::string father_id;
  std::string mother_id;
  Days father_birth = 0, father_death = 0;
  Days mother_birth = 0, mother_death = 0;
  double t_f = 0.0;
  double t_m = 0.0;
};

struct ChildParentsRow {
  std::string child_id;
  Sex child_sex = Sex::male;
  Days child_birth = 0, child_death = 0;
  double t_c = 0.0;
  Days father_birth = 0, father_death = 0;
  double t_f = 0.0;
  Days mother_birth = 0, mother_death = 0;
  double t_m = 0.0;
};

struct GrandparentEntry {
  Days birth = 0;
  Days death = 0;
  double age_at_death = 0.0;
};

enum GrandparentSlot : std::size_t { kGff = 0, kGmf = 1, kGfm = 2, kGmm = 3 };
inline constexpr std::array<const char*, 4> kGrandparentNames{"gff", "gmf", "gfm", "gmm"};

struct ChildGrandparentsRow {
  std::string child_id;
  Sex child_sex = Sex::male;
  Days child_birth = 0, child_death = 0;
  double t_c = 0.0;
  // Paternal grandfather, paternal grandmother, maternal grandfather,
  // maternal grandmother.
  std::array<std::optional<GrandparentEntry>, 4> grandparents;

  int known() const;
  bool all_known() const { return known() == 4; }
};

/// Per-rule accounting: kept + sum(dropped) == candidates.
struct BuildSummary {
  std::size_t candidates = 0;
  std::size_t kept = 0;
  std::map<std::string, std::size_t> dropped;

  std::size_t dropped_total() const;
};

template <class Row>
struct BuildResult {
  std::vector<Row> rows;
  BuildSummary summary;
};

// Candidates are distinct (father_id, mother_id) pairs with a common child.
BuildResult<CoupleRow> build_couples(std::span<const PersonRecord> records);
// Candidates are persons with both parent links.
BuildResult<ChildParentsRow> build_child_parents(std::span<const PersonRecord> records);
// Candidates are persons with at least one parent link.
BuildResult<ChildGrandparentsRow> build_child_grandparents(std::span<const PersonRecord> records);

enum class ParentStatus { both_alive, only_father, only_mother, both_dead };
std::string to_string(ParentStatus s);

// Status of the parents when the child reaches age x. Throws InputError when
// the child died before x.
ParentStatus status_at_age(const ChildParentsRow& row, double x);
// Number of known grandparents alive when the child reaches age x.
int grandparents_alive_at_age(const ChildGrandparentsRow& row, double x);

// A parent alive at child-age x: death strictly after child_birth + x years.
inline bool alive_at_child_age(Days death, Days child_birth, double x) {
  return static_cast<double>(death) > static_cast<double>(child_birth) + x * kDaysPerYear;
}

void write_couples_csv(std::ostream& out, std::span<const CoupleRow> rows);
void write_child_parents_csv(std::ostream& out, std::span<const ChildParentsRow> rows);
void write_child_grandparents_csv(std::ostream& out, std::span<const ChildGrandparentsRow> rows);
std::vector<CoupleRow> read_couples_csv(std::istream& in);
std::vector<ChildParentsRow> read_child_parents_csv(std::istream& in);
std::vector<ChildGrandparentsRow> read_child_grandparents_csv(std::istream& in);

}  // namespace jointlife
