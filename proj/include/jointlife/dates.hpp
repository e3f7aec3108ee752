#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace jointlife {

/// Days since 1970-01-01 (negative for the 19th century).
using Days = std::int32_t;

inline constexpr double kDaysPerYear = 365.25;
inline constexpr int kMinYear = 1700;
inline constexpr int kMaxYear = 1950;

/// A calendar date that may be known only to the year or the month.
struct PartialDate {
  int year = 0;
  std::optional<unsigned> month;
  std::optional<unsigned> day;

  bool complete() const { return month.has_value() && day.has_value(); }
  friend bool operator==(const PartialDate&, const PartialDate&) = default;
};

// Parses YYYY, YYYY-MM or YYYY-MM-DD. Throws InputError on anything else,
// on impossible calendar dates and on years outside [kMinYear, kMaxYear].
PartialDate parse_partial_date(std::string_view text);
std::string to_string(const PartialDate& d);

// Year-only dates map to July 1st (mid-year); month-only dates map to the
// 15th of the month.
Days resolve_date(const PartialDate& d);

Days make_days(int year, unsigned month, unsigned day);
std::string format_days(Days d);
int calendar_year(Days d);
PartialDate to_partial_date(Days d);

inline double years_between(Days from, Days to) { return (to - from) / kDaysPerYear; }

}  // namespace jointlife
