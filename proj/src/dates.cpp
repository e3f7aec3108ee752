#include "jointlife/dates.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "jointlife/common.hpp"

namespace jointlife {

namespace {

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw InputError("malformed date '" + std::string(whole) + "'");
  return v;
}

}  // namespace

PartialDate parse_partial_date(std::string_view text) {
  PartialDate d;
  const auto first = text.find('-');
  if (first != 4 && !(first == std::string_view::npos && text.size() == 4))
    throw InputError("malformed date '" + std::string(text) + "'");
  d.year = parse_int(text.substr(0, 4), text);
  if (d.year < kMinYear || d.year > kMaxYear)
    throw InputError("date '" + std::string(text) + "' outside supported years");
  if (first == std::string_view::npos) return d;

  const auto rest = text.substr(5);
  const auto second = rest.find('-');
  const auto month_text = rest.substr(0, second);
  if (month_text.size() != 2) throw InputError("malformed date '" + std::string(text) + "'");
  const int month = parse_int(month_text, text);
  if (month < 1 || month > 12) throw InputError("invalid month in date '" + std::string(text) + "'");
  d.month = static_cast<unsigned>(month);
  if (second == std::string_view::npos) return d;

  const auto day_text = rest.substr(second + 1);
  if (day_text.size() != 2) throw InputError("malformed date '" + std::string(text) + "'");
  const int day = parse_int(day_text, text);
  const std::chrono::year_month_day ymd{std::chrono::year{d.year}, std::chrono::month{*d.month},
                                        std::chrono::day{static_cast<unsigned>(day)}};
  if (day < 1 || !ymd.ok()) throw InputError("invalid day in date '" + std::string(text) + "'");
  d.day = static_cast<unsigned>(day);
  return d;
}

std::string to_string(const PartialDate& d) {
  char buf[16];
  if (!d.month) {
    std::snprintf(buf, sizeof buf, "%04d", d.year);
  } else if (!d.day) {
    std::snprintf(buf, sizeof buf, "%04d-%02u", d.year, *d.month);
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", d.year, *d.month, *d.day);
  }
  return buf;
}

Days make_days(int year, unsigned month, unsigned day) {
  const std::chrono::sys_days sd = std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day};
  return static_cast<Days>(sd.time_since_epoch().count());
}

Days resolve_date(const PartialDate& d) {
  if (!d.month) return make_days(d.year, 7, 1);
  if (!d.day) return make_days(d.year, *d.month, 15);
  return make_days(d.year, *d.month, *d.day);
}

std::string format_days(Days d) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{d}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int calendar_year(Days d) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{d}}};
  return static_cast<int>(ymd.year());
}

PartialDate to_partial_date(Days d) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{d}}};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day())};
}

}  // namespace jointlife
