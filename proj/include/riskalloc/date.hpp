#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace riskalloc {

using Date = std::chrono::year_month_day;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD).
std::optional<Date> parse_date(std::string_view text);

std::string format_date(const Date& date);

inline int year_of(const Date& date) { return static_cast<int>(date.year()); }

/// Days since 1970-01-01.
inline long day_number(const Date& date) {
  return std::chrono::sys_days(date).time_since_epoch().count();
}

inline Date date_from_day_number(long days) {
  return Date(std::chrono::sys_days(std::chrono::days(days)));
}

inline bool is_weekend(const Date& date) {
  const std::chrono::weekday wd{std::chrono::sys_days(date)};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

}  // namespace riskalloc
