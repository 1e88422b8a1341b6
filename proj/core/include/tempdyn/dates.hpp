#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace tempdyn {

using civil_date = std::chrono::year_month_day;

// Parses "YYYY-MM-DD". Throws validation_error on malformed text or an
// impossible calendar date (e.g. 2001-02-29); `context`, when given, prefixes
// the error message.
civil_date parse_iso_date(const std::string& text);
civil_date parse_iso_date(const std::string& text, const std::string& context);

std::string format_iso_date(const civil_date& d);

civil_date add_days(const civil_date& d, std::int64_t n);

// b - a in days.
std::int64_t days_between(const civil_date& a, const civil_date& b);

bool is_leap_day(const civil_date& d); // Feb 29

} // namespace tempdyn
