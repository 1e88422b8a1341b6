#include "tempdyn/dates.hpp"

#include <charconv>
#include <cstdio>

#include "tempdyn/errors.hpp"

namespace tempdyn {

namespace {

int parse_int_field(const std::string& text, std::size_t pos, std::size_t len) {
    int out = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    if (ec != std::errc{} || ptr != first + len)
        throw validation_error("malformed date '" + text + "': expected YYYY-MM-DD");
    return out;
}

} // namespace

civil_date parse_iso_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw validation_error("malformed date '" + text + "': expected YYYY-MM-DD");
    const int y = parse_int_field(text, 0, 4);
    const int m = parse_int_field(text, 5, 2);
    const int d = parse_int_field(text, 8, 2);
    const civil_date date{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                          std::chrono::day{unsigned(d)}};
    if (!date.ok())
        throw validation_error("invalid calendar date '" + text + "'");
    return date;
}

civil_date parse_iso_date(const std::string& text, const std::string& context) {
    try {
        return parse_iso_date(text);
    } catch (const validation_error& e) {
        throw validation_error(context + ": " + e.what());
    }
}

std::string format_iso_date(const civil_date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                  unsigned(d.day()));
    return buf;
}

civil_date add_days(const civil_date& d, std::int64_t n) {
    const auto days = std::chrono::sys_days(d) + std::chrono::days(n);
    return civil_date(days);
}

std::int64_t days_between(const civil_date& a, const civil_date& b) {
    return (std::chrono::sys_days(b) - std::chrono::sys_days(a)).count();
}

bool is_leap_day(const civil_date& d) {
    return d.month() == std::chrono::month{2} && d.day() == std::chrono::day{29};
}

} // namespace tempdyn
