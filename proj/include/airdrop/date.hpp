#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace airdrop {

/// Proleptic Gregorian calendar date, UTC.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;
};

std::int64_t days_from_civil(Date d);
Date civil_from_days(std::int64_t z);

/// UTC calendar date of a unix timestamp (seconds).
Date date_from_unix(std::int64_t unix_seconds);

Date parse_date(std::string_view iso); // "YYYY-MM-DD", throws Error(DomainError)
std::string to_string(Date d);

inline std::int64_t diff_days(Date a, Date b) { return days_from_civil(a) - days_from_civil(b); }
Date add_days(Date d, std::int64_t n);

} // namespace airdrop
