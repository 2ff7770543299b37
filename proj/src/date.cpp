#include "airdrop/date.hpp"

#include "airdrop/errors.hpp"

#include <cstdio>

namespace airdrop {

// Howard Hinnant's civil-days algorithms.
std::int64_t days_from_civil(Date d) {
    std::int64_t y = d.year;
    const int m = d.month;
    const int dd = d.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + dd - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

Date date_from_unix(std::int64_t unix_seconds) {
    std::int64_t days = unix_seconds / 86400;
    if (unix_seconds < 0 && unix_seconds % 86400 != 0) --days;
    return civil_from_days(days);
}

Date add_days(Date d, std::int64_t n) { return civil_from_days(days_from_civil(d) + n); }

Date parse_date(std::string_view iso) {
    int y = 0, m = 0, d = 0;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
        std::sscanf(std::string(iso).c_str(), "%d-%d-%d", &y, &m, &d) != 3 || m < 1 || m > 12 ||
        d < 1 || d > 31) {
        throw Error(ErrorCode::DomainError, "malformed ISO date: " + std::string(iso));
    }
    return Date{y, m, d};
}

std::string to_string(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

} // namespace airdrop
