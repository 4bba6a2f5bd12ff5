#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace eigenfolio {

/// Calendar date, daily resolution. Comparison is lexicographic on
/// (year, month, day), which matches chronological order for valid dates.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    bool valid() const;
    std::string to_string() const;  // ISO-8601, YYYY-MM-DD

    /// Parses an ISO-8601 date; throws std::runtime_error on malformed input.
    static Date parse(std::string_view text);
};

/// The calendar date `days` days after `d` (negative moves backwards).
Date advance(const Date& d, int days);

}  // namespace eigenfolio
