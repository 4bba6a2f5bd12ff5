#include "eigenfolio/date.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace eigenfolio {

bool Date::valid() const {
    namespace ch = std::chrono;
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    return ch::year_month_day{ch::year{year}, ch::month{static_cast<unsigned>(month)},
                              ch::day{static_cast<unsigned>(day)}}
        .ok();
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(std::string_view text) {
    auto fail = [&]() -> void {
        throw std::runtime_error("malformed date '" + std::string(text) +
                                 "' (expected YYYY-MM-DD)");
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') fail();
    auto field = [&](int pos, int len) {
        int value = 0;
        const char* first = text.data() + pos;
        auto [ptr, ec] = std::from_chars(first, first + len, value);
        if (ec != std::errc{} || ptr != first + len) fail();
        return value;
    };
    Date d{field(0, 4), field(5, 2), field(8, 2)};
    if (!d.valid()) fail();
    return d;
}

Date advance(const Date& d, int days) {
    namespace ch = std::chrono;
    ch::sys_days base = ch::year_month_day{ch::year{d.year}, ch::month{static_cast<unsigned>(d.month)},
                                           ch::day{static_cast<unsigned>(d.day)}};
    ch::year_month_day shifted{base + ch::days{days}};
    return Date{static_cast<int>(shifted.year()), static_cast<int>(static_cast<unsigned>(shifted.month())),
                static_cast<int>(static_cast<unsigned>(shifted.day()))};
}

}  // namespace eigenfolio
