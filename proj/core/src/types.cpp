// Copyright 2026 the shotcast authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "shotcast/types.h"

#include <charconv>
#include <cstdio>

namespace shotcast {

namespace {

// Days-from-civil / civil-from-days (Hinnant). Valid across the whole
// proleptic Gregorian calendar; 1970-01-01 is day 0.
int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yr = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yr + (m <= 2));
}

bool parse_int(const char* first, const char* last, int& out) {
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool valid_ymd(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1) return false;
    static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int dim = len[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) dim = 29;
    return d <= dim;
}

}  // namespace

int Date::day_number() const {
    return static_cast<int>(days_from_civil(year, static_cast<unsigned>(month),
                                            static_cast<unsigned>(day)));
}

Date Date::from_day_number(int days) {
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    return Date{y, static_cast<int>(m), static_cast<int>(d)};
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::optional<Date> Date::parse_dmy(const std::string& text) {
    const char* s = text.data();
    const char* end = s + text.size();
    const char* slash1 = nullptr;
    const char* slash2 = nullptr;
    for (const char* p = s; p != end; ++p) {
        if (*p != '/') continue;
        if (!slash1) slash1 = p;
        else if (!slash2) slash2 = p;
        else return std::nullopt;
    }
    if (!slash1 || !slash2) return std::nullopt;

    int d, m, y;
    if (!parse_int(s, slash1, d)) return std::nullopt;
    if (!parse_int(slash1 + 1, slash2, m)) return std::nullopt;
    const auto ylen = end - (slash2 + 1);
    if (!parse_int(slash2 + 1, end, y)) return std::nullopt;
    if (ylen == 2) {
        y = y < 70 ? 2000 + y : 1900 + y;
    } else if (ylen != 4) {
        return std::nullopt;
    }
    if (!valid_ymd(y, m, d)) return std::nullopt;
    return Date{y, m, d};
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::HomeWin: return "H";
        case Outcome::Draw: return "D";
        case Outcome::AwayWin: return "A";
    }
    return "?";
}

const char* to_string(Market m) {
    switch (m) {
        case Market::Match1X2: return "1x2";
        case Market::OverUnder25: return "ou25";
    }
    return "?";
}

}  // namespace shotcast
