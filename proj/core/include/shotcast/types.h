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
#pragma once

#include <compare>
#include <optional>
#include <string>

namespace shotcast {

enum class Outcome { HomeWin, Draw, AwayWin };

enum class Market { Match1X2, OverUnder25 };

/// Calendar date. Comparisons are chronological; day_number() counts days
/// since 1970-01-01 so date arithmetic is plain integer subtraction.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    int day_number() const;
    std::string to_string() const;  // YYYY-MM-DD

    // DD/MM/YY or DD/MM/YYYY (the football-data.co.uk formats).
    // Two-digit years pivot at 70: <70 -> 20yy, else 19yy.
    static std::optional<Date> parse_dmy(const std::string& text);
    static Date from_day_number(int days);

    friend auto operator<=>(const Date& a, const Date& b) {
        if (auto c = a.year <=> b.year; c != 0) return c;
        if (auto c = a.month <=> b.month; c != 0) return c;
        return a.day <=> b.day;
    }
    friend bool operator==(const Date&, const Date&) = default;
};

inline int days_between(const Date& earlier, const Date& later) {
    return later.day_number() - earlier.day_number();
}

struct Odds1X2 {
    double home = 0;
    double draw = 0;
    double away = 0;
};

struct OddsOU {
    double over = 0;
    double under = 0;
};

/// One parsed match. Shots and odds are optional: the source provides them
/// for some league-seasons only.
struct MatchRecord {
    std::string league_id;
    std::string season_id;
    Date date;
    std::string home_team;
    std::string away_team;
    int home_goals = 0;
    int away_goals = 0;
    std::optional<int> home_shots;
    std::optional<int> away_shots;
    Outcome outcome = Outcome::Draw;
    std::optional<Odds1X2> odds_1x2;
    std::optional<OddsOU> odds_ou25;
    // Row position within the source file; breaks date ties (source files
    // are chronologically ordered within a date).
    int source_row = 0;

    bool has_shots() const { return home_shots.has_value() && away_shots.has_value(); }
};

inline Outcome outcome_from_goals(int home_goals, int away_goals) {
    if (home_goals > away_goals) return Outcome::HomeWin;
    if (home_goals < away_goals) return Outcome::AwayWin;
    return Outcome::Draw;
}

const char* to_string(Outcome o);
const char* to_string(Market m);

}  // namespace shotcast
