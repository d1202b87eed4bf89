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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "shotcast/ingest.h"
#include "shotcast/types.h"
#include "test_support.h"

using namespace shotcast;
using shotcast::testing::TempDir;
using shotcast::testing::make_match;

TEST_CASE("date parses both source year formats") {
    auto d1 = Date::parse_dmy("14/08/10");
    REQUIRE(d1.has_value());
    CHECK(*d1 == Date{2010, 8, 14});

    auto d2 = Date::parse_dmy("14/08/2010");
    REQUIRE(d2.has_value());
    CHECK(*d2 == Date{2010, 8, 14});

    // Two-digit years pivot at 70.
    CHECK(Date::parse_dmy("01/01/95")->year == 1995);
    CHECK(Date::parse_dmy("01/01/05")->year == 2005);

    CHECK_FALSE(Date::parse_dmy("").has_value());
    CHECK_FALSE(Date::parse_dmy("2010-08-14").has_value());
    CHECK_FALSE(Date::parse_dmy("32/01/2010").has_value());
    CHECK_FALSE(Date::parse_dmy("29/02/2019").has_value());  // not a leap year
    CHECK(Date::parse_dmy("29/02/2020").has_value());
}

TEST_CASE("day_number round-trips and orders chronologically") {
    const Date epoch{1970, 1, 1};
    CHECK(epoch.day_number() == 0);
    const Date d{2019, 5, 12};
    CHECK(Date::from_day_number(d.day_number()) == d);
    CHECK(days_between(Date{2019, 5, 12}, Date{2019, 5, 22}) == 10);
    CHECK(Date{2018, 12, 31} < Date{2019, 1, 1});
    CHECK(d.to_string() == "2019-05-12");
}

TEST_CASE("outcome follows goals") {
    CHECK(outcome_from_goals(2, 1) == Outcome::HomeWin);
    CHECK(outcome_from_goals(0, 0) == Outcome::Draw);
    CHECK(outcome_from_goals(0, 3) == Outcome::AwayWin);
}

namespace {

const char* kCsvHeader =
    "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR,HS,AS,"
    "BbMxH,BbMxD,BbMxA,BbMx>2.5,BbMx<2.5\n";

std::string sample_csv() {
    std::string csv = kCsvHeader;
    csv += "E0,14/08/10,Aston Villa,West Ham,3,0,H,23,12,2.5,3.4,3.0,1.9,2.0\n";
    csv += "E0,14/08/10,Blackburn,Everton,1,0,H,9,12,3.2,3.3,2.5,2.2,1.8\n";
    csv += "E0,15/08/10,Liverpool,Arsenal,1,1,D,12,10,2.3,3.4,3.4,1.8,2.1\n";
    return csv;
}

}  // namespace

TEST_CASE("csv rows map to records in file order") {
    const auto result = parse_league_csv(sample_csv(), "E0", "1011");
    REQUIRE(result.records.size() == 3);
    CHECK(result.diagnostics.rows_total == 3);
    CHECK(result.diagnostics.rows_parsed == 3);
    CHECK(result.diagnostics.rows_skipped == 0);

    const auto& m = result.records[0];
    CHECK(m.league_id == "E0");
    CHECK(m.season_id == "1011");
    CHECK(m.date == Date{2010, 8, 14});
    CHECK(m.home_team == "Aston Villa");
    CHECK(m.away_team == "West Ham");
    CHECK(m.home_goals == 3);
    CHECK(m.away_goals == 0);
    CHECK(m.home_shots == 23);
    CHECK(m.away_shots == 12);
    CHECK(m.outcome == Outcome::HomeWin);
    CHECK(m.source_row == 0);
    REQUIRE(m.odds_1x2.has_value());
    CHECK(m.odds_1x2->home == 2.5);
    CHECK(m.odds_1x2->draw == 3.4);
    CHECK(m.odds_1x2->away == 3.0);
    REQUIRE(m.odds_ou25.has_value());
    CHECK(m.odds_ou25->over == 1.9);
    CHECK(m.odds_ou25->under == 2.0);

    CHECK(result.records[2].outcome == Outcome::Draw);
    CHECK(result.records[2].source_row == 2);
}

TEST_CASE("outcome recomputed from goals equals stored outcome") {
    const auto result = parse_league_csv(sample_csv(), "E0", "1011");
    for (const auto& m : result.records)
        CHECK(outcome_from_goals(m.home_goals, m.away_goals) == m.outcome);
}

TEST_CASE("missing optional columns leave shots and odds absent") {
    std::string csv = "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR\n";
    csv += "E0,14/08/10,Aston Villa,West Ham,0,0,D\n";
    const auto result = parse_league_csv(csv, "E0", "1011");
    REQUIRE(result.records.size() == 1);
    CHECK_FALSE(result.records[0].has_shots());
    CHECK_FALSE(result.records[0].odds_1x2.has_value());
    CHECK_FALSE(result.records[0].odds_ou25.has_value());
}

TEST_CASE("malformed header is fatal") {
    CHECK_THROWS_AS(parse_league_csv("Div,Date,HomeTeam\nE0,14/08/10,A\n", "E0", "1011"),
                    std::runtime_error);
    CHECK_THROWS_AS(parse_league_csv("", "E0", "1011"), std::runtime_error);
}

TEST_CASE("bad rows are skipped and tallied, never silently dropped") {
    std::string csv = kCsvHeader;
    csv += "E0,14/08/10,Aston Villa,West Ham,3,0,H,23,12,,,,,\n";
    csv += "E0,not-a-date,Blackburn,Everton,1,0,H,9,12,,,,,\n";   // bad date
    csv += "E0,15/08/10,,Everton,1,0,H,9,12,,,,,\n";              // missing team
    csv += "E0,15/08/10,Liverpool,Arsenal,x,1,D,12,10,,,,,\n";    // bad goals
    csv += "\n";                                                  // blank: not a row
    const auto result = parse_league_csv(csv, "E0", "1011");
    CHECK(result.records.size() == 1);
    CHECK(result.diagnostics.rows_total == 4);
    CHECK(result.diagnostics.rows_parsed == 1);
    CHECK(result.diagnostics.rows_skipped == 3);
    long tallied = 0;
    for (const auto& [reason, count] : result.diagnostics.skip_reasons) tallied += count;
    CHECK(tallied == 3);
}

TEST_CASE("odds legs at or below 1.0 are treated as absent and tallied") {
    std::string csv = kCsvHeader;
    csv += "E0,14/08/10,Aston Villa,West Ham,3,0,H,23,12,1.0,3.4,3.0,1.9,2.0\n";
    const auto result = parse_league_csv(csv, "E0", "1011");
    REQUIRE(result.records.size() == 1);
    CHECK_FALSE(result.records[0].odds_1x2.has_value());
    CHECK(result.records[0].odds_ou25.has_value());
    CHECK(result.diagnostics.invalid_odds_values >= 1);
}

TEST_CASE("bom crlf and quoted fields are handled") {
    std::string csv = "\xEF\xBB\xBF";
    csv += "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR\r\n";
    csv += "E0,14/08/10,\"Brighton, AL\",West Ham,1,2,A\r\n";
    const auto result = parse_league_csv(csv, "E0", "1011");
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].home_team == "Brighton, AL");
    CHECK(result.records[0].outcome == Outcome::AwayWin);
}

TEST_CASE("parsing is deterministic") {
    const auto a = parse_league_csv(sample_csv(), "E0", "1011");
    const auto b = parse_league_csv(sample_csv(), "E0", "1011");
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].home_team == b.records[i].home_team);
        CHECK(a.records[i].date == b.records[i].date);
    }
}

namespace {

std::vector<MatchRecord> season_fixture() {
    // Team A plays on days 1, 8, 15; first meetings have zero prior counts.
    std::vector<MatchRecord> ms;
    ms.push_back(make_match("L", "s1", Date{2020, 1, 1}, "A", "B", 1, 0, 10, 8, 0));
    ms.push_back(make_match("L", "s1", Date{2020, 1, 8}, "C", "A", 0, 0, 7, 9, 1));
    ms.push_back(make_match("L", "s1", Date{2020, 1, 15}, "A", "C", 2, 1, 11, 6, 2));
    ms.push_back(make_match("L", "s1", Date{2020, 1, 15}, "B", "D", 0, 1, 9, 9, 3));
    return ms;
}

}  // namespace

TEST_CASE("season index counts prior matches per team") {
    const auto ms = season_fixture();
    const auto index = build_season_index(ms);

    const auto c0 = index.lookup(ms[0]);
    REQUIRE(c0.has_value());
    CHECK(c0->home_prior == 0);  // A's 1st
    CHECK(c0->away_prior == 0);  // B's 1st

    const auto c1 = index.lookup(ms[1]);
    REQUIRE(c1.has_value());
    CHECK(c1->home_prior == 0);  // C's 1st
    CHECK(c1->away_prior == 1);  // A's 2nd

    const auto c2 = index.lookup(ms[2]);
    REQUIRE(c2.has_value());
    CHECK(c2->home_prior == 2);  // A's 3rd
    CHECK(c2->away_prior == 1);  // C's 2nd
}

TEST_CASE("shuffled input builds the same index as sorted input") {
    auto ms = season_fixture();
    const auto sorted_index = build_season_index(ms);

    std::mt19937 gen(42);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(ms.begin(), ms.end(), gen);
        const auto shuffled_index = build_season_index(ms);
        REQUIRE(shuffled_index.entries.size() == sorted_index.entries.size());
        for (const auto& [key, counts] : sorted_index.entries) {
            const auto it = shuffled_index.entries.find(key);
            REQUIRE(it != shuffled_index.entries.end());
            CHECK(it->second.home_prior == counts.home_prior);
            CHECK(it->second.away_prior == counts.away_prior);
        }
    }
}

TEST_CASE("burn-in is either side under the threshold") {
    const auto ms = season_fixture();
    const auto index = build_season_index(ms);
    // Third match of the home team with threshold 6: still burn-in.
    CHECK(is_burn_in(ms[2], index, 6));
    // Prior counts (2, 1) with threshold 2: away side still under.
    CHECK(is_burn_in(ms[2], index, 2));
    CHECK_FALSE(is_burn_in(ms[2], index, 1));
    CHECK(is_burn_in(ms[0], index, 1));

    // A match the index has never seen counts as burn-in.
    const auto stranger = make_match("L", "s9", Date{2021, 1, 1}, "X", "Y", 0, 0);
    CHECK(is_burn_in(stranger, index, 6));
}

TEST_CASE("seventh match of both sides is not burn-in at the default threshold") {
    std::vector<MatchRecord> ms;
    int row = 0;
    for (int k = 0; k < 6; ++k) {
        ms.push_back(make_match("L", "s1", Date{2020, 1, 1 + k}, "A", "B", 1, 0, 10, 8, row++));
    }
    ms.push_back(make_match("L", "s1", Date{2020, 1, 20}, "A", "B", 1, 0, 10, 8, row++));
    const auto index = build_season_index(ms);
    CHECK_FALSE(is_burn_in(ms[6], index));  // prior counts (6, 6)
    CHECK(is_burn_in(ms[5], index));        // prior counts (5, 5)
}

TEST_CASE("burn-in never comes back within a season") {
    // Once a team's prior count reaches the threshold it never decreases.
    std::vector<MatchRecord> ms;
    for (int k = 0; k < 10; ++k)
        ms.push_back(make_match("L", "s1", Date{2020, 1, 1 + k}, "A", "B", 1, 0, 10, 8, k));
    const auto index = build_season_index(ms);
    bool seen_regular = false;
    for (const auto& m : ms) {
        const bool burn = is_burn_in(m, index, 6);
        if (seen_regular) CHECK_FALSE(burn);
        if (!burn) seen_regular = true;
    }
    CHECK(seen_regular);
}

TEST_CASE("extract_odds returns market legs or absent") {
    auto m = make_match("L", "s1", Date{2020, 1, 1}, "A", "B", 1, 0);
    m.odds_1x2 = Odds1X2{2.5, 3.4, 3.0};
    const auto x12 = extract_odds(m, Market::Match1X2);
    REQUIRE(x12.has_value());
    CHECK(*x12 == std::vector<double>{2.5, 3.4, 3.0});
    CHECK_FALSE(extract_odds(m, Market::OverUnder25).has_value());

    m.odds_ou25 = OddsOU{1.9, 2.0};
    const auto ou = extract_odds(m, Market::OverUnder25);
    REQUIRE(ou.has_value());
    CHECK(*ou == std::vector<double>{1.9, 2.0});
}

TEST_CASE("dataset loader walks season directories and filters leagues") {
    TempDir dir("ingest");
    std::filesystem::create_directories(dir.path() / "1011");
    std::filesystem::create_directories(dir.path() / "1112");
    {
        std::ofstream out(dir.path() / "1011" / "E0.csv");
        out << sample_csv();
    }
    {
        std::ofstream out(dir.path() / "1011" / "D1.csv");
        out << kCsvHeader
            << "D1,14/08/10,Bayern,Dortmund,2,0,H,15,9,1.8,3.9,4.5,1.7,2.2\n";
    }
    {
        std::ofstream out(dir.path() / "1112" / "E0.csv");
        out << kCsvHeader
            << "E0,13/08/11,Liverpool,Sunderland,1,1,D,14,7,1.6,4.1,6.5,1.9,2.0\n";
    }

    const auto all = load_dataset(dir.str());
    CHECK(all.matches.size() == 5);
    CHECK(all.diagnostics.rows_parsed == 5);

    LoadOptions e0_only;
    e0_only.leagues = {"E0"};
    const auto e0 = load_dataset(dir.str(), e0_only);
    CHECK(e0.matches.size() == 4);
    for (const auto& m : e0.matches) CHECK(m.league_id == "E0");

    LoadOptions first_season;
    first_season.seasons = {"1011"};
    const auto s1 = load_dataset(dir.str(), first_season);
    CHECK(s1.matches.size() == 4);

    long per_league = static_cast<long>(e0.matches.size());
    LoadOptions d1_only;
    d1_only.leagues = {"D1"};
    per_league += static_cast<long>(load_dataset(dir.str(), d1_only).matches.size());
    CHECK(per_league == static_cast<long>(all.matches.size()));

    CHECK_THROWS_AS(load_dataset((dir.path() / "missing").string()), std::runtime_error);
}

TEST_CASE("canonical sorts are stable and keyed as documented") {
    auto ms = season_fixture();
    ms.push_back(make_match("A", "s1", Date{2020, 1, 8}, "P", "Q", 1, 0, 5, 5, 0));
    std::mt19937 gen(7);
    std::shuffle(ms.begin(), ms.end(), gen);

    auto by_league = ms;
    sort_matches(by_league);
    for (size_t i = 1; i < by_league.size(); ++i) {
        const auto key = [](const MatchRecord& m) {
            return std::make_tuple(m.league_id, m.season_id, m.date.day_number(),
                                   m.source_row);
        };
        CHECK(key(by_league[i - 1]) <= key(by_league[i]));
    }

    auto by_date = ms;
    sort_matches_by_date(by_date);
    for (size_t i = 1; i < by_date.size(); ++i)
        CHECK(by_date[i - 1].date <= by_date[i].date);
}
