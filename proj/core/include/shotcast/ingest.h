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

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "shotcast/types.h"

namespace shotcast {

// Per-file parse tally. Unparseable rows are skipped but never silently:
// every skip lands in `skip_reasons`.
struct ParseDiagnostics {
    long rows_total = 0;
    long rows_parsed = 0;
    long rows_skipped = 0;
    long invalid_odds_values = 0;   // odds legs <= 1.0, treated as absent
    long invalid_shot_values = 0;   // negative/garbled shot counts, treated as absent
    std::map<std::string, long> skip_reasons;

    void merge(const ParseDiagnostics& other);
};

struct ParseResult {
    std::vector<MatchRecord> records;  // file order
    ParseDiagnostics diagnostics;
};

/// Parses one league-season CSV (football-data.co.uk layout). Requires a
/// header with at least Date, HomeTeam, AwayTeam, FTHG, FTAG; throws
/// std::runtime_error on a malformed header. Handles a UTF-8 BOM, CRLF
/// line endings, and both DD/MM/YY and DD/MM/YYYY dates.
ParseResult parse_league_csv(const std::string& raw, const std::string& league_id,
                             const std::string& season_id);

// Burn-in bookkeeping: how many earlier same-season matches each side had
// played at the time of each match. Matches are keyed by
// (league, season, source_row) so the index is stable under input shuffles.
struct SeasonIndex {
    struct PriorCounts {
        int home_prior = 0;
        int away_prior = 0;
    };
    std::map<std::tuple<std::string, std::string, int>, PriorCounts> entries;
    // Per (league, season, team): source rows in chronological order.
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<int>> team_matches;

    std::optional<PriorCounts> lookup(const MatchRecord& match) const;
};

/// Chronological order within each season; ties on date broken by file order.
SeasonIndex build_season_index(const std::vector<MatchRecord>& matches);

/// True iff either side had played fewer than `threshold` earlier matches in
/// the season. A match absent from the index counts as burn-in.
bool is_burn_in(const MatchRecord& match, const SeasonIndex& index, int threshold = 6);

/// Maximum-across-bookmakers odds for the market, absent if any leg is
/// missing. Legs <= 1.0 were already dropped at parse time.
std::optional<std::vector<double>> extract_odds(const MatchRecord& record, Market market);

struct LoadOptions {
    std::vector<std::string> leagues;  // empty = all
    std::vector<std::string> seasons;  // empty = all
};

struct Dataset {
    std::vector<MatchRecord> matches;  // sorted by (league, season, date, file order)
    ParseDiagnostics diagnostics;
};

/// Walks <data_dir>/<season>/<DIV>.csv. Directory name supplies the season
/// id, file stem the league id. Deterministic iteration order.
Dataset load_dataset(const std::string& data_dir, const LoadOptions& options = {});

/// Sorts matches into the canonical processing order:
/// (league, season, date, source row).
void sort_matches(std::vector<MatchRecord>& matches);

/// Global chronological order used by the backtest: date first, then league,
/// season, file order. All matches on one date share one information set.
void sort_matches_by_date(std::vector<MatchRecord>& matches);

}  // namespace shotcast
