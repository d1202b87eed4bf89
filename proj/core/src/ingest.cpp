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
#include "shotcast/ingest.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shotcast {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::optional<int> parse_int(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return value;
}

std::optional<double> parse_double(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) return std::nullopt;
    return value;
}

// Header lookup tolerating absent columns; returns field or empty string.
class Row {
  public:
    Row(const std::map<std::string, size_t>& columns, const std::vector<std::string>& fields)
        : columns_(columns), fields_(fields) {}

    std::string get(const std::string& name) const {
        const auto it = columns_.find(name);
        if (it == columns_.end() || it->second >= fields_.size()) return {};
        return trim(fields_[it->second]);
    }

  private:
    const std::map<std::string, size_t>& columns_;
    const std::vector<std::string>& fields_;
};

// One leg of a maximum-odds market: > 1.0 or it does not exist.
std::optional<double> odds_leg(const Row& row, const std::string& primary,
                               const std::string& fallback, ParseDiagnostics& diag) {
    for (const std::string* name : {&primary, &fallback}) {
        if (name->empty()) continue;
        const std::string raw = row.get(*name);
        if (raw.empty()) continue;
        const auto value = parse_double(raw);
        if (!value || !(*value > 1.0)) {
            ++diag.invalid_odds_values;
            return std::nullopt;
        }
        return value;
    }
    return std::nullopt;
}

bool version_less(const MatchRecord& a, const MatchRecord& b) {
    return std::tie(a.league_id, a.season_id, a.date, a.source_row) <
           std::tie(b.league_id, b.season_id, b.date, b.source_row);
}

bool date_less(const MatchRecord& a, const MatchRecord& b) {
    return std::tie(a.date, a.league_id, a.season_id, a.source_row) <
           std::tie(b.date, b.league_id, b.season_id, b.source_row);
}

}  // namespace

void ParseDiagnostics::merge(const ParseDiagnostics& other) {
    rows_total += other.rows_total;
    rows_parsed += other.rows_parsed;
    rows_skipped += other.rows_skipped;
    invalid_odds_values += other.invalid_odds_values;
    invalid_shot_values += other.invalid_shot_values;
    for (const auto& [reason, count] : other.skip_reasons) skip_reasons[reason] += count;
}

ParseResult parse_league_csv(const std::string& raw, const std::string& league_id,
                             const std::string& season_id) {
    ParseResult result;
    std::istringstream in(raw);
    std::string line;

    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + league_id);
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::map<std::string, size_t> columns;
    {
        const auto names = split_csv_line(line);
        for (size_t i = 0; i < names.size(); ++i) {
            const std::string name = trim(names[i]);
            if (!name.empty() && !columns.count(name)) columns[name] = i;
        }
    }
    for (const char* required : {"Date", "HomeTeam", "AwayTeam", "FTHG", "FTAG"}) {
        if (!columns.count(required))
            throw std::runtime_error("malformed header in " + league_id + "/" + season_id +
                                     ": missing column " + required);
    }

    auto skip = [&](const std::string& reason) {
        ++result.diagnostics.rows_skipped;
        ++result.diagnostics.skip_reasons[reason];
    };

    int source_row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // Exports pad with blank or comma-only lines; those carry no data.
        if (line.find_first_not_of(", \t") == std::string::npos) continue;
        ++result.diagnostics.rows_total;

        const auto fields = split_csv_line(line);
        const Row row(columns, fields);

        MatchRecord rec;
        rec.league_id = league_id;
        rec.season_id = season_id;
        rec.home_team = row.get("HomeTeam");
        rec.away_team = row.get("AwayTeam");
        rec.source_row = source_row;

        if (rec.home_team.empty() || rec.away_team.empty()) {
            skip("missing_team");
            continue;
        }
        const auto date = Date::parse_dmy(row.get("Date"));
        if (!date) {
            skip("bad_date");
            continue;
        }
        rec.date = *date;

        const auto fthg = parse_int(row.get("FTHG"));
        const auto ftag = parse_int(row.get("FTAG"));
        if (!fthg || !ftag || *fthg < 0 || *ftag < 0) {
            skip("bad_goals");
            continue;
        }
        rec.home_goals = *fthg;
        rec.away_goals = *ftag;
        rec.outcome = outcome_from_goals(rec.home_goals, rec.away_goals);

        const std::string ftr = row.get("FTR");
        if (!ftr.empty() && ftr != to_string(rec.outcome)) {
            skip("ftr_conflict");
            continue;
        }

        const auto hs = parse_int(row.get("HS"));
        const auto as = parse_int(row.get("AS"));
        if (hs && as) {
            if (*hs < 0 || *as < 0) {
                ++result.diagnostics.invalid_shot_values;
            } else {
                rec.home_shots = *hs;
                rec.away_shots = *as;
            }
        } else if (!row.get("HS").empty() || !row.get("AS").empty()) {
            if (!hs != !as) ++result.diagnostics.invalid_shot_values;
        }

        // Maximum odds across bookmakers; BetBrain columns with the newer
        // market-wide maxima as fallback.
        const auto h = odds_leg(row, "BbMxH", "MaxH", result.diagnostics);
        const auto d = odds_leg(row, "BbMxD", "MaxD", result.diagnostics);
        const auto a = odds_leg(row, "BbMxA", "MaxA", result.diagnostics);
        if (h && d && a) rec.odds_1x2 = Odds1X2{*h, *d, *a};
        const auto over = odds_leg(row, "BbMx>2.5", "Max>2.5", result.diagnostics);
        const auto under = odds_leg(row, "BbMx<2.5", "Max<2.5", result.diagnostics);
        if (over && under) rec.odds_ou25 = OddsOU{*over, *under};

        ++result.diagnostics.rows_parsed;
        result.records.push_back(std::move(rec));
        ++source_row;
    }
    return result;
}

std::optional<SeasonIndex::PriorCounts> SeasonIndex::lookup(const MatchRecord& match) const {
    const auto it = entries.find({match.league_id, match.season_id, match.source_row});
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

SeasonIndex build_season_index(const std::vector<MatchRecord>& matches) {
    std::vector<const MatchRecord*> ordered;
    ordered.reserve(matches.size());
    for (const auto& m : matches) ordered.push_back(&m);
    std::sort(ordered.begin(), ordered.end(),
              [](const MatchRecord* a, const MatchRecord* b) { return version_less(*a, *b); });

    SeasonIndex index;
    std::map<std::tuple<std::string, std::string, std::string>, int> played;
    for (const MatchRecord* m : ordered) {
        const auto home_key = std::make_tuple(m->league_id, m->season_id, m->home_team);
        const auto away_key = std::make_tuple(m->league_id, m->season_id, m->away_team);
        SeasonIndex::PriorCounts counts;
        counts.home_prior = played[home_key];
        counts.away_prior = played[away_key];
        index.entries[{m->league_id, m->season_id, m->source_row}] = counts;
        index.team_matches[home_key].push_back(m->source_row);
        index.team_matches[away_key].push_back(m->source_row);
        ++played[home_key];
        ++played[away_key];
    }
    return index;
}

bool is_burn_in(const MatchRecord& match, const SeasonIndex& index, int threshold) {
    const auto counts = index.lookup(match);
    if (!counts) return true;
    return counts->home_prior < threshold || counts->away_prior < threshold;
}

std::optional<std::vector<double>> extract_odds(const MatchRecord& record, Market market) {
    switch (market) {
        case Market::Match1X2:
            if (!record.odds_1x2) return std::nullopt;
            return std::vector<double>{record.odds_1x2->home, record.odds_1x2->draw,
                                       record.odds_1x2->away};
        case Market::OverUnder25:
            if (!record.odds_ou25) return std::nullopt;
            return std::vector<double>{record.odds_ou25->over, record.odds_ou25->under};
    }
    return std::nullopt;
}

Dataset load_dataset(const std::string& data_dir, const LoadOptions& options) {
    namespace fs = std::filesystem;
    Dataset dataset;
    if (!fs::is_directory(data_dir))
        throw std::runtime_error("data directory not found: " + data_dir);

    auto wanted = [](const std::vector<std::string>& allow, const std::string& id) {
        return allow.empty() || std::find(allow.begin(), allow.end(), id) != allow.end();
    };

    std::vector<fs::path> season_dirs;
    for (const auto& entry : fs::directory_iterator(data_dir))
        if (entry.is_directory()) season_dirs.push_back(entry.path());
    std::sort(season_dirs.begin(), season_dirs.end());

    for (const auto& season_dir : season_dirs) {
        const std::string season_id = season_dir.filename().string();
        if (!wanted(options.seasons, season_id)) continue;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(season_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            const std::string league_id = file.stem().string();
            if (!wanted(options.leagues, league_id)) continue;
            std::ifstream in(file, std::ios::binary);
            std::ostringstream buffer;
            buffer << in.rdbuf();
            auto parsed = parse_league_csv(buffer.str(), league_id, season_id);
            dataset.diagnostics.merge(parsed.diagnostics);
            for (auto& rec : parsed.records) dataset.matches.push_back(std::move(rec));
        }
    }
    sort_matches(dataset.matches);
    return dataset;
}

void sort_matches(std::vector<MatchRecord>& matches) {
    std::sort(matches.begin(), matches.end(), version_less);
}

void sort_matches_by_date(std::vector<MatchRecord>& matches) {
    std::sort(matches.begin(), matches.end(), date_less);
}

}  // namespace shotcast
