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
#include "shotcast/serialize.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace shotcast {

namespace {

using nlohmann::json;

json date_to_json(const Date& date) { return date.to_string(); }

Date date_from_json(const json& j) {
    int y = 0;
    int m = 0;
    int d = 0;
    const std::string s = j.get<std::string>();
    if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
        throw std::runtime_error("bad date in JSON: " + s);
    return Date{y, m, d};
}

// JSON has no infinity literal; an unweighted half-life is stored by name.
json half_life_to_json(double h) {
    if (std::isinf(h)) return "inf";
    return h;
}

double half_life_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw std::runtime_error("bad half_life in JSON");
    }
    return j.get<double>();
}

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("malformed JSON");
    return j;
}

}  // namespace

std::string round9(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

std::string to_json(const GapState& state) {
    json teams = json::object();
    for (const auto& [name, r] : state.teams) {
        teams[name] = {{"home_attack", r.home_attack},
                       {"home_defence", r.home_defence},
                       {"away_attack", r.away_attack},
                       {"away_defence", r.away_defence}};
    }
    const json j = {{"league_id", state.league_id},
                    {"params",
                     {{"lambda", state.params.lambda},
                      {"phi1", state.params.phi1},
                      {"phi2", state.params.phi2}}},
                    {"teams", teams},
                    {"shot_sum", state.shot_sum},
                    {"shot_count", state.shot_count},
                    {"init_fallback", state.init_fallback}};
    return j.dump(2);
}

GapState gap_state_from_json(const std::string& text) {
    try {
        const json j = parse_text(text);
        GapState state;
        state.league_id = j.at("league_id").get<std::string>();
        const json& p = j.at("params");
        state.params.lambda = p.at("lambda").get<double>();
        state.params.phi1 = p.at("phi1").get<double>();
        state.params.phi2 = p.at("phi2").get<double>();
        for (const auto& [name, r] : j.at("teams").items()) {
            GapTeamRatings ratings;
            ratings.home_attack = r.at("home_attack").get<double>();
            ratings.home_defence = r.at("home_defence").get<double>();
            ratings.away_attack = r.at("away_attack").get<double>();
            ratings.away_defence = r.at("away_defence").get<double>();
            state.teams.emplace(name, ratings);
        }
        state.shot_sum = j.at("shot_sum").get<double>();
        state.shot_count = j.at("shot_count").get<long>();
        state.init_fallback = j.at("init_fallback").get<double>();
        return state;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("bad GapState JSON: ") + e.what());
    }
}

std::string to_json(const ShotModelParams& params) {
    const json j = {{"league_id", params.league_id},
                    {"as_of_date", date_to_json(params.as_of_date)},
                    {"half_life_days", half_life_to_json(params.half_life_days)},
                    {"c", params.c},
                    {"h", params.h},
                    {"teams", params.team_order},
                    {"attack", params.attack},
                    {"defence", params.defence}};
    return j.dump(2);
}

ShotModelParams shot_model_from_json(const std::string& text) {
    try {
        const json j = parse_text(text);
        ShotModelParams params;
        params.league_id = j.at("league_id").get<std::string>();
        params.as_of_date = date_from_json(j.at("as_of_date"));
        params.half_life_days = half_life_from_json(j.at("half_life_days"));
        params.c = j.at("c").get<double>();
        params.h = j.at("h").get<double>();
        params.team_order = j.at("teams").get<std::vector<std::string>>();
        params.attack = j.at("attack").get<std::vector<double>>();
        params.defence = j.at("defence").get<std::vector<double>>();
        if (params.attack.size() != params.team_order.size() ||
            params.defence.size() != params.team_order.size())
            throw std::runtime_error("rating vectors do not match team list");
        return params;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("bad ShotModelParams JSON: ") + e.what());
    }
}

std::string to_json(const ParseDiagnostics& diagnostics) {
    const json j = {{"rows_total", diagnostics.rows_total},
                    {"rows_parsed", diagnostics.rows_parsed},
                    {"rows_skipped", diagnostics.rows_skipped},
                    {"invalid_odds_values", diagnostics.invalid_odds_values},
                    {"invalid_shot_values", diagnostics.invalid_shot_values},
                    {"skip_reasons", diagnostics.skip_reasons}};
    return j.dump(2);
}

}  // namespace shotcast
