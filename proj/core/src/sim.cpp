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
#include "shotcast/sim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "shotcast/rng.h"
#include "shotcast/serialize.h"

namespace shotcast {

namespace {

constexpr int kGoalCap = 40;  // Poisson tail beyond this is < 1e-12 here

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::vector<double> poisson_pmf(double mu) {
    std::vector<double> pmf(kGoalCap + 1);
    pmf[0] = std::exp(-mu);
    for (int k = 1; k <= kGoalCap; ++k) pmf[k] = pmf[k - 1] * mu / k;
    return pmf;
}

std::string season_label(int first_year) {
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "%02d%02d", first_year % 100,
                  (first_year + 1) % 100);
    return buffer;
}

double margin_odds(double prob, double margin) {
    return std::max(1.0 / (prob * (1.0 + margin)), 1.01);
}

}  // namespace

std::vector<std::vector<std::pair<int, int>>> round_robin_schedule(int num_teams) {
    if (num_teams < 2 || num_teams % 2 != 0)
        throw std::invalid_argument("schedule needs an even team count");
    std::vector<int> slots(num_teams);
    for (int i = 0; i < num_teams; ++i) slots[i] = i;

    std::vector<std::vector<std::pair<int, int>>> rounds;
    for (int r = 0; r < num_teams - 1; ++r) {
        std::vector<std::pair<int, int>> round;
        for (int k = 0; k < num_teams / 2; ++k) {
            const int a = slots[k];
            const int b = slots[num_teams - 1 - k];
            if ((r + k) % 2 == 0)
                round.emplace_back(a, b);
            else
                round.emplace_back(b, a);
        }
        rounds.push_back(std::move(round));
        // Circle method: hold slot 0, rotate the rest clockwise.
        std::rotate(slots.begin() + 1, slots.end() - 1, slots.end());
    }
    const int first_half = static_cast<int>(rounds.size());
    for (int r = 0; r < first_half; ++r) {
        std::vector<std::pair<int, int>> swapped;
        for (const auto& [home, away] : rounds[r]) swapped.emplace_back(away, home);
        rounds.push_back(std::move(swapped));
    }
    return rounds;
}

SynthLeague simulate_league(const SynthLeagueConfig& config) {
    SynthLeague league;
    Rng rng(config.seed);
    const int T = config.num_teams;

    for (int i = 0; i < T; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "%s_T%02d", config.league_id.c_str(), i);
        league.teams.push_back(name);
    }

    league.true_attack.resize(T);
    league.true_defence.resize(T);
    for (int i = 0; i < T; ++i) {
        league.true_attack[i] = rng.normal() * config.conversion_spread;
        league.true_defence[i] = rng.normal() * config.conversion_spread;
    }
    auto center = [](std::vector<double>& v) {
        double mean = 0.0;
        for (const double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        for (double& x : v) x -= mean;
    };
    center(league.true_attack);
    center(league.true_defence);
    league.true_c = config.conversion_c;
    league.true_h = config.conversion_h;

    league.shot_attack.resize(T);
    league.shot_defence.resize(T);
    for (int i = 0; i < T; ++i) {
        league.shot_attack[i] = std::exp(rng.normal() * config.shot_spread);
        league.shot_defence[i] = std::exp(rng.normal() * config.shot_spread);
    }

    const auto schedule = round_robin_schedule(T);
    for (int season = 0; season < config.num_seasons; ++season) {
        const int year = config.start_year + season;
        const Date season_start{year, 8, 15};
        const std::string season_id = season_label(year);
        int source_row = 0;
        for (size_t round = 0; round < schedule.size(); ++round) {
            const Date date = Date::from_day_number(season_start.day_number() +
                                                    7 * static_cast<int>(round));
            for (const auto& [i, j] : schedule[round]) {
                const double mu_h = config.mean_shots * config.home_shot_boost *
                                    league.shot_attack[i] * league.shot_defence[j];
                const double mu_a =
                    config.mean_shots * league.shot_attack[j] * league.shot_defence[i];
                const double p_h = logistic(config.conversion_c + config.conversion_h +
                                            (league.true_attack[i] + league.true_defence[j]) / 2.0);
                const double p_a = logistic(config.conversion_c - config.conversion_h +
                                            (league.true_attack[j] + league.true_defence[i]) / 2.0);
                const int shots_h = rng.poisson(mu_h);
                const int shots_a = rng.poisson(mu_a);
                const int goals_h = rng.binomial(shots_h, p_h);
                const int goals_a = rng.binomial(shots_a, p_a);

                MatchRecord rec;
                rec.league_id = config.league_id;
                rec.season_id = season_id;
                rec.date = date;
                rec.home_team = league.teams[i];
                rec.away_team = league.teams[j];
                rec.home_goals = goals_h;
                rec.away_goals = goals_a;
                rec.outcome = outcome_from_goals(goals_h, goals_a);
                rec.source_row = source_row++;
                if (config.with_shots) {
                    rec.home_shots = shots_h;
                    rec.away_shots = shots_a;
                }
                if (config.with_odds) {
                    // Thinned Poisson shots give exactly Poisson goals, so
                    // fair odds have a closed form.
                    const OutcomeProbs probs =
                        poisson_outcome_probs(mu_h * p_h, mu_a * p_a);
                    rec.odds_1x2 = Odds1X2{margin_odds(probs.home, config.odds_margin),
                                           margin_odds(probs.draw, config.odds_margin),
                                           margin_odds(probs.away, config.odds_margin)};
                    const double over = poisson_over25(mu_h * p_h + mu_a * p_a);
                    rec.odds_ou25 = OddsOU{margin_odds(over, config.odds_margin),
                                           margin_odds(1.0 - over, config.odds_margin)};
                }
                league.matches.push_back(std::move(rec));
            }
        }
    }
    return league;
}

std::vector<MatchRecord> simulate_gap_league(const SynthLeagueConfig& config,
                                             const GapParams& true_params,
                                             double noise_sd) {
    Rng rng(config.seed);
    const int T = config.num_teams;
    std::vector<std::string> teams;
    for (int i = 0; i < T; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "%s_T%02d", config.league_id.c_str(), i);
        teams.push_back(name);
    }

    GapState truth;
    truth.league_id = config.league_id;
    truth.params = true_params;
    truth.init_fallback = config.mean_shots;
    // Spread the true ratings so the dynamics have something to track.
    for (const auto& team : teams) {
        GapTeamRatings& r = ensure_team(truth, team);
        r.home_attack = config.mean_shots * std::exp(rng.normal() * config.shot_spread);
        r.home_defence = config.mean_shots * std::exp(rng.normal() * config.shot_spread);
        r.away_attack = config.mean_shots * std::exp(rng.normal() * config.shot_spread);
        r.away_defence = config.mean_shots * std::exp(rng.normal() * config.shot_spread);
    }

    std::vector<MatchRecord> matches;
    const auto schedule = round_robin_schedule(T);
    for (int season = 0; season < config.num_seasons; ++season) {
        const int year = config.start_year + season;
        const Date season_start{year, 8, 15};
        const std::string season_id = season_label(year);
        int source_row = 0;
        for (size_t round = 0; round < schedule.size(); ++round) {
            const Date date = Date::from_day_number(season_start.day_number() +
                                                    7 * static_cast<int>(round));
            for (const auto& [i, j] : schedule[round]) {
                const ShotPrediction pred = predict_shots(truth, teams[i], teams[j]);
                const int shots_h = std::max(
                    0, static_cast<int>(std::lround(pred.home + rng.normal() * noise_sd)));
                const int shots_a = std::max(
                    0, static_cast<int>(std::lround(pred.away + rng.normal() * noise_sd)));

                MatchRecord rec;
                rec.league_id = config.league_id;
                rec.season_id = season_id;
                rec.date = date;
                rec.home_team = teams[i];
                rec.away_team = teams[j];
                rec.home_shots = shots_h;
                rec.away_shots = shots_a;
                rec.outcome = Outcome::Draw;
                rec.source_row = source_row++;
                update_ratings(truth, rec);
                matches.push_back(std::move(rec));
            }
        }
    }
    return matches;
}

OutcomeProbs poisson_outcome_probs(double mu_home, double mu_away) {
    const auto home = poisson_pmf(mu_home);
    const auto away = poisson_pmf(mu_away);
    OutcomeProbs probs{0.0, 0.0, 0.0};
    for (int gh = 0; gh <= kGoalCap; ++gh) {
        for (int ga = 0; ga <= kGoalCap; ++ga) {
            const double joint = home[gh] * away[ga];
            if (gh > ga)
                probs.home += joint;
            else if (gh == ga)
                probs.draw += joint;
            else
                probs.away += joint;
        }
    }
    const double total = probs.home + probs.draw + probs.away;
    probs.home /= total;
    probs.draw /= total;
    probs.away /= total;
    return probs;
}

double poisson_over25(double mu_total) {
    const double p0 = std::exp(-mu_total);
    const double p1 = p0 * mu_total;
    const double p2 = p1 * mu_total / 2.0;
    return 1.0 - (p0 + p1 + p2);
}

std::string to_league_csv(const std::vector<MatchRecord>& matches) {
    std::string out =
        "Div,Date,HomeTeam,AwayTeam,FTHG,FTAG,FTR,HS,AS,"
        "BbMxH,BbMxD,BbMxA,BbMx>2.5,BbMx<2.5\n";
    for (const auto& m : matches) {
        char date[16];
        std::snprintf(date, sizeof(date), "%02d/%02d/%04d", m.date.day, m.date.month,
                      m.date.year);
        out += m.league_id + ',' + date + ',' + m.home_team + ',' + m.away_team + ',' +
               std::to_string(m.home_goals) + ',' + std::to_string(m.away_goals) + ',' +
               to_string(m.outcome) + ',';
        if (m.has_shots())
            out += std::to_string(*m.home_shots) + ',' + std::to_string(*m.away_shots);
        else
            out += ",";
        out += ',';
        if (m.odds_1x2)
            out += round9(m.odds_1x2->home) + ',' + round9(m.odds_1x2->draw) + ',' +
                   round9(m.odds_1x2->away);
        else
            out += ",,";
        out += ',';
        if (m.odds_ou25)
            out += round9(m.odds_ou25->over) + ',' + round9(m.odds_ou25->under);
        else
            out += ",";
        out += '\n';
    }
    return out;
}

void write_dataset_csv(const std::vector<MatchRecord>& matches,
                       const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::map<std::pair<std::string, std::string>, std::vector<MatchRecord>> groups;
    for (const auto& m : matches) groups[{m.season_id, m.league_id}].push_back(m);
    for (auto& [key, group] : groups) {
        std::sort(group.begin(), group.end(),
                  [](const MatchRecord& a, const MatchRecord& b) {
                      return a.source_row < b.source_row;
                  });
        const fs::path dir = fs::path(out_dir) / key.first;
        fs::create_directories(dir);
        std::ofstream out(dir / (key.second + ".csv"), std::ios::binary);
        out << to_league_csv(group);
    }
}

}  // namespace shotcast
