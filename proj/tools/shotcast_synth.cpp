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
//
// Writes a synthetic dataset in the source CSV layout so the pipeline can be
// exercised end to end without downloaded data. Shots, goals, and odds come
// from a known ground-truth process, one league per S<i> division code.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shotcast/sim.h"

using namespace shotcast;

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic league dataset in the source CSV layout"};
    std::string out_dir;
    int num_leagues = 1;
    SynthLeagueConfig base;
    bool no_odds = false;
    bool no_shots = false;

    app.add_option("--out,-o", out_dir, "Output dataset root")->required();
    app.add_option("--num-leagues", num_leagues, "League count, division codes S0..")
        ->check(CLI::PositiveNumber);
    app.add_option("--teams", base.num_teams, "Teams per league (even)")
        ->check(CLI::Range(2, 40));
    app.add_option("--seasons", base.num_seasons, "Seasons per league")
        ->check(CLI::PositiveNumber);
    app.add_option("--start-year", base.start_year, "First season's starting year");
    app.add_option("--mean-shots", base.mean_shots, "League mean shots per team per match")
        ->check(CLI::PositiveNumber);
    app.add_option("--home-shot-boost", base.home_shot_boost,
                   "Multiplier on home shot intensity");
    app.add_option("--shot-spread", base.shot_spread,
                   "Spread of log attack/defence shot factors");
    app.add_option("--conversion-c", base.conversion_c, "Conversion log-odds constant");
    app.add_option("--conversion-h", base.conversion_h, "Conversion home advantage");
    app.add_option("--conversion-spread", base.conversion_spread,
                   "Spread of conversion attack/defence ratings");
    app.add_option("--odds-margin", base.odds_margin, "Bookmaker margin on fair odds");
    app.add_option("--seed", base.seed, "Base seed; league i uses seed + i");
    app.add_flag("--no-odds", no_odds, "Omit the odds columns");
    app.add_flag("--no-shots", no_shots, "Omit the shot columns");
    CLI11_PARSE(app, argc, argv);

    base.with_odds = !no_odds;
    base.with_shots = !no_shots;

    std::vector<MatchRecord> matches;
    for (int i = 0; i < num_leagues; ++i) {
        SynthLeagueConfig config = base;
        config.league_id = "S" + std::to_string(i);
        config.seed = base.seed + static_cast<std::uint64_t>(i);
        const SynthLeague league = simulate_league(config);
        matches.insert(matches.end(), league.matches.begin(), league.matches.end());
    }
    try {
        write_dataset_csv(matches, out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    std::printf("wrote %zu matches across %d league(s) x %d season(s) to %s\n",
                matches.size(), num_leagues, base.num_seasons, out_dir.c_str());
    return 0;
}
