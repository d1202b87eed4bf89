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

#include <cstdint>
#include <string>
#include <vector>

#include "shotcast/gap.h"
#include "shotcast/outcome.h"
#include "shotcast/types.h"

namespace shotcast {

// Ground-truth league generator: shots are Poisson with per-team attack and
// defence factors, goals are binomial per shot with logistic conversion
// probabilities, odds are fair closed-form probabilities plus a margin.
struct SynthLeagueConfig {
    std::string league_id = "S0";
    int num_teams = 8;       // even
    int num_seasons = 3;
    int start_year = 2015;
    double mean_shots = 12.0;
    double home_shot_boost = 1.1;   // multiplier on home shot intensity
    double shot_spread = 0.12;      // sd of log attack/defence shot factors
    double conversion_c = -2.0;     // conversion log-odds constant
    double conversion_h = 0.1;      // conversion home advantage
    double conversion_spread = 0.3; // sd of conversion attack/defence ratings
    double odds_margin = 0.02;      // bookmaker margin applied to fair odds
    bool with_odds = true;
    bool with_shots = true;
    std::uint64_t seed = 1;
};

struct SynthLeague {
    std::vector<MatchRecord> matches;  // chronological
    std::vector<std::string> teams;
    // Conversion truth (exactly centered, as the fit reports it).
    std::vector<double> true_attack;
    std::vector<double> true_defence;
    double true_c = 0.0;
    double true_h = 0.0;
    // Shot-process truth.
    std::vector<double> shot_attack;   // multiplicative attack factors
    std::vector<double> shot_defence;  // multiplicative defence factors
};

/// Double round-robin fixtures for an even team count: rounds of disjoint
/// (home, away) index pairs; the second half swaps venues.
std::vector<std::vector<std::pair<int, int>>> round_robin_schedule(int num_teams);

SynthLeague simulate_league(const SynthLeagueConfig& config);

/// League whose shot counts follow the given update dynamics with additive
/// noise, for parameter-recovery fixtures. Goals/odds are left empty.
std::vector<MatchRecord> simulate_gap_league(const SynthLeagueConfig& config,
                                             const GapParams& true_params,
                                             double noise_sd);

/// Exact outcome probabilities when home and away goals are independent
/// Poisson with the given means.
OutcomeProbs poisson_outcome_probs(double mu_home, double mu_away);

/// P(home + away goals > 2.5) for a Poisson total.
double poisson_over25(double mu_total);

/// One league-season in the source CSV layout (Div, Date, ..., BbMx<2.5).
std::string to_league_csv(const std::vector<MatchRecord>& matches);

/// Writes <out_dir>/<season>/<league>.csv for every season present.
void write_dataset_csv(const std::vector<MatchRecord>& matches,
                       const std::string& out_dir);

}  // namespace shotcast
