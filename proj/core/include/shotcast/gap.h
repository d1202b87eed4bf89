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
#include <string>
#include <vector>

#include "shotcast/types.h"

namespace shotcast {

// Four shot ratings per team: expected shots taken (attack) and conceded
// (defence), kept separately for home and away matches. Never negative.
struct GapTeamRatings {
    double home_attack = 0.0;
    double home_defence = 0.0;
    double away_attack = 0.0;
    double away_defence = 0.0;
};

struct GapParams {
    double lambda = 0.1;  // overall per-match influence, > 0
    double phi1 = 0.7;    // weight of a home match on the home ratings, in (0,1)
    double phi2 = 0.7;    // weight of an away match on the away ratings, in (0,1)
};

// Running per-league rating state. New teams start at the league's running
// mean shots per team per match so their first prediction is climatological;
// `init_fallback` covers a league with no history yet.
struct GapState {
    std::string league_id;
    GapParams params;
    std::map<std::string, GapTeamRatings> teams;
    double shot_sum = 0.0;
    long shot_count = 0;
    double init_fallback = 12.0;

    double init_value() const {
        return shot_count > 0 ? shot_sum / shot_count : init_fallback;
    }
};

struct ShotPrediction {
    double home = 0.0;
    double away = 0.0;
};

/// Inserts the team at the current initialization value if absent.
GapTeamRatings& ensure_team(GapState& state, const std::string& team);

/// shat_h = (home attack of i + away defence of j) / 2,
/// shat_a = (away attack of j + home defence of i) / 2.
/// Unknown teams are initialized, never an error.
ShotPrediction predict_shots(GapState& state, const std::string& home_team,
                             const std::string& away_team);

/// Applies both teams' four-rating updates from one match. All right-hand
/// sides use pre-match ratings; every new rating is clamped at 0. A match
/// without shot data leaves the state unchanged.
void update_ratings(GapState& state, const MatchRecord& match);

/// Mean absolute shot-prediction error of a fresh sequential pass:
/// f = (1/N) sum(|S_h - shat_h| + |S_a - shat_a|) over matches with shots.
/// `init` seeds ratings while the league has no shot history. Throws
/// std::invalid_argument when no match has shot data.
double mae_objective(const GapParams& params, const std::vector<MatchRecord>& matches,
                     double init = 12.0);

struct GapFitResult {
    GapParams params;
    double objective = 0.0;
    bool converged = true;
    bool used_defaults = false;  // too little data to fit
};

/// Derivative-free fit of (lambda, phi1, phi2) from (0.1, 0.5, 0.5); the box
/// constraints are enforced by an unconstrained log/logit transform. Fewer
/// than 100 shot-data matches returns the defaults untouched.
GapFitResult fit_gap_params(const std::vector<MatchRecord>& matches, double init = 12.0);

}  // namespace shotcast
