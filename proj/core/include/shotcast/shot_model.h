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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shotcast/types.h"

namespace shotcast {

// Per-league shot-conversion model: log-odds attack/defence rating per team
// plus a constant and a home-advantage term, with half-life time weighting.
struct ShotModelParams {
    std::string league_id;
    std::vector<std::string> team_order;
    std::vector<double> attack;   // sums to 0 across teams
    std::vector<double> defence;  // sums to 0 across teams
    double c = 0.0;
    double h = 0.0;
    double half_life_days = 60.0;
    Date as_of_date{};

    std::optional<int> team_index(const std::string& team) const;
};

// One side of one match, binomially aggregated: `goals` successes out of
// `shots` attempts by attack_team against defence_team.
struct ShotOutcomeSample {
    int attack_team = -1;   // index into team_order
    int defence_team = -1;  // index into team_order
    bool is_home = false;
    int shots = 0;
    int goals = 0;  // 0 <= goals <= shots
    double days_before = 0.0;
};

struct SampleSet {
    std::vector<std::string> team_order;  // every team seen before as_of_date
    std::vector<ShotOutcomeSample> samples;
};

/// Half-life decay (1/2)^(days_ago / half_life). Throws std::domain_error on
/// negative days_ago: a future match in a training set is a look-ahead bug.
double time_weight(double days_ago, double half_life);

struct ShotProbs {
    double home = 0.0;
    double away = 0.0;
};

/// p_home = logistic(c + h + (a_i + d_j)/2),
/// p_away = logistic(c - h + (a_j + d_i)/2).
/// Absent when either team is unrated; callers fall back to climatology.
std::optional<ShotProbs> shot_probabilities(const ShotModelParams& params,
                                            const std::string& home_team,
                                            const std::string& away_team);

/// Training samples for `league_id` from matches strictly before
/// `as_of_date`. Matches where either side out-scored its shot count are
/// data glitches and contribute no samples; teams still enter team_order.
SampleSet build_samples(const std::vector<MatchRecord>& matches,
                        const std::string& league_id, const Date& as_of_date);

/// -sum_m w_m [G ln p + (S - G) ln(1 - p)] with w_m from the params'
/// half-life. Probabilities are clamped to [1e-9, 1-1e-9] before logs.
double weighted_nll(const ShotModelParams& params,
                    std::span<const ShotOutcomeSample> samples);

/// Same NLL, also writing the analytic gradient in the fit's packed layout
/// [attack_0..attack_{T-1}, defence_0..defence_{T-1}, c, h].
double weighted_nll(const ShotModelParams& params,
                    std::span<const ShotOutcomeSample> samples,
                    std::span<double> grad);

struct ShotModelFitResult {
    ShotModelParams params;
    double nll = 0.0;
    bool converged = true;
};

/// Maximum-likelihood fit of all 2T+2 parameters from zeros, then an exact
/// re-centering of attack and defence (a gauge shift absorbed into c, so
/// probabilities are untouched). Teams with no samples stay at the gauge
/// origin, i.e. the league average. Absent when no sample has a shot.
std::optional<ShotModelFitResult> fit_shot_model(const std::vector<MatchRecord>& matches,
                                                 const std::string& league_id,
                                                 const Date& as_of_date,
                                                 double half_life);

/// Pooled conversion rate sum(G) / sum(S) over matches strictly before
/// as_of_date, both sides counted. Absent when no prior shots exist.
std::optional<double> climatology(const std::vector<MatchRecord>& matches,
                                  const Date& as_of_date);

}  // namespace shotcast
