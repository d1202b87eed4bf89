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
#include "shotcast/gap.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shotcast/optim.h"

namespace shotcast {

GapTeamRatings& ensure_team(GapState& state, const std::string& team) {
    const auto it = state.teams.find(team);
    if (it != state.teams.end()) return it->second;
    const double init = state.init_value();
    return state.teams.emplace(team, GapTeamRatings{init, init, init, init}).first->second;
}

ShotPrediction predict_shots(GapState& state, const std::string& home_team,
                             const std::string& away_team) {
    const GapTeamRatings& home = ensure_team(state, home_team);
    const GapTeamRatings& away = ensure_team(state, away_team);
    return {(home.home_attack + away.away_defence) / 2.0,
            (away.away_attack + home.home_defence) / 2.0};
}

void update_ratings(GapState& state, const MatchRecord& match) {
    if (!match.has_shots()) return;
    GapTeamRatings& home = ensure_team(state, match.home_team);
    GapTeamRatings& away = ensure_team(state, match.away_team);

    const double s_home = static_cast<double>(*match.home_shots);
    const double s_away = static_cast<double>(*match.away_shots);
    // Innovations against pre-match predictions; all eight updates below
    // read pre-match ratings only.
    const double delta_h = s_home - (home.home_attack + away.away_defence) / 2.0;
    const double delta_a = s_away - (away.away_attack + home.home_defence) / 2.0;

    const double lambda = state.params.lambda;
    const double phi1 = state.params.phi1;
    const double phi2 = state.params.phi2;

    const GapTeamRatings h0 = home;
    const GapTeamRatings a0 = away;
    auto clamped = [](double v) { return std::max(v, 0.0); };

    home.home_attack = clamped(h0.home_attack + lambda * phi1 * delta_h);
    home.away_attack = clamped(h0.away_attack + lambda * (1.0 - phi1) * delta_h);
    home.home_defence = clamped(h0.home_defence + lambda * phi1 * delta_a);
    home.away_defence = clamped(h0.away_defence + lambda * (1.0 - phi1) * delta_a);

    away.away_attack = clamped(a0.away_attack + lambda * phi2 * delta_a);
    away.home_attack = clamped(a0.home_attack + lambda * (1.0 - phi2) * delta_a);
    away.away_defence = clamped(a0.away_defence + lambda * phi2 * delta_h);
    away.home_defence = clamped(a0.home_defence + lambda * (1.0 - phi2) * delta_h);

    // Running mean sees the match only after it has been processed.
    state.shot_sum += s_home + s_away;
    state.shot_count += 2;
}

double mae_objective(const GapParams& params, const std::vector<MatchRecord>& matches,
                     double init) {
    GapState state;
    state.params = params;
    state.init_fallback = init;

    double total = 0.0;
    long used = 0;
    for (const auto& match : matches) {
        if (!match.has_shots()) continue;
        const ShotPrediction pred = predict_shots(state, match.home_team, match.away_team);
        total += std::fabs(static_cast<double>(*match.home_shots) - pred.home) +
                 std::fabs(static_cast<double>(*match.away_shots) - pred.away);
        update_ratings(state, match);
        ++used;
    }
    if (used == 0) throw std::invalid_argument("empty objective");
    return total / static_cast<double>(used);
}

GapFitResult fit_gap_params(const std::vector<MatchRecord>& matches, double init) {
    long usable = 0;
    for (const auto& match : matches)
        if (match.has_shots()) ++usable;

    GapFitResult result;
    if (usable < 100) {
        result.used_defaults = true;
        result.objective =
            usable > 0 ? mae_objective(result.params, matches, init)
                       : std::numeric_limits<double>::quiet_NaN();
        return result;
    }

    const auto logistic = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
    const auto from_transformed = [&](std::span<const double> x) {
        return GapParams{std::exp(x[0]), logistic(x[1]), logistic(x[2])};
    };
    const ScalarFn objective = [&](std::span<const double> x) {
        return mae_objective(from_transformed(x), matches, init);
    };

    // Start at (0.1, 0.5, 0.5) in (lambda, phi1, phi2) space.
    const std::vector<double> x0{std::log(0.1), 0.0, 0.0};
    const auto fit = nelder_mead(objective, x0);

    result.params = from_transformed(fit.x);
    result.objective = fit.f;
    result.converged = fit.converged;
    return result;
}

}  // namespace shotcast
