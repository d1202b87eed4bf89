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
#include "shotcast/shot_model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "shotcast/optim.h"

namespace shotcast {

namespace {

constexpr double kProbFloor = 1e-9;

double logistic(double m) { return 1.0 / (1.0 + std::exp(-m)); }

double clamp_prob(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

// Log-odds of a sample's conversion probability. Parameter packing for the
// fit: x = [attack_0..attack_{T-1}, defence_0..defence_{T-1}, c, h].
double sample_logit(std::span<const double> x, int num_teams,
                    const ShotOutcomeSample& s) {
    const double c = x[2 * num_teams];
    const double h = x[2 * num_teams + 1];
    return c + (s.is_home ? h : -h) +
           (x[s.attack_team] + x[num_teams + s.defence_team]) / 2.0;
}

// Weighted binomial NLL over the packed parameters, accumulating the
// analytic gradient when `grad` is non-empty.
double packed_nll(std::span<const double> x, int num_teams,
                  std::span<const ShotOutcomeSample> samples,
                  std::span<const double> weights, std::span<double> grad) {
    if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
    double nll = 0.0;
    for (size_t k = 0; k < samples.size(); ++k) {
        const auto& s = samples[k];
        if (s.shots == 0) continue;
        const double w = weights[k];
        const double p = clamp_prob(logistic(sample_logit(x, num_teams, s)));
        nll -= w * (s.goals * std::log(p) + (s.shots - s.goals) * std::log(1.0 - p));
        if (!grad.empty()) {
            // d(nll)/d(logit) = w (S p - G); chain through the packing.
            const double g = w * (s.shots * p - s.goals);
            grad[s.attack_team] += 0.5 * g;
            grad[num_teams + s.defence_team] += 0.5 * g;
            grad[2 * num_teams] += g;
            grad[2 * num_teams + 1] += s.is_home ? g : -g;
        }
    }
    return nll;
}

std::vector<double> pack_params(const ShotModelParams& params) {
    std::vector<double> x;
    x.reserve(params.attack.size() + params.defence.size() + 2);
    x.insert(x.end(), params.attack.begin(), params.attack.end());
    x.insert(x.end(), params.defence.begin(), params.defence.end());
    x.push_back(params.c);
    x.push_back(params.h);
    return x;
}

}  // namespace

std::optional<int> ShotModelParams::team_index(const std::string& team) const {
    const auto it = std::find(team_order.begin(), team_order.end(), team);
    if (it == team_order.end()) return std::nullopt;
    return static_cast<int>(it - team_order.begin());
}

double time_weight(double days_ago, double half_life) {
    if (days_ago < 0.0) throw std::domain_error("negative days_ago: future match in training set");
    if (!(half_life > 0.0)) throw std::domain_error("half_life must be positive");
    return std::pow(0.5, days_ago / half_life);
}

std::optional<ShotProbs> shot_probabilities(const ShotModelParams& params,
                                            const std::string& home_team,
                                            const std::string& away_team) {
    const auto i = params.team_index(home_team);
    const auto j = params.team_index(away_team);
    if (!i || !j) return std::nullopt;
    const double shared_h = (params.attack[*i] + params.defence[*j]) / 2.0;
    const double shared_a = (params.attack[*j] + params.defence[*i]) / 2.0;
    return ShotProbs{logistic(params.c + params.h + shared_h),
                     logistic(params.c - params.h + shared_a)};
}

SampleSet build_samples(const std::vector<MatchRecord>& matches,
                        const std::string& league_id, const Date& as_of_date) {
    SampleSet set;
    std::map<std::string, int> index;
    auto team_id = [&](const std::string& team) {
        const auto it = index.find(team);
        if (it != index.end()) return it->second;
        const int id = static_cast<int>(set.team_order.size());
        index.emplace(team, id);
        set.team_order.push_back(team);
        return id;
    };

    for (const auto& match : matches) {
        if (match.league_id != league_id) continue;
        if (!(match.date < as_of_date)) continue;
        const int home = team_id(match.home_team);
        const int away = team_id(match.away_team);
        if (!match.has_shots()) continue;
        // A side that scored more goals than shots is a recording glitch;
        // the binomial likelihood is undefined, so the match is dropped.
        if (match.home_goals > *match.home_shots || match.away_goals > *match.away_shots)
            continue;
        const double days = static_cast<double>(days_between(match.date, as_of_date));
        set.samples.push_back({home, away, true, *match.home_shots, match.home_goals, days});
        set.samples.push_back({away, home, false, *match.away_shots, match.away_goals, days});
    }
    return set;
}

double weighted_nll(const ShotModelParams& params,
                    std::span<const ShotOutcomeSample> samples) {
    return weighted_nll(params, samples, {});
}

double weighted_nll(const ShotModelParams& params,
                    std::span<const ShotOutcomeSample> samples,
                    std::span<double> grad) {
    const int num_teams = static_cast<int>(params.team_order.size());
    const std::vector<double> x = pack_params(params);
    std::vector<double> weights;
    weights.reserve(samples.size());
    for (const auto& s : samples)
        weights.push_back(time_weight(s.days_before, params.half_life_days));
    return packed_nll(x, num_teams, samples, weights, grad);
}

std::optional<ShotModelFitResult> fit_shot_model(const std::vector<MatchRecord>& matches,
                                                 const std::string& league_id,
                                                 const Date& as_of_date,
                                                 double half_life) {
    SampleSet set = build_samples(matches, league_id, as_of_date);
    bool any_shots = false;
    for (const auto& s : set.samples) any_shots = any_shots || s.shots > 0;
    if (!any_shots) return std::nullopt;

    const int num_teams = static_cast<int>(set.team_order.size());
    const int dim = 2 * num_teams + 2;
    std::vector<double> weights;
    weights.reserve(set.samples.size());
    for (const auto& s : set.samples)
        weights.push_back(time_weight(s.days_before, half_life));

    const GradFn objective = [&](std::span<const double> x, std::span<double> grad) {
        return packed_nll(x, num_teams, set.samples, weights, grad);
    };

    const auto fit = bfgs_minimize(objective, std::vector<double>(dim, 0.0));

    ShotModelFitResult result;
    result.params.league_id = league_id;
    result.params.team_order = std::move(set.team_order);
    result.params.attack.assign(fit.x.begin(), fit.x.begin() + num_teams);
    result.params.defence.assign(fit.x.begin() + num_teams, fit.x.begin() + 2 * num_teams);
    result.params.c = fit.x[2 * num_teams];
    result.params.h = fit.x[2 * num_teams + 1];
    result.params.half_life_days = half_life;
    result.params.as_of_date = as_of_date;
    result.nll = fit.f;
    result.converged = fit.converged;

    // Exact gauge fix: shift each rating block to zero mean and absorb the
    // shift into c. Every fitted probability is unchanged.
    double mean_a = 0.0;
    double mean_d = 0.0;
    for (const double a : result.params.attack) mean_a += a;
    for (const double d : result.params.defence) mean_d += d;
    mean_a /= num_teams;
    mean_d /= num_teams;
    for (double& a : result.params.attack) a -= mean_a;
    for (double& d : result.params.defence) d -= mean_d;
    result.params.c += (mean_a + mean_d) / 2.0;
    return result;
}

std::optional<double> climatology(const std::vector<MatchRecord>& matches,
                                  const Date& as_of_date) {
    long goals = 0;
    long shots = 0;
    for (const auto& match : matches) {
        if (!(match.date < as_of_date)) continue;
        if (!match.has_shots()) continue;
        goals += match.home_goals + match.away_goals;
        shots += *match.home_shots + *match.away_shots;
    }
    if (shots == 0) return std::nullopt;
    return static_cast<double>(goals) / static_cast<double>(shots);
}

}  // namespace shotcast
