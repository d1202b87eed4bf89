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
// Microbenchmarks for the hot paths of a backtest: the weighted likelihood
// and its gradient, the full per-date model fit, the sequential shot-count
// rating pass, season CSV parsing, and the resampled reliability diagram.
#include <benchmark/benchmark.h>

#include <limits>
#include <vector>

#include "shotcast/gap.h"
#include "shotcast/ingest.h"
#include "shotcast/rng.h"
#include "shotcast/scoring.h"
#include "shotcast/shot_model.h"
#include "shotcast/sim.h"

using namespace shotcast;

namespace {

SynthLeague make_league(int num_teams, int num_seasons, std::uint64_t seed) {
    SynthLeagueConfig config;
    config.league_id = "L";
    config.num_teams = num_teams;
    config.num_seasons = num_seasons;
    config.seed = seed;
    return simulate_league(config);
}

void BM_weighted_nll(benchmark::State& state) {
    const SynthLeague league = make_league(20, 5, 3);
    const SampleSet set = build_samples(league.matches, "L", Date{2021, 6, 1});
    ShotModelParams params;
    params.league_id = "L";
    params.team_order = set.team_order;
    params.attack.assign(set.team_order.size(), 0.0);
    params.defence.assign(set.team_order.size(), 0.0);
    params.c = -2.0;
    params.h = 0.1;
    params.half_life_days = 90.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(weighted_nll(params, set.samples));
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(set.samples.size()));
}
BENCHMARK(BM_weighted_nll);

void BM_weighted_nll_gradient(benchmark::State& state) {
    const SynthLeague league = make_league(20, 5, 3);
    const SampleSet set = build_samples(league.matches, "L", Date{2021, 6, 1});
    ShotModelParams params;
    params.league_id = "L";
    params.team_order = set.team_order;
    params.attack.assign(set.team_order.size(), 0.0);
    params.defence.assign(set.team_order.size(), 0.0);
    params.c = -2.0;
    params.h = 0.1;
    params.half_life_days = 90.0;
    std::vector<double> grad(2 * set.team_order.size() + 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(weighted_nll(params, set.samples, grad));
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(set.samples.size()));
}
BENCHMARK(BM_weighted_nll_gradient);

void BM_fit_shot_model(benchmark::State& state) {
    const SynthLeague league = make_league(static_cast<int>(state.range(0)), 3, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            fit_shot_model(league.matches, "L", Date{2021, 6, 1}, 90.0));
}
BENCHMARK(BM_fit_shot_model)->Arg(8)->Arg(20);

void BM_gap_rating_pass(benchmark::State& state) {
    const SynthLeague league = make_league(20, 5, 11);
    const GapParams params{0.1, 0.7, 0.7};
    for (auto _ : state)
        benchmark::DoNotOptimize(mae_objective(params, league.matches));
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(league.matches.size()));
}
BENCHMARK(BM_gap_rating_pass);

void BM_parse_league_csv(benchmark::State& state) {
    const SynthLeague league = make_league(20, 1, 13);
    const std::string csv = to_league_csv(league.matches);
    for (auto _ : state)
        benchmark::DoNotOptimize(parse_league_csv(csv, "L", "1516"));
    state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(csv.size()));
}
BENCHMARK(BM_parse_league_csv);

void BM_reliability_diagram(benchmark::State& state) {
    Rng rng(17);
    std::vector<ReliabilityPoint> points;
    for (int i = 0; i < 20000; ++i) {
        const double p = rng.uniform(0.05, 0.95);
        points.push_back({p, rng.bernoulli(p) ? 1 : 0, 1});
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(reliability_diagram(points, 10));
}
BENCHMARK(BM_reliability_diagram);

}  // namespace

BENCHMARK_MAIN();
