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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shotcast/betting.h"
#include "shotcast/calibration.h"
#include "shotcast/ingest.h"
#include "shotcast/types.h"

namespace shotcast {

// Bad flags or config file: CLI exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unusable or missing data: CLI exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Calibrator { Blend, Platt, None };

struct RunConfig {
    std::string data_dir;
    std::vector<std::string> leagues;  // empty = all
    double half_life = 60.0;
    std::vector<double> half_life_grid{10, 30, 60, 90, 120, 180, 240, 300, 365};
    Calibrator calibrator = Calibrator::Blend;
    bool include_odds_predictor = false;
    int burn_in_threshold = 6;
    bool market_1x2 = true;
    bool market_ou25 = true;
    std::uint64_t seed = 7;
    std::string output_dir;  // empty: report in memory only, no files
    std::string cache_dir;   // empty: in-memory fit cache only
    KellyNumerator kelly_numerator = KellyNumerator::Standard;
    // First season scored per league; empty picks each league's second
    // season with shot data, so every scored season has a trained history.
    std::string eval_start_season;
    bool audit = false;  // re-derive every 1000th forecast from scratch
    int reliability_bins = 10;

    void validate() const;
};

// Per-shot mean scores of the shot-success forecasts over the scored set.
struct ShotEvaluation {
    double ign_raw = 0.0;
    double ign_platt = 0.0;
    double ign_blend = 0.0;
    double ign_climatology = 0.0;
    double brier_raw = 0.0;
    double brier_platt = 0.0;
    double brier_blend = 0.0;
    double brier_climatology = 0.0;
    long samples = 0;  // team-match sides scored
    long shots = 0;
    bool calibrators_active = false;  // enough history to fit Platt/Blend
    double final_alpha = 1.0;
    PlattParams final_platt;
};

struct ScoreSummary {
    double mean_ignorance = 0.0;
    double mean_brier = 0.0;
    double mean_rps = 0.0;
    long count = 0;
};

struct StrategyResult {
    double total_profit = 0.0;
    long bets_placed = 0;
    double mean_stake = 0.0;
};

struct MarketEvaluation {
    ScoreSummary model;        // Poisson-free expected-goals predictor chain
    ScoreSummary climatology;  // same chain with the climatological rate
    double rel_ignorance = 0.0;  // model minus climatology, negative = skill
    double rel_brier = 0.0;
    double rel_rps = 0.0;
    long skipped_missing_odds = 0;
    StrategyResult level_stakes;
    StrategyResult kelly;
};

struct RunReport {
    long matches_total = 0;
    long matches_with_shots = 0;
    long matches_scored = 0;    // eligible: eval period, non-burn-in, shots, odds
    long burn_in_excluded = 0;  // otherwise-eligible matches dropped as burn-in
    long skipped_no_model = 0;  // no fitted model or unrated team yet
    ShotEvaluation shot;
    std::optional<MarketEvaluation> match_1x2;
    std::optional<MarketEvaluation> over_under;
    long audit_checked = 0;
    double audit_max_diff = 0.0;
    std::vector<std::string> warnings;
    std::vector<std::string> output_files;
};

struct SweepRow {
    double half_life = 0.0;
    double shot_rel_ign_raw = 0.0;
    double shot_rel_ign_platt = 0.0;
    double shot_rel_ign_blend = 0.0;
    double shot_rel_brier_blend = 0.0;
    double x12_rel_ignorance = 0.0;
    double x12_rel_rps = 0.0;
    double x12_level_profit = 0.0;
    double x12_kelly_profit = 0.0;
    double ou_rel_ignorance = 0.0;
    double ou_rel_brier = 0.0;
    double ou_level_profit = 0.0;
    double ou_kelly_profit = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // grid order
    std::vector<std::string> output_files;
};

/// Full chronological backtest at config.half_life. Every forecast input is
/// a function of strictly earlier matches; ratings update after the whole
/// date has been forecast.
RunReport run_backtest(const RunConfig& config);

/// Same, over an already-loaded dataset (shared by the sweep).
RunReport run_backtest_on(const Dataset& dataset, const RunConfig& config);

/// run_backtest per grid half-life over one shared dataset; emits the per-H
/// score and profit table.
SweepReport half_life_sweep(const RunConfig& config);

}  // namespace shotcast
