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

#include <span>
#include <string>
#include <vector>

#include "shotcast/types.h"

namespace shotcast {

// Which Kelly numerator to use; AsPrinted keeps a published variant that
// stakes at zero edge, for comparison only.
enum class KellyNumerator { Standard, AsPrinted };

struct BetRecord {
    std::string league_id;
    std::string season_id;
    Date date{};
    std::string home_team;
    std::string away_team;
    Market market = Market::Match1X2;
    int outcome_index = 0;  // 0 home / 1 draw / 2 away; 0 over / 1 under
    double odds = 0.0;
    double fraction = 0.0;  // pre-normalization Kelly fraction (1 for level stakes)
    double stake = 0.0;
    bool won = false;
    double profit = 0.0;  // stake*(odds-1) if won, -stake if lost
};

/// Probability implied by decimal odds: 1/o. Throws on o <= 1.
double odds_implied(double odds);

/// A level-stakes bet triggers iff the forecast strictly exceeds the
/// odds-implied probability.
bool level_stakes_decide(double p_hat, double implied);

/// Fraction of wealth staked: max((o p - 1)/(o - 1), 0) in standard form.
/// Positive exactly when p > 1/o, so Kelly and level stakes bet on the same
/// set. Throws on o <= 1.
double kelly_fraction(double p_hat, double odds,
                      KellyNumerator numerator = KellyNumerator::Standard);

/// Scales fractions so the mean stake over bets with f > 0 is exactly 1.
/// Zero fractions stay zero. Throws when every fraction is zero.
std::vector<double> normalize_stakes(std::span<const double> fractions);

struct SettleResult {
    std::vector<double> cumulative_profit;  // running total after each bet
    double total_profit = 0.0;
    long bets_placed = 0;  // bets with positive stake
};

/// Fills won/profit for each draft bet from the actual outcome indices
/// (parallel to `bets`; throws on length mismatch) and accounts totals.
SettleResult settle(std::span<BetRecord> bets, std::span<const int> actual_outcomes);

}  // namespace shotcast
