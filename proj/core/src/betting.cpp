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
#include "shotcast/betting.h"

#include <algorithm>
#include <stdexcept>

namespace shotcast {

double odds_implied(double odds) {
    if (!(odds > 1.0)) throw std::domain_error("decimal odds must exceed 1");
    return 1.0 / odds;
}

bool level_stakes_decide(double p_hat, double implied) { return p_hat > implied; }

double kelly_fraction(double p_hat, double odds, KellyNumerator numerator) {
    if (!(odds > 1.0)) throw std::domain_error("decimal odds must exceed 1");
    const double num = numerator == KellyNumerator::Standard ? odds * p_hat - 1.0
                                                             : odds + p_hat - 1.0;
    return std::max(num / (odds - 1.0), 0.0);
}

std::vector<double> normalize_stakes(std::span<const double> fractions) {
    double total = 0.0;
    long placed = 0;
    for (const double f : fractions) {
        if (f > 0.0) {
            total += f;
            ++placed;
        }
    }
    if (placed == 0) throw std::invalid_argument("no bets placed");
    const double k = static_cast<double>(placed) / total;
    std::vector<double> stakes;
    stakes.reserve(fractions.size());
    for (const double f : fractions) stakes.push_back(f > 0.0 ? k * f : 0.0);
    return stakes;
}

SettleResult settle(std::span<BetRecord> bets, std::span<const int> actual_outcomes) {
    if (bets.size() != actual_outcomes.size())
        throw std::invalid_argument("every bet needs an actual outcome");
    SettleResult result;
    result.cumulative_profit.reserve(bets.size());
    for (size_t i = 0; i < bets.size(); ++i) {
        BetRecord& bet = bets[i];
        bet.won = bet.outcome_index == actual_outcomes[i];
        bet.profit = bet.won ? bet.stake * (bet.odds - 1.0) : -bet.stake;
        result.total_profit += bet.profit;
        result.cumulative_profit.push_back(result.total_profit);
        if (bet.stake > 0.0) ++result.bets_placed;
    }
    return result;
}

}  // namespace shotcast
