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
#include <vector>

#include "shotcast/types.h"

namespace shotcast {

// Whether expected goals use the fitted per-team conversion probabilities
// or the league climatological rate.
enum class PredictorVariant { Model, Climatology };

struct GoalExpectation {
    double home = 0.0;
    double away = 0.0;
    PredictorVariant variant = PredictorVariant::Model;
};

/// Expected goals for one side: predicted shots times conversion probability.
inline double expected_goals(double predicted_shots, double p_success) {
    return predicted_shots * p_success;
}

/// Match-outcome predictor: expected goal difference.
inline double outcome_predictor(const GoalExpectation& e) { return e.home - e.away; }

/// Total-goals predictor: expected goals scored by both sides.
inline double totals_predictor(const GoalExpectation& e) { return e.home + e.away; }

// Proportional-odds model over Away < Draw < Home:
// P(Y <= k | x) = logistic(c_k - beta.x).
struct OrderedLogitParams {
    std::vector<double> beta;
    double c1 = -1.0;
    double c2 = 1.0;  // strictly above c1
};

struct LogitParams {
    double intercept = 0.0;
    std::vector<double> beta;
};

struct OutcomeProbs {
    double home = 0.0;
    double draw = 0.0;
    double away = 0.0;
};

struct OrderedLogitFit {
    OrderedLogitParams params;
    bool converged = true;
    bool capped = false;  // separation guard clamped a coefficient
};

/// NLL of the proportional-odds model over the rows, also writing the
/// analytic gradient as [beta..., c1, c2] when `grad` is non-empty.
double ordered_logit_nll(const OrderedLogitParams& params,
                         const std::vector<std::vector<double>>& X,
                         const std::vector<Outcome>& y,
                         std::span<double> grad = {});

/// Maximum-likelihood proportional-odds fit; the cutpoint gap is kept
/// positive by an exponential reparameterization. Absent unless the data
/// span all three outcomes with at least K+3 rows. Coefficients larger than
/// 50 in magnitude (separation) are clamped and flagged.
std::optional<OrderedLogitFit> fit_ordered_logit(const std::vector<std::vector<double>>& X,
                                                 const std::vector<Outcome>& y);

OutcomeProbs predict_ordered_logit(const OrderedLogitParams& params,
                                   const std::vector<double>& x);

struct LogitFit {
    LogitParams params;
    bool converged = true;
    bool capped = false;
};

/// Binary maximum-likelihood logistic fit with the same separation guard.
/// Needs at least K+3 rows; one-class data collapses to the capped constant
/// map rather than letting the intercept run away.
std::optional<LogitFit> fit_logit(const std::vector<std::vector<double>>& X,
                                  const std::vector<int>& y);

double predict_logit(const LogitParams& params, const std::vector<double>& x);

}  // namespace shotcast
