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
#include "shotcast/outcome.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

#include "shotcast/optim.h"

namespace shotcast {

namespace {

constexpr double kProbFloor = 1e-9;
constexpr double kCoefCap = 50.0;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double dot(const std::vector<double>& beta, const std::vector<double>& x) {
    double v = 0.0;
    for (size_t k = 0; k < beta.size(); ++k) v += beta[k] * x[k];
    return v;
}

// Clamps fitted coefficients against separation drift; returns true if any
// value was touched.
bool cap_coefficients(std::span<double> values) {
    bool capped = false;
    for (double& v : values) {
        if (std::fabs(v) > kCoefCap) {
            v = std::copysign(kCoefCap, v);
            capped = true;
        }
    }
    return capped;
}

}  // namespace

double ordered_logit_nll(const OrderedLogitParams& params,
                         const std::vector<std::vector<double>>& X,
                         const std::vector<Outcome>& y, std::span<double> grad) {
    const size_t num_features = params.beta.size();
    if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
    double nll = 0.0;
    for (size_t i = 0; i < X.size(); ++i) {
        const double v = dot(params.beta, X[i]);
        const double q1 = logistic(params.c1 - v);
        const double q2 = logistic(params.c2 - v);

        double p = 0.0;
        double d_c1 = 0.0;  // NLL partials for this row
        double d_c2 = 0.0;
        double d_v = 0.0;
        switch (y[i]) {
            case Outcome::AwayWin:
                p = q1;
                d_c1 = -(1.0 - q1);
                d_v = 1.0 - q1;
                break;
            case Outcome::Draw: {
                p = q2 - q1;
                const double safe = std::max(p, kProbFloor);
                const double s1 = q1 * (1.0 - q1);
                const double s2 = q2 * (1.0 - q2);
                d_c1 = s1 / safe;
                d_c2 = -s2 / safe;
                d_v = (s2 - s1) / safe;
                break;
            }
            case Outcome::HomeWin:
                p = 1.0 - q2;
                d_c2 = q2;
                d_v = -q2;
                break;
        }
        nll -= std::log(std::max(p, kProbFloor));
        if (!grad.empty()) {
            for (size_t k = 0; k < num_features; ++k) grad[k] += d_v * X[i][k];
            grad[num_features] += d_c1;
            grad[num_features + 1] += d_c2;
        }
    }
    return nll;
}

std::optional<OrderedLogitFit> fit_ordered_logit(const std::vector<std::vector<double>>& X,
                                                 const std::vector<Outcome>& y) {
    const size_t n = X.size();
    if (n != y.size() || n == 0) return std::nullopt;
    const size_t num_features = X[0].size();
    if (n < num_features + 3) return std::nullopt;

    long count_home = 0;
    long count_draw = 0;
    long count_away = 0;
    for (const Outcome o : y) {
        if (o == Outcome::HomeWin) ++count_home;
        else if (o == Outcome::Draw) ++count_draw;
        else ++count_away;
    }
    if (count_home == 0 || count_draw == 0 || count_away == 0) return std::nullopt;

    // Pack as [beta..., c1, t] with c2 = c1 + exp(t) so c1 < c2 always holds.
    const double frac_away = static_cast<double>(count_away) / n;
    const double frac_draw = static_cast<double>(count_draw) / n;
    std::vector<double> x0(num_features + 2, 0.0);
    const double c1_start = std::log(frac_away / (1.0 - frac_away));
    const double c2_start =
        std::log((frac_away + frac_draw) / (1.0 - frac_away - frac_draw));
    x0[num_features] = c1_start;
    x0[num_features + 1] = std::log(std::max(c2_start - c1_start, 1e-3));

    // Optimize over [beta..., c1, t] and chain-rule the natural-space
    // gradient through c2 = c1 + exp(t).
    OrderedLogitParams point;
    std::vector<double> natural(num_features + 2);
    const GradFn objective = [&](std::span<const double> w, std::span<double> grad) {
        point.beta.assign(w.begin(), w.begin() + num_features);
        point.c1 = w[num_features];
        const double gap = std::exp(w[num_features + 1]);
        point.c2 = point.c1 + gap;
        if (grad.empty()) return ordered_logit_nll(point, X, y, {});
        const double nll = ordered_logit_nll(point, X, y, natural);
        for (size_t k = 0; k < num_features; ++k) grad[k] = natural[k];
        grad[num_features] = natural[num_features] + natural[num_features + 1];
        grad[num_features + 1] = natural[num_features + 1] * gap;
        return nll;
    };

    const auto fit = bfgs_minimize(objective, x0);

    OrderedLogitFit result;
    result.params.beta.assign(fit.x.begin(), fit.x.begin() + num_features);
    result.params.c1 = fit.x[num_features];
    result.params.c2 = result.params.c1 + std::exp(fit.x[num_features + 1]);
    result.converged = fit.converged;
    result.capped = cap_coefficients(result.params.beta);
    std::array<double, 2> cuts{result.params.c1, result.params.c2};
    if (cap_coefficients(cuts)) {
        result.capped = true;
        result.params.c1 = cuts[0];
        result.params.c2 = std::max(cuts[1], cuts[0] + 1e-6);
    }
    return result;
}

OutcomeProbs predict_ordered_logit(const OrderedLogitParams& params,
                                   const std::vector<double>& x) {
    const double v = dot(params.beta, x);
    const double q1 = logistic(params.c1 - v);
    const double q2 = logistic(params.c2 - v);
    return {1.0 - q2, q2 - q1, q1};
}

std::optional<LogitFit> fit_logit(const std::vector<std::vector<double>>& X,
                                  const std::vector<int>& y) {
    const size_t n = X.size();
    if (n != y.size() || n == 0) return std::nullopt;
    const size_t num_features = X[0].size();
    if (n < num_features + 3) return std::nullopt;

    long positives = 0;
    for (const int v : y) positives += v != 0;

    LogitFit result;
    if (positives == 0 || positives == static_cast<long>(n)) {
        // One class only: the MLE runs away, so return the capped constant.
        result.params.intercept = positives == 0 ? -kCoefCap : kCoefCap;
        result.params.beta.assign(num_features, 0.0);
        result.capped = true;
        return result;
    }

    const GradFn objective = [&](std::span<const double> w, std::span<double> grad) {
        if (!grad.empty()) std::fill(grad.begin(), grad.end(), 0.0);
        double nll = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double z = w[0];
            for (size_t k = 0; k < num_features; ++k) z += w[k + 1] * X[i][k];
            const double p = logistic(z);
            const double clamped = std::clamp(p, kProbFloor, 1.0 - kProbFloor);
            nll -= y[i] ? std::log(clamped) : std::log(1.0 - clamped);
            if (!grad.empty()) {
                const double g = p - (y[i] ? 1.0 : 0.0);
                grad[0] += g;
                for (size_t k = 0; k < num_features; ++k) grad[k + 1] += g * X[i][k];
            }
        }
        return nll;
    };

    const auto fit = bfgs_minimize(objective, std::vector<double>(num_features + 1, 0.0));
    result.params.intercept = fit.x[0];
    result.params.beta.assign(fit.x.begin() + 1, fit.x.end());
    result.converged = fit.converged;
    result.capped = cap_coefficients(result.params.beta);
    std::array<double, 1> intercept{result.params.intercept};
    if (cap_coefficients(intercept)) {
        result.capped = true;
        result.params.intercept = intercept[0];
    }
    return result;
}

double predict_logit(const LogitParams& params, const std::vector<double>& x) {
    return logistic(params.intercept + dot(params.beta, x));
}

}  // namespace shotcast
