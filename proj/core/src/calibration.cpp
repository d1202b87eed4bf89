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
#include "shotcast/calibration.h"

#include <algorithm>
#include <cmath>

#include "shotcast/optim.h"

namespace shotcast {

namespace {

constexpr double kProbFloor = 1e-9;

double clamp_prob(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

// Binomial NLL in nats of the samples under probability q(sample).
template <typename ProbFn>
double binomial_nll(std::span<const CalibrationSample> samples, ProbFn&& prob) {
    double nll = 0.0;
    for (const auto& s : samples) {
        if (s.shots == 0) continue;
        const double q = clamp_prob(prob(s));
        nll -= s.goals * std::log(q) + (s.shots - s.goals) * std::log(1.0 - q);
    }
    return nll;
}

}  // namespace

double platt_scale(double p, const PlattParams& params) {
    return 1.0 / (1.0 + std::exp(params.A + params.b * p));
}

std::optional<PlattFitResult> fit_platt(std::span<const CalibrationSample> samples) {
    long shots = 0;
    long goals = 0;
    for (const auto& s : samples) {
        shots += s.shots;
        goals += s.goals;
    }
    if (shots == 0) return std::nullopt;

    PlattFitResult result;
    const double rate = clamp_prob(static_cast<double>(goals) / static_cast<double>(shots));
    if (goals == 0 || goals == shots) {
        // Perfect separation: the likelihood has no interior optimum, so fall
        // back to the constant map at the clamped empirical rate.
        result.params = {std::log(1.0 / rate - 1.0), 0.0};
        result.degenerate = true;
        return result;
    }

    const GradFn objective = [&](std::span<const double> x, std::span<double> grad) {
        const PlattParams params{x[0], x[1]};
        if (!grad.empty()) {
            grad[0] = 0.0;
            grad[1] = 0.0;
            for (const auto& s : samples) {
                if (s.shots == 0) continue;
                const double q = platt_scale(s.p, params);
                grad[0] += s.goals - s.shots * q;
                grad[1] += s.p * (s.goals - s.shots * q);
            }
        }
        return binomial_nll(samples, [&](const CalibrationSample& s) {
            return platt_scale(s.p, params);
        });
    };

    const auto fit = bfgs_minimize(objective, {std::log(1.0 / rate - 1.0), 0.0});
    result.params = {fit.x[0], fit.x[1]};
    return result;
}

double blend(double p, double p_climatology, const BlendParams& params) {
    return params.alpha * p + (1.0 - params.alpha) * p_climatology;
}

std::optional<BlendFitResult> fit_blend(std::span<const CalibrationSample> samples) {
    long shots = 0;
    for (const auto& s : samples) shots += s.shots;
    if (shots == 0) return std::nullopt;

    const auto nll_at = [&](double alpha) {
        const BlendParams params{alpha};
        return binomial_nll(samples, [&](const CalibrationSample& s) {
            return blend(s.p, s.p_climatology, params);
        });
    };

    const double alpha = golden_section(nll_at, 0.0, 1.0, 1e-5);
    BlendFitResult result;
    result.params.alpha = alpha;
    // Ignorance in bits, normalized per shot; the argmin is unaffected.
    result.mean_ignorance = nll_at(alpha) / (std::log(2.0) * static_cast<double>(shots));
    return result;
}

}  // namespace shotcast
