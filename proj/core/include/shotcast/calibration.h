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

namespace shotcast {

struct PlattParams {
    double A = 0.0;
    double b = 0.0;  // negative for an increasing map
};

struct BlendParams {
    double alpha = 1.0;  // in [0, 1]
};

// One past forecast with its binomial outcome: probability assigned to a
// goal per shot, the shots taken, and the goals scored from them.
struct CalibrationSample {
    double p = 0.0;
    double p_climatology = 0.0;  // used by blending only
    int shots = 0;
    int goals = 0;
};

/// The recalibration map 1 / (1 + exp(A + b p)), applied to a raw forecast.
double platt_scale(double p, const PlattParams& params);

struct PlattFitResult {
    PlattParams params;
    bool degenerate = false;  // all successes or all failures in the data
};

/// Maximum-likelihood fit of (A, b) against the binomial outcomes.
/// Degenerate data collapses to the constant map at the clamped empirical
/// rate. Absent when the input carries no shots.
std::optional<PlattFitResult> fit_platt(std::span<const CalibrationSample> samples);

/// alpha p + (1 - alpha) p_climatology.
double blend(double p, double p_climatology, const BlendParams& params);

struct BlendFitResult {
    BlendParams params;
    double mean_ignorance = 0.0;  // bits per shot at the fitted alpha
};

/// alpha in [0, 1] minimizing the mean per-shot ignorance of the blended
/// probabilities; the objective is convex, solved by golden section.
/// Absent when the input carries no shots.
std::optional<BlendFitResult> fit_blend(std::span<const CalibrationSample> samples);

}  // namespace shotcast
