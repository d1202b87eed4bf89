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
#include <span>
#include <vector>

namespace shotcast {

/// sum_i (p_i - o_i)^2 where o is the outcome indicator. Throws
/// std::invalid_argument unless p is a probability vector summing to 1.
double brier(std::span<const double> p, int outcome);

/// Ranked probability score over ordered categories:
/// sum_{i<r} (cumulative p - cumulative o)^2. Requires r >= 2.
double rps(std::span<const double> p, int outcome);

/// -log2 of the probability assigned to the outcome, floored at 1e-9.
/// `clamp_tally`, when given, counts forecasts that hit the floor.
double ignorance(std::span<const double> p, int outcome, long* clamp_tally = nullptr);
double ignorance_binary(double p_event, bool event, long* clamp_tally = nullptr);

/// mean(model) - mean(baseline) over paired score lists; negative means the
/// model is more skillful. Throws on a length mismatch.
double relative_skill(std::span<const double> scores_model,
                      std::span<const double> scores_baseline);

// One forecast for a reliability diagram: probability of success per trial,
// with the binomially aggregated outcome. Binary forecasts use trials = 1.
struct ReliabilityPoint {
    double p = 0.0;
    int successes = 0;
    int trials = 1;
};

struct ReliabilityBin {
    double mean_forecast = 0.0;      // trial-weighted mean of p
    double observed_frequency = 0.0;
    long count = 0;                  // forecasts in the bin
    long trials = 0;
    double bar_low = 0.0;   // 95% consistency interval under the forecasts
    double bar_high = 0.0;
};

struct ReliabilityDiagram {
    std::vector<ReliabilityBin> bins;
    bool reduced_bins = false;  // tied forecasts forced bin merges
};

/// Equal-count bins by forecast value; bins whose boundary would split tied
/// forecast values are merged. Consistency bars are the 2.5 and 97.5
/// percentiles of bin frequency over `replicates` Monte-Carlo resamples of
/// every outcome from its own forecast probability.
ReliabilityDiagram reliability_diagram(std::span<const ReliabilityPoint> points,
                                       int n_bins = 10, std::uint64_t seed = 7,
                                       int replicates = 1000);

}  // namespace shotcast
