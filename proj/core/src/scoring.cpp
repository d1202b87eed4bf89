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
#include "shotcast/scoring.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "shotcast/rng.h"

namespace shotcast {

namespace {

constexpr double kProbFloor = 1e-9;

void check_simplex(std::span<const double> p, int outcome) {
    if (outcome < 0 || outcome >= static_cast<int>(p.size()))
        throw std::invalid_argument("outcome index out of range");
    double total = 0.0;
    for (const double v : p) {
        if (v < -1e-12 || v > 1.0 + 1e-12)
            throw std::invalid_argument("probability outside [0,1]");
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("probabilities do not sum to 1");
}

}  // namespace

double brier(std::span<const double> p, int outcome) {
    check_simplex(p, outcome);
    double score = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        const double o = static_cast<int>(i) == outcome ? 1.0 : 0.0;
        score += (p[i] - o) * (p[i] - o);
    }
    return score;
}

double rps(std::span<const double> p, int outcome) {
    if (p.size() < 2) throw std::invalid_argument("rps needs at least two categories");
    check_simplex(p, outcome);
    double cum_p = 0.0;
    double cum_o = 0.0;
    double score = 0.0;
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        cum_p += p[i];
        cum_o += static_cast<int>(i) == outcome ? 1.0 : 0.0;
        score += (cum_p - cum_o) * (cum_p - cum_o);
    }
    return score;
}

double ignorance(std::span<const double> p, int outcome, long* clamp_tally) {
    check_simplex(p, outcome);
    return ignorance_binary(p[outcome], true, clamp_tally);
}

double ignorance_binary(double p_event, bool event, long* clamp_tally) {
    const double q = event ? p_event : 1.0 - p_event;
    if (q < kProbFloor && clamp_tally) ++*clamp_tally;
    return -std::log2(std::max(q, kProbFloor));
}

double relative_skill(std::span<const double> scores_model,
                      std::span<const double> scores_baseline) {
    if (scores_model.size() != scores_baseline.size())
        throw std::invalid_argument("relative skill needs paired score lists");
    if (scores_model.empty()) throw std::invalid_argument("empty score lists");
    const double mean_model =
        std::accumulate(scores_model.begin(), scores_model.end(), 0.0) /
        static_cast<double>(scores_model.size());
    const double mean_base =
        std::accumulate(scores_baseline.begin(), scores_baseline.end(), 0.0) /
        static_cast<double>(scores_baseline.size());
    return mean_model - mean_base;
}

ReliabilityDiagram reliability_diagram(std::span<const ReliabilityPoint> points,
                                       int n_bins, std::uint64_t seed, int replicates) {
    if (n_bins < 2) throw std::invalid_argument("need at least two bins");
    const long n = static_cast<long>(points.size());
    if (n < n_bins) throw std::invalid_argument("fewer forecasts than bins");

    std::vector<int> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return points[a].p < points[b].p; });

    // Equal-count boundaries by sorted position, then merge any boundary
    // that would split a run of identical forecast values.
    std::vector<long> starts;
    for (int b = 0; b < n_bins; ++b) starts.push_back(b * n / n_bins);
    std::vector<long> merged{starts[0]};
    for (size_t b = 1; b < starts.size(); ++b) {
        const long at = starts[b];
        if (points[order[at]].p == points[order[at - 1]].p) continue;
        merged.push_back(at);
    }

    ReliabilityDiagram diagram;
    diagram.reduced_bins = merged.size() < starts.size();
    Rng rng(seed);

    for (size_t b = 0; b < merged.size(); ++b) {
        const long lo = merged[b];
        const long hi = b + 1 < merged.size() ? merged[b + 1] : n;
        ReliabilityBin bin;
        bin.count = hi - lo;
        double weighted_p = 0.0;
        long successes = 0;
        for (long i = lo; i < hi; ++i) {
            const auto& pt = points[order[i]];
            weighted_p += pt.p * pt.trials;
            successes += pt.successes;
            bin.trials += pt.trials;
        }
        bin.mean_forecast = bin.trials > 0 ? weighted_p / bin.trials : 0.0;
        bin.observed_frequency =
            bin.trials > 0 ? static_cast<double>(successes) / bin.trials : 0.0;

        // Spread of bin frequency if every forecast were perfectly reliable.
        std::vector<double> freqs(replicates);
        for (int r = 0; r < replicates; ++r) {
            long drawn = 0;
            for (long i = lo; i < hi; ++i) {
                const auto& pt = points[order[i]];
                drawn += rng.binomial(pt.trials, pt.p);
            }
            freqs[r] = bin.trials > 0 ? static_cast<double>(drawn) / bin.trials : 0.0;
        }
        std::sort(freqs.begin(), freqs.end());
        auto percentile = [&](double q) {
            const long k = std::lround(q * (replicates - 1));
            return freqs[std::clamp(k, 0L, static_cast<long>(replicates - 1))];
        };
        bin.bar_low = percentile(0.025);
        bin.bar_high = percentile(0.975);
        diagram.bins.push_back(bin);
    }
    return diagram;
}

}  // namespace shotcast
