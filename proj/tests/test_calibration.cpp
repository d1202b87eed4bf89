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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "shotcast/calibration.h"

using namespace shotcast;

namespace {

// Mean binomial ignorance in bits per shot of the blended probabilities,
// computed directly from the definition as an independent check.
double blend_ignorance_bits(const std::vector<CalibrationSample>& samples, double alpha) {
    double nll = 0.0;
    long shots = 0;
    for (const auto& s : samples) {
        if (s.shots == 0) continue;
        double q = alpha * s.p + (1.0 - alpha) * s.p_climatology;
        q = std::clamp(q, 1e-9, 1.0 - 1e-9);
        nll -= s.goals * std::log2(q) + (s.shots - s.goals) * std::log2(1.0 - q);
        shots += s.shots;
    }
    return nll / static_cast<double>(shots);
}

// Exhaustive grid search over alpha, the reference answer fit_blend must match.
double blend_grid_argmin(const std::vector<CalibrationSample>& samples, double step) {
    double best_alpha = 0.0;
    double best = blend_ignorance_bits(samples, 0.0);
    for (double alpha = step; alpha <= 1.0 + 1e-12; alpha += step) {
        const double value = blend_ignorance_bits(samples, std::min(alpha, 1.0));
        if (value < best) {
            best = value;
            best_alpha = std::min(alpha, 1.0);
        }
    }
    return best_alpha;
}

// Forecasts that are already calibrated: at each probe probability the
// observed conversion rate equals the forecast exactly.
std::vector<CalibrationSample> calibrated_probes() {
    return {
        {0.05, 0.12, 1000, 50},
        {0.10, 0.12, 1000, 100},
        {0.15, 0.12, 1000, 150},
        {0.20, 0.12, 1000, 200},
    };
}

}  // namespace

TEST_CASE("platt_scale evaluates the two-parameter logistic map") {
    CHECK(platt_scale(0.3, {0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(platt_scale(0.9, {0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-12));
    // 1 / (1 + exp(0 - 4 * 0.5)) = 1 / (1 + exp(-2)).
    CHECK(platt_scale(0.5, {0.0, -4.0}) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-12));
    CHECK(platt_scale(0.25, {1.0, -2.0}) == doctest::Approx(1.0 / (1.0 + std::exp(0.5))).epsilon(1e-12));
    // Saturation at extreme intercepts.
    CHECK(platt_scale(0.5, {50.0, 0.0}) < 1e-9);
    CHECK(platt_scale(0.5, {-50.0, 0.0}) > 1.0 - 1e-9);
}

TEST_CASE("platt_scale is monotone in p with the sign of -b") {
    const PlattParams increasing{1.0, -5.0};
    const PlattParams decreasing{-1.0, 5.0};
    double prev_up = platt_scale(0.0, increasing);
    double prev_down = platt_scale(0.0, decreasing);
    for (int i = 1; i <= 20; ++i) {
        const double p = i / 20.0;
        const double up = platt_scale(p, increasing);
        const double down = platt_scale(p, decreasing);
        CHECK(up > prev_up);
        CHECK(down < prev_down);
        prev_up = up;
        prev_down = down;
    }
}

TEST_CASE("fit_platt recovers a near-identity map from calibrated forecasts") {
    const auto samples = calibrated_probes();
    const auto fit = fit_platt(samples);
    REQUIRE(fit.has_value());
    CHECK_FALSE(fit->degenerate);
    // The exact ML optimum for these counts, found by an offline search over
    // (A, b) to fatol 1e-16; the logistic family cannot do better than a
    // residual just under 0.01 against the identity on this range.
    CHECK(fit->params.A == doctest::Approx(3.255953).epsilon(5e-3));
    CHECK(fit->params.b == doctest::Approx(-9.629061).epsilon(5e-3));
    for (const auto& s : samples) {
        CHECK(std::abs(platt_scale(s.p, fit->params) - s.p) < 0.01);
    }
}

TEST_CASE("fit_platt ignores zero-shot samples") {
    auto samples = calibrated_probes();
    samples.push_back({0.9, 0.12, 0, 0});
    const auto with_empty = fit_platt(samples);
    const auto without = fit_platt(calibrated_probes());
    REQUIRE(with_empty.has_value());
    REQUIRE(without.has_value());
    CHECK(with_empty->params.A == doctest::Approx(without->params.A).epsilon(1e-12));
    CHECK(with_empty->params.b == doctest::Approx(without->params.b).epsilon(1e-12));
}

TEST_CASE("fit_platt collapses degenerate data to the clamped constant map") {
    SUBCASE("all failures") {
        const std::vector<CalibrationSample> samples = {{0.1, 0.1, 500, 0}, {0.4, 0.1, 500, 0}};
        const auto fit = fit_platt(samples);
        REQUIRE(fit.has_value());
        CHECK(fit->degenerate);
        CHECK(fit->params.b == 0.0);
        CHECK(platt_scale(0.1, fit->params) == doctest::Approx(1e-9).epsilon(1e-3));
        CHECK(platt_scale(0.9, fit->params) == doctest::Approx(1e-9).epsilon(1e-3));
    }
    SUBCASE("all successes") {
        const std::vector<CalibrationSample> samples = {{0.2, 0.1, 300, 300}, {0.6, 0.1, 200, 200}};
        const auto fit = fit_platt(samples);
        REQUIRE(fit.has_value());
        CHECK(fit->degenerate);
        CHECK(fit->params.b == 0.0);
        CHECK(platt_scale(0.5, fit->params) == doctest::Approx(1.0 - 1e-9).epsilon(1e-12));
    }
}

TEST_CASE("fit_platt without shots yields no fit") {
    CHECK_FALSE(fit_platt({}).has_value());
    const std::vector<CalibrationSample> empty_shots = {{0.1, 0.1, 0, 0}, {0.5, 0.1, 0, 0}};
    CHECK_FALSE(fit_platt(empty_shots).has_value());
}

TEST_CASE("blend forms the convex combination with climatology") {
    CHECK(blend(0.3, 0.1, {0.25}) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(blend(0.3, 0.1, {1.0}) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(blend(0.3, 0.1, {0.0}) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("blend stays between the forecast and the climatology") {
    const double ps[] = {0.02, 0.3, 0.77};
    const double cs[] = {0.11, 0.5, 0.9};
    for (double p : ps) {
        for (double c : cs) {
            for (int i = 0; i <= 10; ++i) {
                const double q = blend(p, c, {i / 10.0});
                CHECK(q >= std::min(p, c) - 1e-15);
                CHECK(q <= std::max(p, c) + 1e-15);
            }
        }
    }
}

TEST_CASE("fit_blend matches a fine grid search on a known mixture") {
    // Conversion rates sit exactly at 0.6 p + 0.4 p_c, so the per-shot
    // ignorance is minimized at alpha = 0.6 for every sample simultaneously.
    const std::vector<CalibrationSample> samples = {
        {0.05, 0.10, 1000, 70},
        {0.15, 0.10, 1000, 130},
        {0.20, 0.10, 1000, 160},
    };
    const auto fit = fit_blend(samples);
    REQUIRE(fit.has_value());
    const double grid = blend_grid_argmin(samples, 0.001);
    CHECK(grid == doctest::Approx(0.6).epsilon(2e-3));
    CHECK(std::abs(fit->params.alpha - grid) < 0.002);
    CHECK(fit->mean_ignorance ==
          doctest::Approx(blend_ignorance_bits(samples, fit->params.alpha)).epsilon(1e-9));
}

TEST_CASE("fit_blend keeps perfect forecasts unshrunk") {
    const std::vector<CalibrationSample> samples = {
        {0.05, 0.10, 1000, 50},
        {0.15, 0.10, 1000, 150},
        {0.25, 0.10, 1000, 250},
    };
    const auto fit = fit_blend(samples);
    REQUIRE(fit.has_value());
    CHECK(fit->params.alpha > 0.99);
}

TEST_CASE("fit_blend shrinks uninformative forecasts to climatology") {
    // Outcomes follow the climatology regardless of the forecast.
    const std::vector<CalibrationSample> samples = {
        {0.02, 0.10, 1000, 100},
        {0.30, 0.10, 1000, 100},
        {0.50, 0.10, 1000, 100},
        {0.07, 0.10, 1000, 100},
    };
    const auto fit = fit_blend(samples);
    REQUIRE(fit.has_value());
    CHECK(fit->params.alpha < 0.01);
}

TEST_CASE("fit_blend never loses to either endpoint") {
    const std::vector<std::vector<CalibrationSample>> cases = {
        {{0.05, 0.10, 400, 31}, {0.18, 0.09, 350, 44}, {0.12, 0.11, 500, 52}},
        {{0.40, 0.10, 120, 13}, {0.03, 0.12, 800, 90}},
    };
    for (const auto& samples : cases) {
        const auto fit = fit_blend(samples);
        REQUIRE(fit.has_value());
        CHECK(fit->mean_ignorance <= blend_ignorance_bits(samples, 0.0) + 1e-9);
        CHECK(fit->mean_ignorance <= blend_ignorance_bits(samples, 1.0) + 1e-9);
    }
}

TEST_CASE("fit_blend without shots yields no fit") {
    CHECK_FALSE(fit_blend({}).has_value());
    const std::vector<CalibrationSample> empty_shots = {{0.2, 0.1, 0, 0}};
    CHECK_FALSE(fit_blend(empty_shots).has_value());
}
