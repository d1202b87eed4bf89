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

#include "shotcast/outcome.h"
#include "shotcast/rng.h"

using namespace shotcast;

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// NLL of the ordered model recomputed from predictions only, used to verify
// first-order optimality of the fit without reaching into the implementation.
double ordered_nll(const OrderedLogitParams& params, const std::vector<std::vector<double>>& X,
                   const std::vector<Outcome>& y) {
    double nll = 0.0;
    for (size_t i = 0; i < X.size(); ++i) {
        const OutcomeProbs p = predict_ordered_logit(params, X[i]);
        double q = p.draw;
        if (y[i] == Outcome::HomeWin) q = p.home;
        if (y[i] == Outcome::AwayWin) q = p.away;
        nll -= std::log(std::max(q, 1e-9));
    }
    return nll;
}

// Three-outcome rows with identical class frequencies at every predictor
// value, so the predictor carries no information by construction.
void independent_rows(std::vector<std::vector<double>>& X, std::vector<Outcome>& y) {
    for (double x : {-1.0, 0.0, 1.0}) {
        for (int i = 0; i < 30; ++i) {
            X.push_back({x});
            y.push_back(Outcome::AwayWin);
        }
        for (int i = 0; i < 45; ++i) {
            X.push_back({x});
            y.push_back(Outcome::Draw);
        }
        for (int i = 0; i < 25; ++i) {
            X.push_back({x});
            y.push_back(Outcome::HomeWin);
        }
    }
}

}  // namespace

TEST_CASE("expected goals multiply shots by conversion probability") {
    CHECK(expected_goals(12.0, 0.1) == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(expected_goals(12.0, 1e-9) == doctest::Approx(1.2e-8).epsilon(1e-12));
    CHECK(expected_goals(11.9, 0.13011) == doctest::Approx(1.54831).epsilon(1e-5));
}

TEST_CASE("match and totals predictors are goal difference and goal sum") {
    const GoalExpectation e{1.5, 1.2, PredictorVariant::Model};
    CHECK(outcome_predictor(e) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(totals_predictor(e) == doctest::Approx(2.7).epsilon(1e-12));
    const GoalExpectation even{1.4, 1.4, PredictorVariant::Model};
    CHECK(outcome_predictor(even) == doctest::Approx(0.0));
    const GoalExpectation zero{0.0, 0.0, PredictorVariant::Model};
    CHECK(totals_predictor(zero) == doctest::Approx(0.0));
    // The climatology variant shares one conversion rate, so equal shot
    // predictions give a zero goal-difference predictor.
    const double p_c = 0.104;
    const GoalExpectation clim{expected_goals(11.3, p_c), expected_goals(11.3, p_c),
                               PredictorVariant::Climatology};
    CHECK(outcome_predictor(clim) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("predict_ordered_logit reproduces hand-computed probabilities") {
    const OrderedLogitParams params{{0.7}, -1.0, 1.0};
    const OutcomeProbs p = predict_ordered_logit(params, {0.0});
    CHECK(p.away == doctest::Approx(0.26894).epsilon(1e-4));
    CHECK(p.draw == doctest::Approx(0.46212).epsilon(1e-4));
    CHECK(p.home == doctest::Approx(0.26894).epsilon(1e-4));
    CHECK(p.away == doctest::Approx(logistic(-1.0)).epsilon(1e-12));
    CHECK(p.draw == doctest::Approx(logistic(1.0) - logistic(-1.0)).epsilon(1e-12));
    CHECK(p.home == p.away);  // symmetric cutpoints at the neutral predictor

    const OutcomeProbs sat = predict_ordered_logit({{1.0}, -1.0, 1.0}, {50.0});
    CHECK(sat.home > 0.999);
}

TEST_CASE("ordered probabilities sum to one and stay in the open interval") {
    const std::vector<OrderedLogitParams> cases = {
        {{0.7}, -1.0, 1.0}, {{-2.0, 0.3}, -0.2, 0.9}, {{0.0}, -3.0, -2.5}};
    const std::vector<std::vector<double>> points = {{0.0}, {1.7}, {-4.0}};
    for (const auto& params : cases) {
        for (const auto& x0 : points) {
            std::vector<double> x(params.beta.size(), x0[0]);
            const OutcomeProbs p = predict_ordered_logit(params, x);
            CHECK(std::abs(p.home + p.draw + p.away - 1.0) < 1e-12);
            CHECK(p.home > 0.0);
            CHECK(p.draw > 0.0);
            CHECK(p.away > 0.0);
        }
    }
}

TEST_CASE("a positive coefficient makes larger predictors favor the home side") {
    const OrderedLogitParams params{{0.8}, -1.0, 1.0};
    double prev_home = 0.0;
    double prev_away = 1.0;
    for (int i = 0; i <= 10; ++i) {
        const double v = -2.0 + 0.4 * i;
        const OutcomeProbs p = predict_ordered_logit(params, {v});
        CHECK(p.home > prev_home);
        CHECK(p.away < prev_away);
        prev_home = p.home;
        prev_away = p.away;
    }
}

TEST_CASE("fit_ordered_logit needs all three outcomes and enough rows") {
    std::vector<std::vector<double>> X = {{0.1}, {0.2}, {-0.3}, {0.4}, {0.0}};
    const std::vector<Outcome> no_draws = {Outcome::HomeWin, Outcome::AwayWin, Outcome::HomeWin,
                                           Outcome::AwayWin, Outcome::HomeWin};
    CHECK_FALSE(fit_ordered_logit(X, no_draws).has_value());
    const std::vector<std::vector<double>> tiny = {{0.1}, {0.2}, {0.3}};
    const std::vector<Outcome> tiny_y = {Outcome::HomeWin, Outcome::Draw, Outcome::AwayWin};
    CHECK_FALSE(fit_ordered_logit(tiny, tiny_y).has_value());
    CHECK_FALSE(fit_ordered_logit({}, {}).has_value());
}

TEST_CASE("an uninformative predictor fits to the empirical frequencies") {
    std::vector<std::vector<double>> X;
    std::vector<Outcome> y;
    independent_rows(X, y);
    const auto fit = fit_ordered_logit(X, y);
    REQUIRE(fit.has_value());
    CHECK(fit->converged);
    CHECK_FALSE(fit->capped);
    CHECK(std::abs(fit->params.beta[0]) < 0.01);
    for (double x : {-1.0, 0.0, 1.0}) {
        const OutcomeProbs p = predict_ordered_logit(fit->params, {x});
        CHECK(p.away == doctest::Approx(0.30).epsilon(0.04));
        CHECK(p.draw == doctest::Approx(0.45).epsilon(0.03));
        CHECK(p.home == doctest::Approx(0.25).epsilon(0.04));
    }
}

TEST_CASE("fit_ordered_logit recovers known parameters from simulated data") {
    const double beta = 0.8;
    const double c1 = -0.5;
    const double c2 = 0.6;
    Rng rng(42);
    std::vector<std::vector<double>> X;
    std::vector<Outcome> y;
    for (int i = 0; i < 20000; ++i) {
        const double x = rng.uniform(-2.0, 2.0);
        const double u = rng.uniform();
        const double q1 = logistic(c1 - beta * x);
        const double q2 = logistic(c2 - beta * x);
        X.push_back({x});
        y.push_back(u < q1 ? Outcome::AwayWin : (u < q2 ? Outcome::Draw : Outcome::HomeWin));
    }
    const auto fit = fit_ordered_logit(X, y);
    REQUIRE(fit.has_value());
    CHECK(fit->params.beta[0] == doctest::Approx(beta).epsilon(0.07));
    CHECK(fit->params.c1 == doctest::Approx(c1).epsilon(0.1));
    CHECK(fit->params.c2 == doctest::Approx(c2).epsilon(0.1));

    // First-order optimality of the returned parameters against an
    // independently coded likelihood, by central finite differences.
    const double h = 1e-4;
    const double n = static_cast<double>(X.size());
    auto partial = [&](auto adjust) {
        OrderedLogitParams up = fit->params;
        OrderedLogitParams down = fit->params;
        adjust(up, h);
        adjust(down, -h);
        return (ordered_nll(up, X, y) - ordered_nll(down, X, y)) / (2.0 * h);
    };
    const double g_beta = partial([](OrderedLogitParams& p, double d) { p.beta[0] += d; });
    const double g_c1 = partial([](OrderedLogitParams& p, double d) { p.c1 += d; });
    const double g_c2 = partial([](OrderedLogitParams& p, double d) { p.c2 += d; });
    CHECK(std::abs(g_beta) / n < 1e-4);
    CHECK(std::abs(g_c1) / n < 1e-4);
    CHECK(std::abs(g_c2) / n < 1e-4);
}

TEST_CASE("mirroring the outcomes mirrors the fitted parameters") {
    Rng rng(9);
    std::vector<std::vector<double>> X;
    std::vector<Outcome> y;
    for (int i = 0; i < 4000; ++i) {
        const double x = rng.uniform(-2.0, 2.0);
        const double u = rng.uniform();
        const double q1 = logistic(-0.7 - 0.9 * x);
        const double q2 = logistic(0.4 - 0.9 * x);
        X.push_back({x});
        y.push_back(u < q1 ? Outcome::AwayWin : (u < q2 ? Outcome::Draw : Outcome::HomeWin));
    }
    std::vector<std::vector<double>> X_flip;
    std::vector<Outcome> y_flip;
    for (size_t i = 0; i < X.size(); ++i) {
        X_flip.push_back({-X[i][0]});
        Outcome o = y[i];
        if (o == Outcome::HomeWin) o = Outcome::AwayWin;
        else if (o == Outcome::AwayWin) o = Outcome::HomeWin;
        y_flip.push_back(o);
    }
    const auto fit = fit_ordered_logit(X, y);
    const auto mirror = fit_ordered_logit(X_flip, y_flip);
    REQUIRE(fit.has_value());
    REQUIRE(mirror.has_value());
    CHECK(mirror->params.beta[0] == doctest::Approx(fit->params.beta[0]).epsilon(1e-4));
    CHECK(mirror->params.c1 == doctest::Approx(-fit->params.c2).epsilon(1e-4));
    CHECK(mirror->params.c2 == doctest::Approx(-fit->params.c1).epsilon(1e-4));
}

TEST_CASE("perfectly separated outcomes hit the coefficient cap") {
    std::vector<std::vector<double>> X;
    std::vector<Outcome> y;
    for (int i = 0; i < 20; ++i) {
        X.push_back({-2.0 - 0.1 * i});
        y.push_back(Outcome::AwayWin);
        X.push_back({0.0 + 0.001 * i});
        y.push_back(Outcome::Draw);
        X.push_back({2.0 + 0.1 * i});
        y.push_back(Outcome::HomeWin);
    }
    const auto fit = fit_ordered_logit(X, y);
    REQUIRE(fit.has_value());
    CHECK(fit->capped);
    CHECK(std::abs(fit->params.beta[0]) <= 50.0);
    CHECK(fit->params.c1 < fit->params.c2);
    const OutcomeProbs p = predict_ordered_logit(fit->params, {0.0});
    CHECK(std::abs(p.home + p.draw + p.away - 1.0) < 1e-12);
}

TEST_CASE("the ordered-logit gradient matches central differences") {
    Rng rng(15);
    std::vector<std::vector<double>> X;
    std::vector<Outcome> y;
    for (int i = 0; i < 200; ++i) {
        X.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0)});
        const double u = rng.uniform();
        y.push_back(u < 0.3 ? Outcome::AwayWin : (u < 0.6 ? Outcome::Draw : Outcome::HomeWin));
    }
    const double h = 1e-6;
    for (int point = 0; point < 20; ++point) {
        OrderedLogitParams params;
        params.beta = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        params.c1 = rng.uniform(-1.5, 0.0);
        params.c2 = params.c1 + rng.uniform(0.2, 1.5);
        std::vector<double> grad(4);
        ordered_logit_nll(params, X, y, grad);
        for (int k = 0; k < 4; ++k) {
            auto shifted = [&](double d) {
                OrderedLogitParams p = params;
                if (k < 2) p.beta[k] += d;
                else if (k == 2) p.c1 += d;
                else p.c2 += d;
                return ordered_logit_nll(p, X, y);
            };
            const double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
            CHECK(std::abs(grad[k] - fd) / std::max(1.0, std::abs(fd)) < 1e-4);
        }
    }
}

TEST_CASE("predict_logit evaluates the logistic link") {
    CHECK(predict_logit({0.0, {0.0}}, {3.0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(predict_logit({-0.5, {0.4}}, {2.0}) == doctest::Approx(logistic(0.3)).epsilon(1e-12));
}

TEST_CASE("fit_logit recovers known parameters from simulated data") {
    const double intercept = -0.5;
    const double beta = 0.4;
    Rng rng(7);
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    for (int i = 0; i < 100000; ++i) {
        const double x = rng.uniform(-3.0, 3.0);
        X.push_back({x});
        y.push_back(rng.bernoulli(logistic(intercept + beta * x)) ? 1 : 0);
    }
    const auto fit = fit_logit(X, y);
    REQUIRE(fit.has_value());
    CHECK(fit->converged);
    CHECK_FALSE(fit->capped);
    CHECK(std::abs(fit->params.intercept - intercept) < 0.03);
    CHECK(std::abs(fit->params.beta[0] - beta) < 0.03);
}

TEST_CASE("fit_logit handles degenerate and undersized inputs") {
    std::vector<std::vector<double>> X;
    std::vector<int> ones;
    for (int i = 0; i < 10; ++i) {
        X.push_back({0.1 * i});
        ones.push_back(1);
    }
    const auto constant = fit_logit(X, ones);
    REQUIRE(constant.has_value());
    CHECK(constant->capped);
    CHECK(predict_logit(constant->params, {0.5}) > 0.99);

    const std::vector<std::vector<double>> tiny = {{0.0}, {1.0}, {2.0}};
    CHECK_FALSE(fit_logit(tiny, {0, 1, 0}).has_value());
    CHECK_FALSE(fit_logit({}, {}).has_value());
}

TEST_CASE("fit_logit caps separated data") {
    // Small-scale features: the separated MLE runs far past the cap before
    // the gradient can fade below tolerance.
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    for (int i = 0; i < 30; ++i) {
        X.push_back({i < 15 ? -0.1 - 0.005 * i : 0.1 + 0.005 * i});
        y.push_back(i < 15 ? 0 : 1);
    }
    const auto fit = fit_logit(X, y);
    REQUIRE(fit.has_value());
    CHECK(fit->capped);
    CHECK(std::abs(fit->params.beta[0]) <= 50.0);
}
