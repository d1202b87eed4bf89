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
#include "shotcast/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "shotcast/gap.h"
#include "shotcast/outcome.h"
#include "shotcast/scoring.h"
#include "shotcast/serialize.h"
#include "shotcast/shot_model.h"

namespace shotcast {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kProbFloor = 1e-9;
constexpr long kMinCalibrationSamples = 500;  // team-match sides
constexpr long kMinRegressionRows = 200;
constexpr double kDefaultInitShots = 12.0;

double clamp01(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

// Per-shot binomial scores of a team-match side forecast.
double binom_ignorance_bits(double q, int shots, int goals) {
    q = clamp01(q);
    return -(goals * std::log2(q) + (shots - goals) * std::log2(1.0 - q));
}

double binom_brier(double q, int shots, int goals) {
    return goals * 2.0 * (1.0 - q) * (1.0 - q) + (shots - goals) * 2.0 * q * q;
}

std::uint64_t fnv_mix(std::uint64_t h, const void* data, size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t hash_match(std::uint64_t h, const MatchRecord& m) {
    const int day = m.date.day_number();
    h = fnv_mix(h, &day, sizeof day);
    h = fnv_mix(h, m.home_team.data(), m.home_team.size());
    h = fnv_mix(h, m.away_team.data(), m.away_team.size());
    const int fields[4] = {m.home_goals, m.away_goals, m.home_shots.value_or(-1),
                           m.away_shots.value_or(-1)};
    h = fnv_mix(h, fields, sizeof fields);
    return h;
}

std::string hex64(std::uint64_t v) {
    char buffer[20];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(v));
    return buffer;
}

// Report floats pass through the 9-significant-digit policy before JSON
// emission so equal values always dump as equal bytes.
ordered_json num9(double v) { return std::strtod(round9(v).c_str(), nullptr); }

void write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << content;
}

const char* calibrator_name(Calibrator c) {
    switch (c) {
        case Calibrator::Blend: return "blend";
        case Calibrator::Platt: return "platt";
        case Calibrator::None: return "none";
    }
    return "?";
}

const char* kelly_name(KellyNumerator k) {
    return k == KellyNumerator::Standard ? "standard" : "as_printed";
}

// Fitted shot models cached by (league, date, half-life, history hash); a
// disk layer persists fits across CLI runs when a directory is configured.
class FitCache {
  public:
    explicit FitCache(std::string dir) : dir_(std::move(dir)) {}

    std::optional<ShotModelParams> find(const std::string& key,
                                        std::vector<std::string>* warnings) {
        const auto it = memory_.find(key);
        if (it != memory_.end()) return it->second;
        if (dir_.empty()) return std::nullopt;
        const std::string path = file_path(key);
        std::ifstream in(path, std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream buffer;
        buffer << in.rdbuf();
        try {
            ShotModelParams params = shot_model_from_json(buffer.str());
            memory_.emplace(key, params);
            return params;
        } catch (const std::exception& e) {
            if (warnings)
                warnings->push_back("corrupt fit cache entry refitted: " + path + " (" +
                                    e.what() + ")");
            return std::nullopt;
        }
    }

    void store(const std::string& key, const ShotModelParams& params) {
        memory_.emplace(key, params);
        if (dir_.empty()) return;
        std::filesystem::create_directories(dir_);
        std::ofstream out(file_path(key), std::ios::binary);
        if (out) out << to_json(params);
    }

  private:
    std::string file_path(const std::string& key) const {
        std::string name = key;
        for (char& c : name)
            if (c == '|' || c == '/') c = '_';
        return (std::filesystem::path(dir_) / (name + ".json")).string();
    }

    std::string dir_;
    std::map<std::string, ShotModelParams> memory_;
};

struct CsvTable {
    std::string header;
    std::vector<std::string> rows;

    std::string text() const {
        std::string out = header + "\n";
        for (const auto& row : rows) {
            out += row;
            out += '\n';
        }
        return out;
    }
};

// Accumulators for one betting market.
struct MarketAccum {
    std::vector<double> ign_model, ign_clim;
    std::vector<double> brier_model, brier_clim;
    std::vector<double> rps_model, rps_clim;
    long skipped_missing_odds = 0;
    std::vector<BetRecord> level_bets;
    std::vector<int> level_actual;
    std::vector<BetRecord> kelly_bets;
    std::vector<int> kelly_actual;
    CsvTable forecasts;
};

struct ShotAccum {
    // Index order: raw, platt, blend, climatology.
    double ign[4] = {0, 0, 0, 0};
    double brier[4] = {0, 0, 0, 0};
    long samples = 0;
    long shots = 0;
    std::vector<ReliabilityPoint> rel_raw, rel_platt, rel_blend;
    CsvTable forecasts;
};

class BacktestRun {
  public:
    BacktestRun(const Dataset& dataset, const RunConfig& config, FitCache& cache)
        : config_(config), cache_(cache) {
        // The league filter applies here too so a preloaded dataset behaves
        // the same as one loaded through run_backtest.
        if (config_.leagues.empty()) {
            matches_ = dataset.matches;
        } else {
            for (const auto& m : dataset.matches)
                if (std::find(config_.leagues.begin(), config_.leagues.end(),
                              m.league_id) != config_.leagues.end())
                    matches_.push_back(m);
        }
        sort_matches_by_date(matches_);
    }

    RunReport run();

  private:
    struct LeagueState {
        GapState gap;
        std::vector<MatchRecord> history;
        long clim_goals = 0;
        long clim_shots = 0;
        std::uint64_t data_hash = 14695981039346656037ULL;
        std::vector<std::string> season_order;  // by first appearance in time
        std::string eval_start;                 // empty: league never scored
        bool gap_defaults = false;

        int season_rank(const std::string& season) const {
            const auto it = std::find(season_order.begin(), season_order.end(), season);
            return it == season_order.end()
                       ? -1
                       : static_cast<int>(it - season_order.begin());
        }
        bool in_eval(const std::string& season) const {
            if (eval_start.empty()) return false;
            return season_rank(season) >= season_rank(eval_start);
        }
    };

    // Everything computed for one match in the forecast phase.
    struct MatchForecast {
        bool forecastable = false;
        ShotPrediction shots_pred;
        double p_raw_h = 0.0, p_raw_a = 0.0;
        double p_c = 0.0;
        // Calibrated shot-success versions: raw, platt, blend, climatology.
        double qh[4] = {0, 0, 0, 0};
        double qa[4] = {0, 0, 0, 0};
        double active_qh = 0.0, active_qa = 0.0;
        double v12_model = 0.0, v12_clim = 0.0;
        double vou_model = 0.0, vou_clim = 0.0;
        bool eval_period = false;
        bool burn_in = false;
        bool glitch = false;
    };

    struct Row1X2 {
        double v_model, v_clim, odds_p;
        bool has_odds;
        Outcome outcome;
    };
    struct RowOU {
        double t_model, t_clim, odds_p;
        bool has_odds;
        int over;
    };

    struct DateContext {
        std::map<std::string, std::optional<ShotModelParams>> shot_models;
        bool calibrators_ready = false;
        bool calibrators_active = false;
        PlattParams platt;
        BlendParams blnd;
        bool regressions_ready = false;
        std::optional<OrderedLogitParams> x12_model, x12_clim;
        std::optional<LogitParams> ou_model, ou_clim;
    };

    void resolve_league_structure();
    void fit_gap_parameters();
    const std::optional<ShotModelParams>& shot_model_for(const std::string& league,
                                                         const Date& date);
    void ensure_calibrators();
    void ensure_regressions();
    MatchForecast forecast_match(const MatchRecord& m, const Date& date);
    void score_and_bet(const MatchRecord& m, const MatchForecast& f);
    void absorb_match(const MatchRecord& m, const MatchForecast& f);
    void audit_forecast(const MatchRecord& m, const MatchForecast& f, const Date& date);
    OutcomeProbs outcome_frequencies() const;
    double over_frequency() const;
    OutcomeProbs predict_1x2(const std::optional<OrderedLogitParams>& params,
                             double v, double odds_p, bool has_odds) const;
    double predict_ou(const std::optional<LogitParams>& params, double v,
                      double odds_p, bool has_odds) const;
    void finalize_market(MarketAccum& accum, MarketEvaluation& out);
    void write_outputs(RunReport& report);

    RunConfig config_;
    FitCache& cache_;
    std::vector<MatchRecord> matches_;
    SeasonIndex season_index_;
    std::map<std::string, LeagueState> leagues_;
    DateContext date_ctx_;

    // Pooled cross-league training history, strictly before the current date.
    std::vector<CalibrationSample> calib_history_;
    std::vector<Row1X2> rows_1x2_;
    std::vector<RowOU> rows_ou_;
    long outcome_counts_[3] = {0, 0, 0};  // home, draw, away
    long over_count_ = 0;
    long outcome_total_ = 0;

    ShotAccum shot_;
    MarketAccum accum_1x2_;
    MarketAccum accum_ou_;
    RunReport report_;
    long scored_counter_ = 0;
};

void BacktestRun::resolve_league_structure() {
    for (const auto& m : matches_) {
        LeagueState& state = leagues_[m.league_id];
        if (state.season_rank(m.season_id) < 0) state.season_order.push_back(m.season_id);
    }
    for (auto& [league, state] : leagues_) {
        state.gap.league_id = league;
        state.gap.init_fallback = kDefaultInitShots;
        std::vector<std::string> shot_seasons;
        for (const auto& season : state.season_order) {
            const bool has = std::any_of(
                matches_.begin(), matches_.end(), [&](const MatchRecord& m) {
                    return m.league_id == league && m.season_id == season && m.has_shots();
                });
            if (has) shot_seasons.push_back(season);
        }
        if (!config_.eval_start_season.empty()) {
            if (state.season_rank(config_.eval_start_season) >= 0)
                state.eval_start = config_.eval_start_season;
        } else if (shot_seasons.size() >= 2) {
            state.eval_start = shot_seasons[1];
        }
        if (state.eval_start.empty())
            report_.warnings.push_back("league " + league +
                                       " has no evaluation period (needs two seasons "
                                       "of shot data or an explicit start)");
    }
}

void BacktestRun::fit_gap_parameters() {
    for (auto& [league, state] : leagues_) {
        std::vector<MatchRecord> training;
        if (!state.eval_start.empty()) {
            const int eval_rank = state.season_rank(state.eval_start);
            for (const auto& m : matches_)
                if (m.league_id == league && state.season_rank(m.season_id) < eval_rank)
                    training.push_back(m);
            sort_matches(training);
        }
        const GapFitResult fit = fit_gap_params(training, kDefaultInitShots);
        state.gap.params = fit.params;
        state.gap_defaults = fit.used_defaults;
        if (fit.used_defaults)
            report_.warnings.push_back("league " + league +
                                       " uses default shot-rating parameters "
                                       "(too little pre-evaluation data)");
    }
}

const std::optional<ShotModelParams>& BacktestRun::shot_model_for(
    const std::string& league, const Date& date) {
    auto it = date_ctx_.shot_models.find(league);
    if (it != date_ctx_.shot_models.end()) return it->second;

    LeagueState& state = leagues_.at(league);
    const std::string key = league + "|" + date.to_string() + "|H" +
                            round9(config_.half_life) + "|" + hex64(state.data_hash);
    std::optional<ShotModelParams> model = cache_.find(key, &report_.warnings);
    if (!model) {
        const auto fit =
            fit_shot_model(state.history, league, date, config_.half_life);
        if (fit) {
            model = fit->params;
            cache_.store(key, *model);
        }
    }
    return date_ctx_.shot_models.emplace(league, std::move(model)).first->second;
}

void BacktestRun::ensure_calibrators() {
    if (date_ctx_.calibrators_ready) return;
    date_ctx_.calibrators_ready = true;
    if (static_cast<long>(calib_history_.size()) < kMinCalibrationSamples) return;
    const auto platt = fit_platt(calib_history_);
    const auto blnd = fit_blend(calib_history_);
    if (!platt || !blnd) return;
    date_ctx_.platt = platt->params;
    date_ctx_.blnd = blnd->params;
    date_ctx_.calibrators_active = true;
}

OutcomeProbs BacktestRun::outcome_frequencies() const {
    if (outcome_total_ == 0) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    const double n = static_cast<double>(outcome_total_);
    return {outcome_counts_[0] / n, outcome_counts_[1] / n, outcome_counts_[2] / n};
}

double BacktestRun::over_frequency() const {
    if (outcome_total_ == 0) return 0.5;
    return static_cast<double>(over_count_) / static_cast<double>(outcome_total_);
}

void BacktestRun::ensure_regressions() {
    if (date_ctx_.regressions_ready) return;
    date_ctx_.regressions_ready = true;

    const bool odds = config_.include_odds_predictor;
    if (config_.market_1x2) {
        std::vector<std::vector<double>> xm, xc;
        std::vector<Outcome> y;
        for (const auto& row : rows_1x2_) {
            if (odds && !row.has_odds) continue;
            if (odds) {
                xm.push_back({row.v_model, row.odds_p});
                xc.push_back({row.v_clim, row.odds_p});
            } else {
                xm.push_back({row.v_model});
                xc.push_back({row.v_clim});
            }
            y.push_back(row.outcome);
        }
        if (static_cast<long>(y.size()) >= kMinRegressionRows) {
            if (const auto fit = fit_ordered_logit(xm, y)) date_ctx_.x12_model = fit->params;
            if (const auto fit = fit_ordered_logit(xc, y)) date_ctx_.x12_clim = fit->params;
        }
    }
    if (config_.market_ou25) {
        std::vector<std::vector<double>> xm, xc;
        std::vector<int> y;
        for (const auto& row : rows_ou_) {
            if (odds && !row.has_odds) continue;
            if (odds) {
                xm.push_back({row.t_model, row.odds_p});
                xc.push_back({row.t_clim, row.odds_p});
            } else {
                xm.push_back({row.t_model});
                xc.push_back({row.t_clim});
            }
            y.push_back(row.over);
        }
        if (static_cast<long>(y.size()) >= kMinRegressionRows) {
            if (const auto fit = fit_logit(xm, y)) date_ctx_.ou_model = fit->params;
            if (const auto fit = fit_logit(xc, y)) date_ctx_.ou_clim = fit->params;
        }
    }
}

OutcomeProbs BacktestRun::predict_1x2(const std::optional<OrderedLogitParams>& params,
                                      double v, double odds_p, bool has_odds) const {
    if (!params) return outcome_frequencies();
    std::vector<double> x{v};
    if (config_.include_odds_predictor) {
        if (!has_odds) return outcome_frequencies();
        x.push_back(odds_p);
    }
    return predict_ordered_logit(*params, x);
}

double BacktestRun::predict_ou(const std::optional<LogitParams>& params, double v,
                               double odds_p, bool has_odds) const {
    if (!params) return over_frequency();
    std::vector<double> x{v};
    if (config_.include_odds_predictor) {
        if (!has_odds) return over_frequency();
        x.push_back(odds_p);
    }
    return predict_logit(*params, x);
}

BacktestRun::MatchForecast BacktestRun::forecast_match(const MatchRecord& m,
                                                       const Date& date) {
    LeagueState& state = leagues_.at(m.league_id);
    MatchForecast f;
    // Predict for every match so new teams always enter the rating state at
    // the same moment, whether or not a forecast comes out.
    f.shots_pred = predict_shots(state.gap, m.home_team, m.away_team);
    f.eval_period = state.in_eval(m.season_id);
    f.burn_in = is_burn_in(m, season_index_, config_.burn_in_threshold);
    f.glitch = m.has_shots() && (m.home_goals > *m.home_shots ||
                                 m.away_goals > *m.away_shots);

    if (state.clim_shots == 0) return f;
    f.p_c = static_cast<double>(state.clim_goals) / static_cast<double>(state.clim_shots);

    const auto& model = shot_model_for(m.league_id, date);
    if (!model) return f;
    const auto probs = shot_probabilities(*model, m.home_team, m.away_team);
    if (!probs) return f;

    f.forecastable = true;
    f.p_raw_h = probs->home;
    f.p_raw_a = probs->away;

    ensure_calibrators();
    f.qh[0] = f.p_raw_h;
    f.qa[0] = f.p_raw_a;
    if (date_ctx_.calibrators_active) {
        f.qh[1] = platt_scale(f.p_raw_h, date_ctx_.platt);
        f.qa[1] = platt_scale(f.p_raw_a, date_ctx_.platt);
        f.qh[2] = blend(f.p_raw_h, f.p_c, date_ctx_.blnd);
        f.qa[2] = blend(f.p_raw_a, f.p_c, date_ctx_.blnd);
    } else {
        // Calibrator cold start passes through the climatology.
        f.qh[1] = f.qa[1] = f.p_c;
        f.qh[2] = f.qa[2] = f.p_c;
    }
    f.qh[3] = f.qa[3] = f.p_c;

    switch (config_.calibrator) {
        case Calibrator::Blend:
            f.active_qh = f.qh[2];
            f.active_qa = f.qa[2];
            break;
        case Calibrator::Platt:
            f.active_qh = f.qh[1];
            f.active_qa = f.qa[1];
            break;
        case Calibrator::None:
            f.active_qh = f.qh[0];
            f.active_qa = f.qa[0];
            break;
    }

    const double eh = expected_goals(f.shots_pred.home, f.active_qh);
    const double ea = expected_goals(f.shots_pred.away, f.active_qa);
    const double ch = expected_goals(f.shots_pred.home, f.p_c);
    const double ca = expected_goals(f.shots_pred.away, f.p_c);
    const GoalExpectation model_e{eh, ea, PredictorVariant::Model};
    const GoalExpectation clim_e{ch, ca, PredictorVariant::Climatology};
    f.v12_model = outcome_predictor(model_e);
    f.v12_clim = outcome_predictor(clim_e);
    f.vou_model = totals_predictor(model_e);
    f.vou_clim = totals_predictor(clim_e);
    return f;
}

void BacktestRun::audit_forecast(const MatchRecord& m, const MatchForecast& f,
                                 const Date& date) {
    LeagueState& state = leagues_.at(m.league_id);
    double diff = 0.0;

    // Replay the rating recursion from a blank slate over the stored history,
    // in the same date blocks as the live pass: every team entering on a date
    // is initialized from the start-of-date running mean, before any update
    // from that date lands.
    GapState replay;
    replay.league_id = state.gap.league_id;
    replay.params = state.gap.params;
    replay.init_fallback = kDefaultInitShots;
    for (size_t b = 0; b < state.history.size();) {
        size_t e = b;
        while (e < state.history.size() && state.history[e].date == state.history[b].date)
            ++e;
        for (size_t k = b; k < e; ++k)
            predict_shots(replay, state.history[k].home_team, state.history[k].away_team);
        for (size_t k = b; k < e; ++k) update_ratings(replay, state.history[k]);
        b = e;
    }
    const ShotPrediction pred = predict_shots(replay, m.home_team, m.away_team);
    diff = std::max(diff, std::fabs(pred.home - f.shots_pred.home));
    diff = std::max(diff, std::fabs(pred.away - f.shots_pred.away));

    // Refit the shot model from raw history, bypassing the cache.
    const auto refit =
        fit_shot_model(state.history, m.league_id, date, config_.half_life);
    if (refit) {
        const auto probs = shot_probabilities(refit->params, m.home_team, m.away_team);
        if (probs) {
            diff = std::max(diff, std::fabs(probs->home - f.p_raw_h));
            diff = std::max(diff, std::fabs(probs->away - f.p_raw_a));
        }
    }

    const auto clim = climatology(state.history, date);
    if (clim) diff = std::max(diff, std::fabs(*clim - f.p_c));

    ++report_.audit_checked;
    report_.audit_max_diff = std::max(report_.audit_max_diff, diff);
}

void BacktestRun::score_and_bet(const MatchRecord& m, const MatchForecast& f) {
    if (!f.forecastable) {
        if (f.eval_period && !f.burn_in) ++report_.skipped_no_model;
        return;
    }

    auto flag = [](bool b) { return b ? "1" : "0"; };
    const std::string match_key = m.league_id + "," + m.season_id + "," +
                                  m.date.to_string() + "," + m.home_team + "," +
                                  m.away_team;

    const bool base_eligible = f.eval_period && !f.burn_in && m.has_shots();
    const bool shot_scored = base_eligible && !f.glitch;
    if (base_eligible && f.glitch)
        report_.warnings.push_back("glitch match skipped in shot scoring: " + match_key);

    if (f.eval_period && m.has_shots() && !f.glitch && f.burn_in)
        ++report_.burn_in_excluded;

    // Shot-success forecasts, one row per side.
    for (int side = 0; side < 2; ++side) {
        const double* q = side == 0 ? f.qh : f.qa;
        const int shots = side == 0 ? m.home_shots.value_or(0) : m.away_shots.value_or(0);
        const int goals = side == 0 ? m.home_goals : m.away_goals;
        std::string row = match_key;
        row += side == 0 ? ",home," : ",away,";
        row += m.has_shots() ? std::to_string(shots) : "";
        row += ",";
        row += std::to_string(goals);
        for (int k = 0; k < 4; ++k) row += "," + round9(q[k]);
        row += ",";
        row += flag(f.burn_in);
        row += ",";
        row += flag(f.eval_period);
        row += ",";
        row += flag(shot_scored);
        shot_.forecasts.rows.push_back(std::move(row));

        if (!shot_scored) continue;
        for (int k = 0; k < 4; ++k) {
            shot_.ign[k] += binom_ignorance_bits(q[k], shots, goals);
            shot_.brier[k] += binom_brier(q[k], shots, goals);
        }
        shot_.shots += shots;
        ++shot_.samples;
        shot_.rel_raw.push_back({q[0], goals, shots});
        shot_.rel_platt.push_back({q[1], goals, shots});
        shot_.rel_blend.push_back({q[2], goals, shots});
    }
    if (shot_scored) {
        ++report_.matches_scored;
        ++scored_counter_;
        if (config_.audit && scored_counter_ % 1000 == 1)
            audit_forecast(m, f, m.date);
    }

    ensure_regressions();

    if (config_.market_1x2) {
        const bool has_odds = m.odds_1x2.has_value();
        const double odds_p = has_odds ? odds_implied(m.odds_1x2->home) : 0.0;
        const OutcomeProbs pm = predict_1x2(date_ctx_.x12_model, f.v12_model, odds_p, has_odds);
        const OutcomeProbs pc = predict_1x2(date_ctx_.x12_clim, f.v12_clim, odds_p, has_odds);
        const bool scored = base_eligible && has_odds;
        if (base_eligible && !has_odds) ++accum_1x2_.skipped_missing_odds;

        for (int variant = 0; variant < 2; ++variant) {
            const OutcomeProbs& p = variant == 0 ? pm : pc;
            std::string row = match_key;
            row += variant == 0 ? ",model," : ",climatology,";
            row += round9(variant == 0 ? f.v12_model : f.v12_clim);
            row += "," + round9(p.home) + "," + round9(p.draw) + "," + round9(p.away);
            if (has_odds)
                row += "," + round9(m.odds_1x2->home) + "," + round9(m.odds_1x2->draw) +
                       "," + round9(m.odds_1x2->away);
            else
                row += ",,,";
            row += ",";
            row += flag(f.burn_in);
            row += ",";
            row += flag(f.eval_period);
            row += ",";
            row += flag(scored);
            accum_1x2_.forecasts.rows.push_back(std::move(row));
        }

        if (scored) {
            const int y = m.outcome == Outcome::HomeWin ? 0
                          : m.outcome == Outcome::Draw ? 1
                                                       : 2;
            const double vm[3] = {pm.home, pm.draw, pm.away};
            const double vc[3] = {pc.home, pc.draw, pc.away};
            accum_1x2_.ign_model.push_back(ignorance(vm, y));
            accum_1x2_.ign_clim.push_back(ignorance(vc, y));
            accum_1x2_.brier_model.push_back(brier(vm, y));
            accum_1x2_.brier_clim.push_back(brier(vc, y));
            accum_1x2_.rps_model.push_back(rps(vm, y));
            accum_1x2_.rps_clim.push_back(rps(vc, y));

            const double odds[3] = {m.odds_1x2->home, m.odds_1x2->draw, m.odds_1x2->away};
            const double probs[3] = {pm.home, pm.draw, pm.away};
            for (int k = 0; k < 3; ++k) {
                BetRecord bet;
                bet.league_id = m.league_id;
                bet.season_id = m.season_id;
                bet.date = m.date;
                bet.home_team = m.home_team;
                bet.away_team = m.away_team;
                bet.market = Market::Match1X2;
                bet.outcome_index = k;
                bet.odds = odds[k];
                if (level_stakes_decide(probs[k], odds_implied(odds[k]))) {
                    bet.fraction = 1.0;
                    bet.stake = 1.0;
                    accum_1x2_.level_bets.push_back(bet);
                    accum_1x2_.level_actual.push_back(y);
                }
                const double fr =
                    kelly_fraction(probs[k], odds[k], config_.kelly_numerator);
                if (fr > 0.0) {
                    bet.fraction = fr;
                    bet.stake = 0.0;  // set by the closing normalization pass
                    accum_1x2_.kelly_bets.push_back(bet);
                    accum_1x2_.kelly_actual.push_back(y);
                }
            }
        }
    }

    if (config_.market_ou25) {
        const bool has_odds = m.odds_ou25.has_value();
        const double odds_p = has_odds ? odds_implied(m.odds_ou25->over) : 0.0;
        const double pm = predict_ou(date_ctx_.ou_model, f.vou_model, odds_p, has_odds);
        const double pc = predict_ou(date_ctx_.ou_clim, f.vou_clim, odds_p, has_odds);
        const bool scored = base_eligible && has_odds;
        if (base_eligible && !has_odds) ++accum_ou_.skipped_missing_odds;

        for (int variant = 0; variant < 2; ++variant) {
            const double p = variant == 0 ? pm : pc;
            std::string row = match_key;
            row += variant == 0 ? ",model," : ",climatology,";
            row += round9(variant == 0 ? f.vou_model : f.vou_clim);
            row += "," + round9(p);
            if (has_odds)
                row += "," + round9(m.odds_ou25->over) + "," + round9(m.odds_ou25->under);
            else
                row += ",,";
            row += ",";
            row += flag(f.burn_in);
            row += ",";
            row += flag(f.eval_period);
            row += ",";
            row += flag(scored);
            accum_ou_.forecasts.rows.push_back(std::move(row));
        }

        if (scored) {
            const bool over = m.home_goals + m.away_goals > 2;
            const int y = over ? 0 : 1;
            const double vm[2] = {pm, 1.0 - pm};
            const double vc[2] = {pc, 1.0 - pc};
            accum_ou_.ign_model.push_back(ignorance(vm, y));
            accum_ou_.ign_clim.push_back(ignorance(vc, y));
            accum_ou_.brier_model.push_back(brier(vm, y));
            accum_ou_.brier_clim.push_back(brier(vc, y));
            accum_ou_.rps_model.push_back(rps(vm, y));
            accum_ou_.rps_clim.push_back(rps(vc, y));

            const double odds[2] = {m.odds_ou25->over, m.odds_ou25->under};
            const double probs[2] = {pm, 1.0 - pm};
            for (int k = 0; k < 2; ++k) {
                BetRecord bet;
                bet.league_id = m.league_id;
                bet.season_id = m.season_id;
                bet.date = m.date;
                bet.home_team = m.home_team;
                bet.away_team = m.away_team;
                bet.market = Market::OverUnder25;
                bet.outcome_index = k;
                bet.odds = odds[k];
                if (level_stakes_decide(probs[k], odds_implied(odds[k]))) {
                    bet.fraction = 1.0;
                    bet.stake = 1.0;
                    accum_ou_.level_bets.push_back(bet);
                    accum_ou_.level_actual.push_back(y);
                }
                const double fr =
                    kelly_fraction(probs[k], odds[k], config_.kelly_numerator);
                if (fr > 0.0) {
                    bet.fraction = fr;
                    bet.stake = 0.0;
                    accum_ou_.kelly_bets.push_back(bet);
                    accum_ou_.kelly_actual.push_back(y);
                }
            }
        }
    }
}

void BacktestRun::absorb_match(const MatchRecord& m, const MatchForecast& f) {
    LeagueState& state = leagues_.at(m.league_id);

    if (f.forecastable) {
        if (m.has_shots() && !f.glitch) {
            calib_history_.push_back({f.p_raw_h, f.p_c, *m.home_shots, m.home_goals});
            calib_history_.push_back({f.p_raw_a, f.p_c, *m.away_shots, m.away_goals});
        }
        const bool has_1x2 = m.odds_1x2.has_value();
        rows_1x2_.push_back({f.v12_model, f.v12_clim,
                             has_1x2 ? odds_implied(m.odds_1x2->home) : 0.0, has_1x2,
                             m.outcome});
        const bool has_ou = m.odds_ou25.has_value();
        rows_ou_.push_back({f.vou_model, f.vou_clim,
                            has_ou ? odds_implied(m.odds_ou25->over) : 0.0, has_ou,
                            m.home_goals + m.away_goals > 2 ? 1 : 0});
    }

    const int yi = m.outcome == Outcome::HomeWin ? 0 : m.outcome == Outcome::Draw ? 1 : 2;
    ++outcome_counts_[yi];
    ++outcome_total_;
    if (m.home_goals + m.away_goals > 2) ++over_count_;

    update_ratings(state.gap, m);
    if (m.has_shots()) {
        state.clim_goals += m.home_goals + m.away_goals;
        state.clim_shots += *m.home_shots + *m.away_shots;
    }
    state.data_hash = hash_match(state.data_hash, m);
    state.history.push_back(m);
}

void BacktestRun::finalize_market(MarketAccum& accum, MarketEvaluation& out) {
    auto mean = [](const std::vector<double>& v) {
        return v.empty() ? 0.0
                         : std::accumulate(v.begin(), v.end(), 0.0) /
                               static_cast<double>(v.size());
    };
    out.model = {mean(accum.ign_model), mean(accum.brier_model), mean(accum.rps_model),
                 static_cast<long>(accum.ign_model.size())};
    out.climatology = {mean(accum.ign_clim), mean(accum.brier_clim),
                       mean(accum.rps_clim), static_cast<long>(accum.ign_clim.size())};
    if (!accum.ign_model.empty()) {
        out.rel_ignorance = relative_skill(accum.ign_model, accum.ign_clim);
        out.rel_brier = relative_skill(accum.brier_model, accum.brier_clim);
        out.rel_rps = relative_skill(accum.rps_model, accum.rps_clim);
    }
    out.skipped_missing_odds = accum.skipped_missing_odds;

    const auto level = settle(accum.level_bets, accum.level_actual);
    out.level_stakes = {level.total_profit, level.bets_placed,
                        level.bets_placed > 0 ? 1.0 : 0.0};

    if (!accum.kelly_bets.empty()) {
        std::vector<double> fractions;
        fractions.reserve(accum.kelly_bets.size());
        for (const auto& bet : accum.kelly_bets) fractions.push_back(bet.fraction);
        const auto stakes = normalize_stakes(fractions);
        for (size_t i = 0; i < stakes.size(); ++i) accum.kelly_bets[i].stake = stakes[i];
        const auto kelly = settle(accum.kelly_bets, accum.kelly_actual);
        double stake_sum = 0.0;
        for (const auto& bet : accum.kelly_bets) stake_sum += bet.stake;
        out.kelly = {kelly.total_profit, kelly.bets_placed,
                     kelly.bets_placed > 0
                         ? stake_sum / static_cast<double>(kelly.bets_placed)
                         : 0.0};
    }
}

RunReport BacktestRun::run() {
    config_.validate();
    report_ = RunReport{};
    report_.matches_total = static_cast<long>(matches_.size());
    for (const auto& m : matches_)
        if (m.has_shots()) ++report_.matches_with_shots;
    if (report_.matches_with_shots == 0)
        throw DataError("no shot data in any selected league; nothing to evaluate");

    season_index_ = build_season_index(matches_);
    resolve_league_structure();
    fit_gap_parameters();

    shot_.forecasts.header =
        "league,season,date,home_team,away_team,side,shots,goals,"
        "p_raw,p_platt,p_blend,p_climatology,burn_in,eval_period,scored";
    accum_1x2_.forecasts.header =
        "league,season,date,home_team,away_team,variant,v,p_home,p_draw,p_away,"
        "odds_home,odds_draw,odds_away,burn_in,eval_period,scored";
    accum_ou_.forecasts.header =
        "league,season,date,home_team,away_team,variant,v,p_over,"
        "odds_over,odds_under,burn_in,eval_period,scored";

    size_t i = 0;
    std::vector<MatchForecast> forecasts;
    while (i < matches_.size()) {
        size_t j = i;
        while (j < matches_.size() && matches_[j].date == matches_[i].date) ++j;
        const Date date = matches_[i].date;
        date_ctx_ = DateContext{};

        // Forecast the whole date from start-of-date state, then absorb.
        forecasts.clear();
        for (size_t k = i; k < j; ++k)
            forecasts.push_back(forecast_match(matches_[k], date));
        for (size_t k = i; k < j; ++k) score_and_bet(matches_[k], forecasts[k - i]);
        for (size_t k = i; k < j; ++k) absorb_match(matches_[k], forecasts[k - i]);
        i = j;
    }

    // Shot-forecast summary.
    if (shot_.shots > 0) {
        const double n = static_cast<double>(shot_.shots);
        report_.shot.ign_raw = shot_.ign[0] / n;
        report_.shot.ign_platt = shot_.ign[1] / n;
        report_.shot.ign_blend = shot_.ign[2] / n;
        report_.shot.ign_climatology = shot_.ign[3] / n;
        report_.shot.brier_raw = shot_.brier[0] / n;
        report_.shot.brier_platt = shot_.brier[1] / n;
        report_.shot.brier_blend = shot_.brier[2] / n;
        report_.shot.brier_climatology = shot_.brier[3] / n;
    }
    report_.shot.samples = shot_.samples;
    report_.shot.shots = shot_.shots;
    if (static_cast<long>(calib_history_.size()) >= kMinCalibrationSamples) {
        const auto platt = fit_platt(calib_history_);
        const auto blnd = fit_blend(calib_history_);
        if (platt && blnd) {
            report_.shot.calibrators_active = true;
            report_.shot.final_alpha = blnd->params.alpha;
            report_.shot.final_platt = platt->params;
        }
    }

    if (config_.market_1x2) {
        report_.match_1x2.emplace();
        finalize_market(accum_1x2_, *report_.match_1x2);
    }
    if (config_.market_ou25) {
        report_.over_under.emplace();
        finalize_market(accum_ou_, *report_.over_under);
    }

    write_outputs(report_);
    return report_;
}

void BacktestRun::write_outputs(RunReport& report) {
    if (config_.output_dir.empty()) return;
    namespace fs = std::filesystem;
    const fs::path dir(config_.output_dir);

    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (dir / name).string();
        write_text(path, content);
        report.output_files.push_back(path);
    };

    emit("forecasts_shot.csv", shot_.forecasts.text());
    if (config_.market_1x2) emit("forecasts_1x2.csv", accum_1x2_.forecasts.text());
    if (config_.market_ou25) emit("forecasts_ou25.csv", accum_ou_.forecasts.text());

    auto emit_reliability = [&](const std::string& name,
                                const std::vector<ReliabilityPoint>& points,
                                std::uint64_t seed_offset) {
        std::string csv = "bin_mean_forecast,observed_freq,count,trials,bar_low,bar_high\n";
        if (static_cast<int>(points.size()) >= config_.reliability_bins) {
            const auto diagram = reliability_diagram(points, config_.reliability_bins,
                                                     config_.seed + seed_offset);
            if (diagram.reduced_bins)
                report.warnings.push_back(name + ": tied forecasts merged bins");
            for (const auto& bin : diagram.bins) {
                csv += round9(bin.mean_forecast) + "," + round9(bin.observed_frequency) +
                       "," + std::to_string(bin.count) + "," + std::to_string(bin.trials) +
                       "," + round9(bin.bar_low) + "," + round9(bin.bar_high) + "\n";
            }
        } else {
            report.warnings.push_back(name + ": too few forecasts for a diagram");
        }
        emit(name, csv);
    };
    emit_reliability("reliability_shot_raw.csv", shot_.rel_raw, 0);
    emit_reliability("reliability_shot_platt.csv", shot_.rel_platt, 1);
    emit_reliability("reliability_shot_blend.csv", shot_.rel_blend, 2);

    auto bet_csv = [](const std::vector<BetRecord>& bets) {
        std::string csv =
            "league,season,date,home_team,away_team,market,outcome_index,odds,"
            "fraction,stake,won,profit\n";
        for (const auto& b : bets) {
            csv += b.league_id + "," + b.season_id + "," + b.date.to_string() + "," +
                   b.home_team + "," + b.away_team + "," + to_string(b.market) + "," +
                   std::to_string(b.outcome_index) + "," + round9(b.odds) + "," +
                   round9(b.fraction) + "," + round9(b.stake) + "," +
                   (b.won ? "1" : "0") + "," + round9(b.profit) + "\n";
        }
        return csv;
    };
    if (config_.market_1x2) {
        emit("bets_1x2_level.csv", bet_csv(accum_1x2_.level_bets));
        emit("bets_1x2_kelly.csv", bet_csv(accum_1x2_.kelly_bets));
    }
    if (config_.market_ou25) {
        emit("bets_ou25_level.csv", bet_csv(accum_ou_.level_bets));
        emit("bets_ou25_kelly.csv", bet_csv(accum_ou_.kelly_bets));
    }

    ordered_json j;
    j["config"] = {{"data_dir", config_.data_dir},
                   {"leagues", config_.leagues},
                   {"half_life", num9(config_.half_life)},
                   {"calibrator", calibrator_name(config_.calibrator)},
                   {"include_odds_predictor", config_.include_odds_predictor},
                   {"burn_in_threshold", config_.burn_in_threshold},
                   {"market_1x2", config_.market_1x2},
                   {"market_ou25", config_.market_ou25},
                   {"seed", config_.seed},
                   {"kelly_numerator", kelly_name(config_.kelly_numerator)},
                   {"eval_start_season", config_.eval_start_season},
                   {"reliability_bins", config_.reliability_bins}};
    j["counts"] = {{"matches_total", report.matches_total},
                   {"matches_with_shots", report.matches_with_shots},
                   {"matches_scored", report.matches_scored},
                   {"burn_in_excluded", report.burn_in_excluded},
                   {"skipped_no_model", report.skipped_no_model}};
    j["shot_forecasts"] = {
        {"samples", report.shot.samples},
        {"shots", report.shot.shots},
        {"mean_ignorance",
         {{"raw", num9(report.shot.ign_raw)},
          {"platt", num9(report.shot.ign_platt)},
          {"blend", num9(report.shot.ign_blend)},
          {"climatology", num9(report.shot.ign_climatology)}}},
        {"mean_brier",
         {{"raw", num9(report.shot.brier_raw)},
          {"platt", num9(report.shot.brier_platt)},
          {"blend", num9(report.shot.brier_blend)},
          {"climatology", num9(report.shot.brier_climatology)}}},
        {"relative_ignorance",
         {{"raw", num9(report.shot.ign_raw - report.shot.ign_climatology)},
          {"platt", num9(report.shot.ign_platt - report.shot.ign_climatology)},
          {"blend", num9(report.shot.ign_blend - report.shot.ign_climatology)}}},
        {"calibrators_active", report.shot.calibrators_active},
        {"final_alpha", num9(report.shot.final_alpha)},
        {"final_platt", {{"A", num9(report.shot.final_platt.A)},
                         {"b", num9(report.shot.final_platt.b)}}}};

    auto market_json = [&](const MarketEvaluation& ev) {
        ordered_json mj;
        mj["model"] = {{"mean_ignorance", num9(ev.model.mean_ignorance)},
                       {"mean_brier", num9(ev.model.mean_brier)},
                       {"mean_rps", num9(ev.model.mean_rps)},
                       {"count", ev.model.count}};
        mj["climatology"] = {{"mean_ignorance", num9(ev.climatology.mean_ignorance)},
                             {"mean_brier", num9(ev.climatology.mean_brier)},
                             {"mean_rps", num9(ev.climatology.mean_rps)},
                             {"count", ev.climatology.count}};
        mj["relative"] = {{"ignorance", num9(ev.rel_ignorance)},
                          {"brier", num9(ev.rel_brier)},
                          {"rps", num9(ev.rel_rps)}};
        mj["skipped_missing_odds"] = ev.skipped_missing_odds;
        mj["betting"] = {{"level_stakes",
                          {{"total_profit", num9(ev.level_stakes.total_profit)},
                           {"bets_placed", ev.level_stakes.bets_placed},
                           {"mean_stake", num9(ev.level_stakes.mean_stake)}}},
                         {"kelly",
                          {{"total_profit", num9(ev.kelly.total_profit)},
                           {"bets_placed", ev.kelly.bets_placed},
                           {"mean_stake", num9(ev.kelly.mean_stake)}}}};
        return mj;
    };
    if (report.match_1x2) j["match_1x2"] = market_json(*report.match_1x2);
    if (report.over_under) j["over_under_25"] = market_json(*report.over_under);
    j["audit"] = {{"checked", report.audit_checked},
                  {"max_abs_diff", num9(report.audit_max_diff)}};
    j["warnings"] = report.warnings;
    emit("evaluation.json", j.dump(2) + "\n");
}

}  // namespace

void RunConfig::validate() const {
    if (!(half_life > 0.0)) throw ConfigError("half_life must be positive");
    for (const double h : half_life_grid)
        if (!(h > 0.0)) throw ConfigError("half_life_grid values must be positive");
    if (burn_in_threshold < 0) throw ConfigError("burn_in_threshold must be >= 0");
    if (reliability_bins < 2) throw ConfigError("reliability_bins must be >= 2");
}

RunReport run_backtest(const RunConfig& config) {
    config.validate();
    if (config.data_dir.empty()) throw ConfigError("data_dir is required");
    Dataset dataset;
    try {
        LoadOptions options;
        options.leagues = config.leagues;
        dataset = load_dataset(config.data_dir, options);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
    return run_backtest_on(dataset, config);
}

RunReport run_backtest_on(const Dataset& dataset, const RunConfig& config) {
    FitCache cache(config.cache_dir);
    BacktestRun run(dataset, config, cache);
    return run.run();
}

SweepReport half_life_sweep(const RunConfig& config) {
    config.validate();
    if (config.data_dir.empty()) throw ConfigError("data_dir is required");
    Dataset dataset;
    try {
        LoadOptions options;
        options.leagues = config.leagues;
        dataset = load_dataset(config.data_dir, options);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }

    FitCache cache(config.cache_dir);
    SweepReport sweep;
    for (const double h : config.half_life_grid) {
        RunConfig point = config;
        point.half_life = h;
        point.output_dir.clear();  // per-H runs report in memory only
        BacktestRun run(dataset, point, cache);
        const RunReport report = run.run();

        SweepRow row;
        row.half_life = h;
        row.shot_rel_ign_raw = report.shot.ign_raw - report.shot.ign_climatology;
        row.shot_rel_ign_platt = report.shot.ign_platt - report.shot.ign_climatology;
        row.shot_rel_ign_blend = report.shot.ign_blend - report.shot.ign_climatology;
        row.shot_rel_brier_blend = report.shot.brier_blend - report.shot.brier_climatology;
        if (report.match_1x2) {
            row.x12_rel_ignorance = report.match_1x2->rel_ignorance;
            row.x12_rel_rps = report.match_1x2->rel_rps;
            row.x12_level_profit = report.match_1x2->level_stakes.total_profit;
            row.x12_kelly_profit = report.match_1x2->kelly.total_profit;
        }
        if (report.over_under) {
            row.ou_rel_ignorance = report.over_under->rel_ignorance;
            row.ou_rel_brier = report.over_under->rel_brier;
            row.ou_level_profit = report.over_under->level_stakes.total_profit;
            row.ou_kelly_profit = report.over_under->kelly.total_profit;
        }
        sweep.rows.push_back(row);
    }

    if (!config.output_dir.empty()) {
        std::string csv =
            "half_life,shot_rel_ign_raw,shot_rel_ign_platt,shot_rel_ign_blend,"
            "shot_rel_brier_blend,x12_rel_ignorance,x12_rel_rps,x12_level_profit,"
            "x12_kelly_profit,ou_rel_ignorance,ou_rel_brier,ou_level_profit,"
            "ou_kelly_profit\n";
        ordered_json rows = ordered_json::array();
        for (const auto& r : sweep.rows) {
            csv += round9(r.half_life) + "," + round9(r.shot_rel_ign_raw) + "," +
                   round9(r.shot_rel_ign_platt) + "," + round9(r.shot_rel_ign_blend) +
                   "," + round9(r.shot_rel_brier_blend) + "," +
                   round9(r.x12_rel_ignorance) + "," + round9(r.x12_rel_rps) + "," +
                   round9(r.x12_level_profit) + "," + round9(r.x12_kelly_profit) + "," +
                   round9(r.ou_rel_ignorance) + "," + round9(r.ou_rel_brier) + "," +
                   round9(r.ou_level_profit) + "," + round9(r.ou_kelly_profit) + "\n";
            rows.push_back({{"half_life", num9(r.half_life)},
                            {"shot_rel_ign_raw", num9(r.shot_rel_ign_raw)},
                            {"shot_rel_ign_platt", num9(r.shot_rel_ign_platt)},
                            {"shot_rel_ign_blend", num9(r.shot_rel_ign_blend)},
                            {"shot_rel_brier_blend", num9(r.shot_rel_brier_blend)},
                            {"x12_rel_ignorance", num9(r.x12_rel_ignorance)},
                            {"x12_rel_rps", num9(r.x12_rel_rps)},
                            {"x12_level_profit", num9(r.x12_level_profit)},
                            {"x12_kelly_profit", num9(r.x12_kelly_profit)},
                            {"ou_rel_ignorance", num9(r.ou_rel_ignorance)},
                            {"ou_rel_brier", num9(r.ou_rel_brier)},
                            {"ou_level_profit", num9(r.ou_level_profit)},
                            {"ou_kelly_profit", num9(r.ou_kelly_profit)}});
        }
        const auto dir = std::filesystem::path(config.output_dir);
        const std::string csv_path = (dir / "sweep.csv").string();
        const std::string json_path = (dir / "sweep.json").string();
        write_text(csv_path, csv);
        write_text(json_path, ordered_json{{"rows", rows}}.dump(2) + "\n");
        sweep.output_files.push_back(csv_path);
        sweep.output_files.push_back(json_path);
    }
    return sweep;
}

}  // namespace shotcast
