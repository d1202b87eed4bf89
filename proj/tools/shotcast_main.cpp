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
//
// Command-line front end. Subcommands: ingest, fit-gap, backtest, sweep,
// report. Options load from flags, a TOML or JSON config file, and the
// SHOTCAST_DATA_DIR environment variable; explicit flags win over the
// environment, which wins over the file. Exit codes: 0 success, 1 bad
// configuration, 2 unusable data.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shotcast/gap.h"
#include "shotcast/ingest.h"
#include "shotcast/pipeline.h"
#include "shotcast/serialize.h"

using namespace shotcast;
using nlohmann::json;

namespace {

// One config reader for both accepted formats: a file whose first
// non-blank character is '{' parses as a flat JSON object, anything else as
// TOML. Keys are option long names; snake_case aliases are registered on
// every option so config keys can mirror the field names.
class DualFormatConfig : public CLI::ConfigTOML {
  public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::string text{std::istreambuf_iterator<char>(input),
                         std::istreambuf_iterator<char>()};
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') return from_json(text);
        std::istringstream stream(text);
        return CLI::ConfigTOML::from_config(stream);
    }

  private:
    static std::vector<CLI::ConfigItem> from_json(const std::string& text) {
        json parsed;
        try {
            parsed = json::parse(text);
        } catch (const json::exception& e) {
            throw CLI::ConfigError(std::string("config file JSON: ") + e.what());
        }
        if (!parsed.is_object())
            throw CLI::ConfigError("config file JSON must be a flat object");
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : parsed.items()) {
            CLI::ConfigItem item;
            item.name = key;
            auto add_scalar = [&item](const json& v) {
                if (v.is_string()) {
                    item.inputs.push_back(v.get<std::string>());
                } else if (v.is_structured()) {
                    throw CLI::ConfigError("config file JSON must be a flat object");
                } else {
                    item.inputs.push_back(v.dump());
                }
            };
            if (value.is_array()) {
                for (const auto& element : value) add_scalar(element);
            } else {
                add_scalar(value);
            }
            items.push_back(std::move(item));
        }
        return items;
    }
};

struct CliOptions {
    RunConfig run;
    std::vector<std::string> seasons;  // ingest and fit-gap only
    bool data_dir_on_command_line = false;
};

const std::map<std::string, Calibrator> kCalibratorNames = {
    {"blend", Calibrator::Blend},
    {"platt", Calibrator::Platt},
    {"none", Calibrator::None},
};

const std::map<std::string, KellyNumerator> kKellyNames = {
    {"standard", KellyNumerator::Standard},
    {"as-printed", KellyNumerator::AsPrinted},
    {"as_printed", KellyNumerator::AsPrinted},
};

// Shared options live on the top-level app because config files are only
// processed there; subcommands with fallthrough still accept these flags
// after the subcommand name.
void add_data_options(CLI::App* cmd, CliOptions& options) {
    cmd->add_option("--data-dir,--data_dir,-d", options.run.data_dir,
                    "Dataset root laid out as <dir>/<season>/<division>.csv");
    cmd->add_option("--leagues", options.run.leagues,
                    "Division codes to include (default: all)")
        ->delimiter(',');
    cmd->add_option("--output-dir,--output_dir,-o", options.run.output_dir,
                    "Directory for CSV/JSON outputs (default: none written)");
    cmd->set_config("--config", "", "TOML or JSON config file; flags win")
        ->check(CLI::ExistingFile);
    cmd->config_formatter(std::make_shared<DualFormatConfig>());
}

void add_seasons_option(CLI::App* cmd, CliOptions& options) {
    cmd->add_option("--seasons", options.seasons,
                    "Season directories to include (default: all)")
        ->delimiter(',');
}

void add_run_options(CLI::App* cmd, CliOptions& options) {
    cmd->add_option("--half-life,--half_life", options.run.half_life,
                    "Likelihood weight half life in days")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--half-life-grid,--half_life_grid,--grid", options.run.half_life_grid,
                    "Half-life grid for the sweep")
        ->delimiter(',');
    cmd->add_option("--calibrator", options.run.calibrator,
                    "Shot-forecast recalibration: blend, platt, or none")
        ->transform(CLI::CheckedTransformer(kCalibratorNames, CLI::ignore_case));
    cmd->add_flag("--include-odds-predictor,--include_odds_predictor",
                  options.run.include_odds_predictor,
                  "Add the odds-implied probability to the outcome regressions");
    cmd->add_option("--burn-in,--burn_in_threshold", options.run.burn_in_threshold,
                    "Season matches a team must have played to be scored")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--market-1x2,--market_1x2", options.run.market_1x2,
                    "Evaluate the match outcome market (default on)");
    cmd->add_option("--market-ou25,--market_ou25", options.run.market_ou25,
                    "Evaluate the over/under 2.5 market (default on)");
    cmd->add_option("--seed", options.run.seed, "Seed for consistency-bar resampling");
    cmd->add_option("--cache-dir,--cache_dir", options.run.cache_dir,
                    "Directory for fitted-model checkpoints");
    cmd->add_option("--kelly,--kelly_numerator", options.run.kelly_numerator,
                    "Kelly numerator: standard or as-printed")
        ->transform(CLI::CheckedTransformer(kKellyNames, CLI::ignore_case));
    cmd->add_option("--eval-start-season,--eval_start_season",
                    options.run.eval_start_season,
                    "First season scored per league (default: second with shots)");
    cmd->add_flag("--audit", options.run.audit,
                  "Recompute every 1000th forecast from scratch and compare");
    cmd->add_option("--reliability-bins,--reliability_bins", options.run.reliability_bins,
                    "Bins in the reliability diagrams")
        ->check(CLI::Range(2, 100));
}

// The environment overrides the config file but not an explicit flag, so an
// env-supplied directory must not be clobbered by the file. CLI11 applies
// the file first, which is why the flag presence is checked on raw argv.
bool flag_on_command_line(int argc, char** argv, const std::vector<std::string>& names) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        for (const auto& name : names)
            if (arg == name || arg.rfind(name + "=", 0) == 0) return true;
    }
    return false;
}

void apply_data_dir_env(CliOptions& options) {
    if (options.data_dir_on_command_line) return;
    const char* env = std::getenv("SHOTCAST_DATA_DIR");
    if (env != nullptr && *env != '\0') options.run.data_dir = env;
}

Dataset load_or_die(const CliOptions& options) {
    if (options.run.data_dir.empty())
        throw ConfigError("data_dir is required (flag, config file, or SHOTCAST_DATA_DIR)");
    try {
        LoadOptions load;
        load.leagues = options.run.leagues;
        load.seasons = options.seasons;
        return load_dataset(options.run.data_dir, load);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
}

void write_text(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << text;
}

int run_ingest(const CliOptions& options) {
    const Dataset dataset = load_or_die(options);
    if (dataset.matches.empty()) throw DataError("no matches in the selected files");

    long with_shots = 0;
    long with_1x2 = 0;
    long with_ou = 0;
    std::map<std::string, long> per_league;
    for (const auto& m : dataset.matches) {
        if (m.has_shots()) ++with_shots;
        if (m.odds_1x2) ++with_1x2;
        if (m.odds_ou25) ++with_ou;
        ++per_league[m.league_id];
    }
    json summary{{"matches_total", static_cast<long>(dataset.matches.size())},
                 {"matches_with_shots", with_shots},
                 {"matches_with_1x2_odds", with_1x2},
                 {"matches_with_ou25_odds", with_ou},
                 {"per_league", per_league},
                 {"diagnostics", json::parse(to_json(dataset.diagnostics))}};
    const std::string text = summary.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!options.run.output_dir.empty())
        write_text(options.run.output_dir, "ingest.json", text);
    return 0;
}

int run_fit_gap(const CliOptions& options) {
    Dataset dataset = load_or_die(options);
    if (dataset.matches.empty()) throw DataError("no matches in the selected files");
    sort_matches(dataset.matches);

    json table = json::array();
    std::printf("%-8s %10s %10s %10s %12s  %s\n", "league", "lambda", "phi1", "phi2",
                "mae", "note");
    for (size_t begin = 0; begin < dataset.matches.size();) {
        size_t end = begin;
        const std::string& league = dataset.matches[begin].league_id;
        while (end < dataset.matches.size() && dataset.matches[end].league_id == league)
            ++end;
        const std::vector<MatchRecord> league_matches(dataset.matches.begin() + begin,
                                                      dataset.matches.begin() + end);
        const GapFitResult fit = fit_gap_params(league_matches);
        const char* note = fit.used_defaults ? "defaults (thin data)"
                                             : (fit.converged ? "" : "not converged");
        std::printf("%-8s %10s %10s %10s %12s  %s\n", league.c_str(),
                    round9(fit.params.lambda).c_str(), round9(fit.params.phi1).c_str(),
                    round9(fit.params.phi2).c_str(), round9(fit.objective).c_str(), note);
        table.push_back({{"league", league},
                         {"lambda", fit.params.lambda},
                         {"phi1", fit.params.phi1},
                         {"phi2", fit.params.phi2},
                         {"mae", fit.objective},
                         {"converged", fit.converged},
                         {"used_defaults", fit.used_defaults}});
        begin = end;
    }
    if (!options.run.output_dir.empty())
        write_text(options.run.output_dir, "fit_gap.json", table.dump(2) + "\n");
    return 0;
}

void print_market(const char* name, const MarketEvaluation& market) {
    std::printf("%s over %ld matches (skipped %ld without odds)\n", name,
                market.model.count, market.skipped_missing_odds);
    std::printf("  mean ignorance %s vs climatology %s (rel %s)\n",
                round9(market.model.mean_ignorance).c_str(),
                round9(market.climatology.mean_ignorance).c_str(),
                round9(market.rel_ignorance).c_str());
    std::printf("  mean rps %s (rel %s), mean brier %s (rel %s)\n",
                round9(market.model.mean_rps).c_str(), round9(market.rel_rps).c_str(),
                round9(market.model.mean_brier).c_str(), round9(market.rel_brier).c_str());
    std::printf("  level stakes: %ld bets, profit %s; kelly: %ld bets, profit %s\n",
                market.level_stakes.bets_placed,
                round9(market.level_stakes.total_profit).c_str(),
                market.kelly.bets_placed, round9(market.kelly.total_profit).c_str());
}

void print_report(const RunReport& report) {
    std::printf("matches: %ld total, %ld with shots, %ld scored "
                "(%ld burn-in excluded, %ld without a model)\n",
                report.matches_total, report.matches_with_shots, report.matches_scored,
                report.burn_in_excluded, report.skipped_no_model);
    const ShotEvaluation& shot = report.shot;
    std::printf("shot forecasts: %ld sides, %ld shots\n", shot.samples, shot.shots);
    std::printf("  ignorance raw %s, platt %s, blend %s, climatology %s\n",
                round9(shot.ign_raw).c_str(), round9(shot.ign_platt).c_str(),
                round9(shot.ign_blend).c_str(), round9(shot.ign_climatology).c_str());
    std::printf("  brier raw %s, blend %s, climatology %s\n",
                round9(shot.brier_raw).c_str(), round9(shot.brier_blend).c_str(),
                round9(shot.brier_climatology).c_str());
    if (!shot.calibrators_active)
        std::printf("  calibrators inactive: too little scored history\n");
    if (report.match_1x2) print_market("match 1X2", *report.match_1x2);
    if (report.over_under) print_market("over/under 2.5", *report.over_under);
    if (report.audit_checked > 0)
        std::printf("audit: %ld forecasts recomputed, max diff %s\n", report.audit_checked,
                    round9(report.audit_max_diff).c_str());
    for (const auto& warning : report.warnings)
        std::printf("warning: %s\n", warning.c_str());
    for (const auto& file : report.output_files)
        std::printf("wrote %s\n", file.c_str());
}

int run_backtest_cmd(const CliOptions& options) {
    const RunReport report = run_backtest(options.run);
    print_report(report);
    return 0;
}

int run_sweep_cmd(const CliOptions& options) {
    const SweepReport sweep = half_life_sweep(options.run);
    std::printf("%8s %14s %14s %14s %12s %12s %12s %12s\n", "H", "shot_rel_raw",
                "shot_rel_blend", "x12_rel_ign", "x12_level", "x12_kelly", "ou_rel_ign",
                "ou_kelly");
    for (const auto& row : sweep.rows)
        std::printf("%8s %14s %14s %14s %12s %12s %12s %12s\n",
                    round9(row.half_life).c_str(), round9(row.shot_rel_ign_raw).c_str(),
                    round9(row.shot_rel_ign_blend).c_str(),
                    round9(row.x12_rel_ignorance).c_str(),
                    round9(row.x12_level_profit).c_str(), round9(row.x12_kelly_profit).c_str(),
                    round9(row.ou_rel_ignorance).c_str(), round9(row.ou_kelly_profit).c_str());
    for (const auto& file : sweep.output_files) std::printf("wrote %s\n", file.c_str());
    return 0;
}

// Renders the evaluation summary a previous backtest wrote.
int run_report_cmd(const CliOptions& options) {
    if (options.run.output_dir.empty())
        throw ConfigError("report needs --output-dir pointing at a backtest output");
    const std::string path =
        (std::filesystem::path(options.run.output_dir) / "evaluation.json").string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }

    RunReport report;
    try {
        const json& counts = j.at("counts");
        report.matches_total = counts.at("matches_total").get<long>();
        report.matches_with_shots = counts.at("matches_with_shots").get<long>();
        report.matches_scored = counts.at("matches_scored").get<long>();
        report.burn_in_excluded = counts.at("burn_in_excluded").get<long>();
        report.skipped_no_model = counts.at("skipped_no_model").get<long>();
        const json& shot = j.at("shot_forecasts");
        report.shot.samples = shot.at("samples").get<long>();
        report.shot.shots = shot.at("shots").get<long>();
        const json& ign = shot.at("mean_ignorance");
        report.shot.ign_raw = ign.at("raw").get<double>();
        report.shot.ign_platt = ign.at("platt").get<double>();
        report.shot.ign_blend = ign.at("blend").get<double>();
        report.shot.ign_climatology = ign.at("climatology").get<double>();
        const json& brier = shot.at("mean_brier");
        report.shot.brier_raw = brier.at("raw").get<double>();
        report.shot.brier_blend = brier.at("blend").get<double>();
        report.shot.brier_climatology = brier.at("climatology").get<double>();
        report.shot.calibrators_active = shot.at("calibrators_active").get<bool>();
        auto read_market = [](const json& m) {
            MarketEvaluation market;
            market.model.count = m.at("model").at("count").get<long>();
            market.model.mean_ignorance = m.at("model").at("mean_ignorance").get<double>();
            market.model.mean_brier = m.at("model").at("mean_brier").get<double>();
            market.model.mean_rps = m.at("model").at("mean_rps").get<double>();
            market.climatology.mean_ignorance =
                m.at("climatology").at("mean_ignorance").get<double>();
            market.rel_ignorance = m.at("relative").at("ignorance").get<double>();
            market.rel_brier = m.at("relative").at("brier").get<double>();
            market.rel_rps = m.at("relative").at("rps").get<double>();
            market.skipped_missing_odds = m.at("skipped_missing_odds").get<long>();
            const json& betting = m.at("betting");
            market.level_stakes.bets_placed =
                betting.at("level_stakes").at("bets_placed").get<long>();
            market.level_stakes.total_profit =
                betting.at("level_stakes").at("total_profit").get<double>();
            market.kelly.bets_placed = betting.at("kelly").at("bets_placed").get<long>();
            market.kelly.total_profit = betting.at("kelly").at("total_profit").get<double>();
            return market;
        };
        if (j.contains("match_1x2")) report.match_1x2 = read_market(j.at("match_1x2"));
        if (j.contains("over_under_25"))
            report.over_under = read_market(j.at("over_under_25"));
        report.audit_checked = j.at("audit").at("checked").get<long>();
        report.audit_max_diff = j.at("audit").at("max_abs_diff").get<double>();
        report.warnings = j.at("warnings").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    print_report(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backtests probabilistic shot-success and match-outcome forecasts "
                 "over historical league CSVs"};
    app.require_subcommand(1);
    app.fallthrough(true);
    CliOptions options;
    add_data_options(&app, options);
    add_run_options(&app, options);

    CLI::App* ingest = app.add_subcommand("ingest", "Parse the dataset and report tallies");
    add_seasons_option(ingest, options);

    CLI::App* fit_gap = app.add_subcommand("fit-gap", "Fit shot-count rating parameters per league");
    add_seasons_option(fit_gap, options);

    CLI::App* backtest = app.add_subcommand("backtest", "Run the chronological backtest");
    CLI::App* sweep = app.add_subcommand("sweep", "Backtest across the half-life grid");
    CLI::App* report = app.add_subcommand("report", "Re-render a written evaluation summary");

    options.data_dir_on_command_line =
        flag_on_command_line(argc, argv, {"--data-dir", "--data_dir", "-d"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        apply_data_dir_env(options);
        options.run.validate();
        if (ingest->parsed()) return run_ingest(options);
        if (fit_gap->parsed()) return run_fit_gap(options);
        if (backtest->parsed()) return run_backtest_cmd(options);
        if (sweep->parsed()) return run_sweep_cmd(options);
        if (report->parsed()) return run_report_cmd(options);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
