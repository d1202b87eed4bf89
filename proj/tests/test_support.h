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

#include <unistd.h>

#include <filesystem>
#include <optional>
#include <string>

#include "shotcast/types.h"

namespace shotcast::testing {

inline MatchRecord make_match(const std::string& league, const std::string& season,
                              Date date, const std::string& home,
                              const std::string& away, int hg, int ag,
                              std::optional<int> hs = std::nullopt,
                              std::optional<int> as = std::nullopt,
                              int source_row = 0) {
    MatchRecord m;
    m.league_id = league;
    m.season_id = season;
    m.date = date;
    m.home_team = home;
    m.away_team = away;
    m.home_goals = hg;
    m.away_goals = ag;
    m.home_shots = hs;
    m.away_shots = as;
    m.outcome = outcome_from_goals(hg, ag);
    m.source_row = source_row;
    return m;
}

// Unique scratch directory removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("shotcast_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str() const { return path_.string(); }
    std::filesystem::path path() const { return path_; }

  private:
    std::filesystem::path path_;
};

}  // namespace shotcast::testing
