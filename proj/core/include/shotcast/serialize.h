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

#include <string>

#include "shotcast/gap.h"
#include "shotcast/ingest.h"
#include "shotcast/shot_model.h"

namespace shotcast {

/// Report float policy: 9 significant digits, so equal values print as equal
/// bytes everywhere.
std::string round9(double value);

// Checkpoint round-trips. Numbers are stored losslessly; a parse failure
// throws std::runtime_error (callers treat that as a corrupt cache and
// refit).
std::string to_json(const GapState& state);
GapState gap_state_from_json(const std::string& text);

std::string to_json(const ShotModelParams& params);
ShotModelParams shot_model_from_json(const std::string& text);

std::string to_json(const ParseDiagnostics& diagnostics);

}  // namespace shotcast
