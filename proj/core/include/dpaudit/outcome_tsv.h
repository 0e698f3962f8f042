// Copyright 2026 The dpaudit Authors
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

// Outcome files: a header line "model_id\ttrial_id\tb\tb_hat" followed by
// one record per line as ASCII decimal integers, each line ending in '\n'.

#ifndef DPAUDIT_OUTCOME_TSV_H_
#define DPAUDIT_OUTCOME_TSV_H_

#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpaudit/rate_model.h"

namespace dpaudit {

inline constexpr char kOutcomeTsvHeader[] =
    "model_id\ttrial_id\tb\tb_hat";

absl::Status WriteOutcomeTsv(std::span<const OutcomeRecord> records,
                             std::ostream& out);

// Errors name the offending 1-based line number.
absl::StatusOr<std::vector<OutcomeRecord>> ReadOutcomeTsv(std::istream& in);

}  // namespace dpaudit

#endif  // DPAUDIT_OUTCOME_TSV_H_
