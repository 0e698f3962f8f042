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

#include "dpaudit/outcome_tsv.h"

#include <string>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"

namespace dpaudit {

absl::Status WriteOutcomeTsv(std::span<const OutcomeRecord> records,
                             std::ostream& out) {
  out << kOutcomeTsvHeader << '\n';
  for (const OutcomeRecord& r : records) {
    out << r.model_id << '\t' << r.trial_id << '\t' << r.b << '\t' << r.b_hat
        << '\n';
  }
  if (!out) return absl::DataLossError("failed to write outcome records");
  return absl::OkStatus();
}

absl::StatusOr<std::vector<OutcomeRecord>> ReadOutcomeTsv(std::istream& in) {
  std::vector<OutcomeRecord> records;
  std::string line;
  int64_t line_number = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view view = absl::StripSuffix(line, "\r");
    if (!saw_header) {
      if (view != kOutcomeTsvHeader) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_number, ": expected header '", kOutcomeTsvHeader,
            "'"));
      }
      saw_header = true;
      continue;
    }
    if (view.empty()) continue;
    const std::vector<absl::string_view> fields = absl::StrSplit(view, '\t');
    if (fields.size() != 4) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": expected 4 tab-separated fields, got ",
          fields.size()));
    }
    int64_t values[4];
    for (int i = 0; i < 4; ++i) {
      if (!absl::SimpleAtoi(fields[i], &values[i])) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_number, ": field ", i + 1, " is not an integer"));
      }
    }
    if (values[0] < 0 || values[1] < 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": ids must be nonnegative"));
    }
    if ((values[2] != 0 && values[2] != 1) ||
        (values[3] != 0 && values[3] != 1)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": b and b_hat must be 0 or 1"));
    }
    records.push_back({values[0], values[1], static_cast<int>(values[2]),
                       static_cast<int>(values[3])});
  }
  if (!saw_header) {
    return absl::InvalidArgumentError("line 1: missing header");
  }
  return records;
}

}  // namespace dpaudit
