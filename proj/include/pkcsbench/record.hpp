// Copyright 2026 The pkcsbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Campaign log records. One JSON object per line:
//
//   {"timestamp":"2026-01-02T03:04:05.678Z","campaign_id":"c1",
//    "hex":"0001ff...","valid":false,"reasons":["PS_TOO_SHORT"],
//    "crashed":false}
//
// Optional keys: "status" (non-crash status sent by the harness) and
// "wire_hex" (raw payload bytes, only on WIRE_DECODE_ERROR records).

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pkcsbench/pkcs1.hpp"

namespace pkcsbench {

class LogFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputRecord {
  std::int64_t timestamp_ms = 0;  // Unix epoch, UTC
  std::string hex;
  bool valid = false;
  std::vector<std::string> reasons;
  bool crashed = false;
  std::string campaign_id;
  std::optional<std::int64_t> status;
  std::optional<std::string> wire_hex;

  bool operator==(const InputRecord&) const = default;
};

std::int64_t now_ms();

// ISO 8601 UTC with milliseconds, e.g. "2026-01-02T03:04:05.678Z".
std::string format_timestamp(std::int64_t ms);
std::optional<std::int64_t> parse_timestamp(std::string_view text);

// No trailing newline.
std::string to_json_line(const InputRecord& record);
InputRecord record_from_json_line(std::string_view line);

// Skips blank lines. Throws LogFormatError naming the line number.
std::vector<InputRecord> read_log(const std::filesystem::path& path);

// True iff re-running the oracle (or the wire decoder, for decode-error
// records) on the logged input yields the logged verdict.
bool verdict_reproduces(const InputRecord& record, const OracleParams& params);

}  // namespace pkcsbench
