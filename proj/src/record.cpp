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

#include "pkcsbench/record.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "json.hpp"
#include "pkcsbench/bytes.hpp"
#include "pkcsbench/wire.hpp"

namespace pkcsbench {

using ordered_json = nlohmann::ordered_json;

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string format_timestamp(std::int64_t ms) {
  std::int64_t secs = ms / 1000;
  std::int64_t frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    --secs;
  }
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(frac));
  return buf;
}

std::optional<std::int64_t> parse_timestamp(std::string_view text) {
  std::tm tm{};
  int millis = 0;
  char z = 0;
  const std::string s(text);
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3d%c", &tm.tm_year, &tm.tm_mon,
                  &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &millis, &z) != 8 ||
      z != 'Z' || s.size() != 24) {
    return std::nullopt;
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return static_cast<std::int64_t>(timegm(&tm)) * 1000 + millis;
}

std::string to_json_line(const InputRecord& r) {
  ordered_json j;
  j["timestamp"] = format_timestamp(r.timestamp_ms);
  j["campaign_id"] = r.campaign_id;
  j["hex"] = r.hex;
  j["valid"] = r.valid;
  j["reasons"] = r.reasons;
  j["crashed"] = r.crashed;
  if (r.status) j["status"] = *r.status;
  if (r.wire_hex) j["wire_hex"] = *r.wire_hex;
  return j.dump();
}

InputRecord record_from_json_line(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw LogFormatError(std::string("malformed JSON record: ") + e.what());
  }
  try {
    InputRecord r;
    const auto ts = parse_timestamp(j.at("timestamp").get<std::string>());
    if (!ts) throw LogFormatError("bad timestamp");
    r.timestamp_ms = *ts;
    r.campaign_id = j.at("campaign_id").get<std::string>();
    r.hex = j.at("hex").get<std::string>();
    r.valid = j.at("valid").get<bool>();
    r.reasons = j.at("reasons").get<std::vector<std::string>>();
    r.crashed = j.at("crashed").get<bool>();
    if (j.contains("status")) r.status = j["status"].get<std::int64_t>();
    if (j.contains("wire_hex")) r.wire_hex = j["wire_hex"].get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw LogFormatError(std::string("record missing or mistyped field: ") + e.what());
  }
}

std::vector<InputRecord> read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LogFormatError("cannot open log " + path.string());
  std::vector<InputRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json_line(line));
    } catch (const LogFormatError& e) {
      throw LogFormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

bool verdict_reproduces(const InputRecord& r, const OracleParams& params) {
  if (r.wire_hex) {
    const auto payload = from_hex(*r.wire_hex);
    if (!payload) return false;
    const auto msg = decode_wire(std::string_view(reinterpret_cast<const char*>(payload->data()),
                                                  payload->size()));
    return !msg.em && !r.valid && r.reasons == std::vector<std::string>{"WIRE_DECODE_ERROR"};
  }
  const auto bytes = from_hex(r.hex);
  if (!bytes) return false;
  const Verdict v = validate(*bytes, params);
  return v.valid() == r.valid && v.reason_names() == r.reasons;
}

}  // namespace pkcsbench
