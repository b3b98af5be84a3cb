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

// Campaign orchestration. A campaign starts a validator, drives a fuzzer
// against a subject until its duration (or input budget) runs out, then
// shuts the validator down and reports throughput.
//
// Config files are TOML with one [[campaign]] table per campaign:
//
//   [[campaign]]
//   campaign_id    = "ca_strict"
//   fuzzer         = "constraint_aware"   # or a [campaign.fuzzer] table
//   subject        = "strict"             # strict | lenient_ps | crashy | path
//   duration       = 60                   # seconds
//   validator_port = 9000
//   log_path       = "logs/ca_strict.jsonl"
//   rng_seed       = 1
//   max_inputs     = 1000                 # optional input budget
//   seed_dir       = "seeds"              # optional, mutation corpus
//   crash_trigger  = 0x41                 # optional, crashy subject
//   out_dir        = "out"                # optional, external {out_dir}
//
//   [campaign.oracle]                     # optional
//   mod_len    = 256
//   min_ps_len = 8
//
// A fuzzer table is either built in
//
//   [campaign.fuzzer]
//   strategy = "mutation"
//   deterministic_stage_enabled = true
//   havoc_stacking_max = 16
//   seeds = ["0001ffff...00aa"]          # inline hex corpus
//
// or external, with {port} {seed_dir} {out_dir} {subject} {mod_len}
// {campaign_id} substituted into the arguments:
//
//   [campaign.fuzzer]
//   executable = "/usr/local/bin/afl-fuzz"
//   args = ["-i", "{seed_dir}", "-o", "{out_dir}", "--", "{subject}", "@@", "{port}"]

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pkcsbench/generators.hpp"
#include "pkcsbench/pkcs1.hpp"
#include "pkcsbench/subjects.hpp"

namespace pkcsbench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CampaignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BuiltinFuzzer {
  GeneratorStrategy strategy = GeneratorStrategy::kConstraintAware;
  MutationConfig mutation;  // seed_corpus holds the inline seeds
};

struct ExternalFuzzer {
  std::filesystem::path executable;
  std::vector<std::string> args;  // argument template
};

using FuzzerSpec = std::variant<BuiltinFuzzer, ExternalFuzzer>;
// A built-in policy or the path of a harness executable run as
// `<harness> <input_file> <validator_port>`.
using SubjectSpec = std::variant<SubjectPolicy, std::filesystem::path>;

struct CampaignConfig {
  std::string campaign_id;
  FuzzerSpec fuzzer;
  SubjectSpec subject = SubjectPolicy::kStrict;
  double duration = 0.0;  // seconds
  std::optional<std::size_t> max_inputs;
  std::optional<std::filesystem::path> seed_dir;
  std::uint16_t validator_port = 0;  // 0: ephemeral
  OracleParams oracle;
  std::filesystem::path log_path;
  std::uint64_t rng_seed = 0;
  std::uint8_t crash_trigger = kDefaultCrashTrigger;
  std::optional<std::filesystem::path> out_dir;
};

// Relative paths resolve against `base_dir`; log_path against
// $FUZZEVAL_LOG_DIR when that is set. Throws ConfigError naming the field.
std::vector<CampaignConfig> parse_config(std::string_view toml_text,
                                         const std::filesystem::path& base_dir);
std::vector<CampaignConfig> load_config(const std::filesystem::path& path);

// Checks the per-campaign invariants. Throws ConfigError.
void check_config(const CampaignConfig& config);

struct CampaignSummary {
  std::string campaign_id;
  std::size_t records_written = 0;
  std::size_t valid_records = 0;
  std::size_t crashed_records = 0;
  double wall_seconds = 0.0;  // fuzzing interval only
  double throughput = 0.0;    // records_written / wall_seconds
  bool completed = false;
  std::string error;
};

struct RunOptions {
  // Drain time between stopping an external process and shutting the
  // validator down.
  std::chrono::milliseconds grace{2000};
};

// Throws CampaignError on startup failures (missing executable, busy port,
// no key for the modulus) before any record is written.
CampaignSummary run_campaign(const CampaignConfig& config, const RunOptions& options = {});

// Runs up to `parallelism` campaigns at once; results follow input order.
// Throws ConfigError up front when ports, log paths or ids collide. A
// campaign that fails at runtime yields completed = false and its error.
std::vector<CampaignSummary> run_many(const std::vector<CampaignConfig>& configs,
                                      std::size_t parallelism, const RunOptions& options = {});

std::string summary_line(const CampaignSummary& summary);

}  // namespace pkcsbench
