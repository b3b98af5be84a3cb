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

#include "pkcsbench/controller.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <sys/stat.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "pkcsbench/record.hpp"
#include "pkcsbench/validator_service.hpp"
#include "test_support.hpp"

namespace pkcsbench {
namespace {

using ::testing::HasSubstr;
using testing::TempDir;

std::string config_error(std::string_view toml) {
  try {
    parse_config(toml, "/base");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<no error>";
}

void write_script(const std::filesystem::path& p, const std::string& body) {
  {
    std::ofstream f(p);
    f << "#!/bin/bash\n" << body;
  }
  ::chmod(p.c_str(), 0755);
}

CampaignConfig small_campaign(const TempDir& dir, std::string id, std::size_t count) {
  CampaignConfig c;
  c.campaign_id = id;
  c.fuzzer = BuiltinFuzzer{GeneratorStrategy::kContextFree, {}};
  c.subject = SubjectPolicy::kStrict;
  c.duration = 60;
  c.max_inputs = count;
  c.oracle = {12, 8};
  c.log_path = dir / (id + ".jsonl");
  c.rng_seed = 5;
  return c;
}

constexpr std::string_view kFull = R"(
[[campaign]]
campaign_id = "ca"
fuzzer = "constraint_aware"
subject = "strict"
duration = 2.5
validator_port = 0
log_path = "logs/ca.jsonl"
rng_seed = 3
max_inputs = 10

[[campaign]]
campaign_id = "mu"
subject = "crashy"
duration = 60
validator_port = 9123
log_path = "/abs/mu.jsonl"
crash_trigger = 0x7f
seed_dir = "seeds"
[campaign.fuzzer]
strategy = "mutation"
deterministic_stage_enabled = false
havoc_stacking_max = 4
seeds = ["0001 ff00"]
[campaign.oracle]
mod_len = 12
min_ps_len = 8

[[campaign]]
campaign_id = "ext"
subject = "./harness/run.sh"
duration = 1
validator_port = 0
log_path = "ext.jsonl"
out_dir = "out"
[campaign.fuzzer]
executable = "/usr/bin/afl-fuzz"
args = ["-i", "{seed_dir}", "--", "{subject}", "@@", "{port}"]
)";

TEST(ConfigTest, ParsesAllFields) {
  ::unsetenv("FUZZEVAL_LOG_DIR");
  const auto cs = parse_config(kFull, "/base");
  ASSERT_EQ(cs.size(), 3u);
  EXPECT_EQ(cs[0].campaign_id, "ca");
  EXPECT_EQ(std::get<BuiltinFuzzer>(cs[0].fuzzer).strategy, GeneratorStrategy::kConstraintAware);
  EXPECT_EQ(std::get<SubjectPolicy>(cs[0].subject), SubjectPolicy::kStrict);
  EXPECT_DOUBLE_EQ(cs[0].duration, 2.5);
  EXPECT_EQ(cs[0].log_path, "/base/logs/ca.jsonl");
  EXPECT_EQ(cs[0].max_inputs, 10u);
  EXPECT_EQ(cs[0].oracle.mod_len, 256u);

  const auto& mu = std::get<BuiltinFuzzer>(cs[1].fuzzer);
  EXPECT_EQ(mu.strategy, GeneratorStrategy::kMutation);
  EXPECT_FALSE(mu.mutation.deterministic_stage_enabled);
  EXPECT_EQ(mu.mutation.havoc_stacking_max, 4u);
  EXPECT_EQ(mu.mutation.seed_corpus, (std::vector<Bytes>{{0x00, 0x01, 0xff, 0x00}}));
  EXPECT_EQ(cs[1].crash_trigger, 0x7f);
  EXPECT_EQ(cs[1].validator_port, 9123);
  EXPECT_EQ(cs[1].log_path, "/abs/mu.jsonl");
  EXPECT_EQ(cs[1].seed_dir, std::filesystem::path("/base/seeds"));
  EXPECT_EQ(cs[1].oracle.mod_len, 12u);

  const auto& ext = std::get<ExternalFuzzer>(cs[2].fuzzer);
  EXPECT_EQ(ext.executable, "/usr/bin/afl-fuzz");
  EXPECT_EQ(ext.args.size(), 6u);
  EXPECT_EQ(std::get<std::filesystem::path>(cs[2].subject), "/base/./harness/run.sh");
  EXPECT_EQ(cs[2].out_dir, std::filesystem::path("/base/out"));
}

TEST(ConfigTest, LogDirEnvironment) {
  ::setenv("FUZZEVAL_LOG_DIR", "/var/fe", 1);
  const auto cs = parse_config(kFull, "/base");
  ::unsetenv("FUZZEVAL_LOG_DIR");
  EXPECT_EQ(cs[0].log_path, "/var/fe/logs/ca.jsonl");
  EXPECT_EQ(cs[1].log_path, "/abs/mu.jsonl");
}

constexpr std::string_view kHead = R"([[campaign]]
campaign_id = "c"
fuzzer = "context_free"
subject = "strict"
validator_port = 0
log_path = "c.jsonl"
)";

TEST(ConfigTest, ErrorsNameTheField) {
  EXPECT_EQ(config_error(std::string(kHead) + "duration = -1\n"),
            "campaign[0].duration: must be positive");
  EXPECT_EQ(config_error(std::string(kHead) + "duration = 0\n"),
            "campaign[0].duration: must be positive");
  EXPECT_EQ(config_error(kHead), "campaign[0].duration: missing required field");
  EXPECT_EQ(config_error(std::string(kHead) + "duration = \"1\"\n"),
            "campaign[0].duration: expected a number");
  EXPECT_EQ(config_error(std::string(kHead) + "duration = 1\nspeed = 2\n"),
            "campaign[0].speed: unknown field");
  EXPECT_THAT(config_error("[[campaign]]\ncampaign_id = \"c\"\nfuzzer = \"peach\"\n"),
              HasSubstr("campaign[0].fuzzer: unknown built-in strategy 'peach'"));
  EXPECT_THAT(config_error(std::string(kHead) + "duration = 1\n[campaign.oracle]\nmod_len = 10\n"),
              HasSubstr("campaign[0].oracle.mod_len"));
  EXPECT_THAT(config_error(std::string(kHead) + "duration = 1\n[campaign.oracle]\nbits = 10\n"),
              HasSubstr("campaign[0].oracle.bits: unknown field"));
  EXPECT_THAT(config_error("x = 1\n"), HasSubstr("x: unknown top-level field"));
  EXPECT_THAT(config_error(""), HasSubstr("campaign"));
  EXPECT_THAT(config_error("[[campaign]\n"), HasSubstr("TOML syntax error at line 1"));
  EXPECT_THAT(config_error(std::string(kHead) + "duration = 1\n" + std::string(kHead) + "duration = 1\n"),
              HasSubstr("campaign[1].campaign_id: duplicate id 'c'"));
}

TEST(ConfigTest, SubjectAndMutationErrors) {
  const std::string base = R"([[campaign]]
campaign_id = "c"
duration = 1
validator_port = 0
log_path = "c.jsonl"
)";
  EXPECT_THAT(config_error(base + "fuzzer = \"mutation\"\nsubject = \"strict\"\n"),
              HasSubstr("campaign[0].seed_dir"));
  EXPECT_THAT(config_error(base + "fuzzer = \"context_free\"\nsubject = \"openssl\"\n"),
              HasSubstr("campaign[0].subject: unknown subject 'openssl'"));
  EXPECT_THAT(config_error(base + "fuzzer = \"context_free\"\nsubject = \"strict\"\ncrash_trigger = 256\n"),
              HasSubstr("campaign[0].crash_trigger"));
  EXPECT_THAT(config_error(base + "fuzzer = \"context_free\"\nsubject = \"strict\"\nvalidator_port = 1\nvalidator_port = 2\n"),
              HasSubstr("TOML syntax error"));
  EXPECT_THAT(config_error(base + "subject = \"strict\"\n[campaign.fuzzer]\nstrategy = \"mutation\"\nseeds = [\"0g\"]\n"),
              HasSubstr("campaign[0].fuzzer.seeds: seed is not valid hex"));
}

TEST(ConfigTest, PortRange) {
  const std::string text = R"([[campaign]]
campaign_id = "c"
fuzzer = "context_free"
subject = "strict"
duration = 1
log_path = "c.jsonl"
validator_port = 70000
)";
  EXPECT_EQ(config_error(text), "campaign[0].validator_port: must be in 0..65535");
}

TEST(CampaignTest, CountBoundedReproducible) {
  TempDir dir("camp");
  auto c = small_campaign(dir, "cf", 300);
  const auto s1 = run_campaign(c);
  ASSERT_TRUE(s1.completed) << s1.error;
  EXPECT_EQ(s1.records_written, 300u);
  const auto first = read_log(c.log_path);
  ASSERT_EQ(first.size(), 300u);
  for (const auto& r : first) {
    EXPECT_TRUE(verdict_reproduces(r, c.oracle));
    EXPECT_EQ(r.campaign_id, "cf");
  }
  EXPECT_EQ(s1.valid_records, static_cast<std::size_t>(std::count_if(
                                  first.begin(), first.end(), [](const auto& r) { return r.valid; })));

  // Rerun truncates the log and reproduces the same input sequence.
  const auto s2 = run_campaign(c);
  const auto second = read_log(c.log_path);
  ASSERT_EQ(second.size(), 300u);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].hex, second[i].hex);
    EXPECT_EQ(first[i].reasons, second[i].reasons);
  }
  EXPECT_GT(s2.throughput, 0.0);
  EXPECT_DOUBLE_EQ(s2.throughput, s2.records_written / s2.wall_seconds);
}

TEST(CampaignTest, DurationBounded) {
  TempDir dir("camp");
  auto c = small_campaign(dir, "dur", 0);
  c.max_inputs.reset();
  c.duration = 2.0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = run_campaign(c);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ASSERT_TRUE(s.completed) << s.error;
  EXPECT_GE(s.wall_seconds, 2.0);
  EXPECT_LE(s.wall_seconds, 2.5);
  EXPECT_LE(elapsed, 3.0);
  EXPECT_GT(s.records_written, 10u);
}

TEST(CampaignTest, MutationFromSeedDir) {
  TempDir dir("camp");
  std::filesystem::create_directories(dir / "seeds");
  std::ofstream(dir / "seeds" / "s1") << std::string("\x00\x01\xff\xff\x00\x41\x41\x41\x41\x41\x41\x41", 12);
  auto c = small_campaign(dir, "mu", 200);
  c.oracle = {12, 2};
  c.fuzzer = BuiltinFuzzer{GeneratorStrategy::kMutation, {}};
  c.seed_dir = dir / "seeds";
  c.subject = SubjectPolicy::kCrashy;
  const auto s = run_campaign(c);
  ASSERT_TRUE(s.completed) << s.error;
  EXPECT_EQ(s.records_written, 200u);
  EXPECT_GT(s.crashed_records, 0u);
  for (const auto& r : read_log(c.log_path)) {
    if (r.crashed) EXPECT_TRUE(r.valid) << r.hex;
  }
}

TEST(CampaignTest, StartupFailuresLeaveNoLog) {
  TempDir dir("camp");
  auto c = small_campaign(dir, "bad", 10);
  c.fuzzer = ExternalFuzzer{dir / "missing-fuzzer", {}};
  EXPECT_THROW(run_campaign(c), CampaignError);
  EXPECT_FALSE(std::filesystem::exists(c.log_path));

  auto k = small_campaign(dir, "nokey", 10);
  k.oracle = {64, 8};
  EXPECT_THROW(run_campaign(k), CampaignError);
  EXPECT_FALSE(std::filesystem::exists(k.log_path));

  ServiceOptions o;
  o.log_path = dir / "holder.jsonl";
  auto holder = ValidatorService::start(o);
  auto p = small_campaign(dir, "busy", 10);
  p.validator_port = holder->port();
  EXPECT_THROW(run_campaign(p), CampaignError);
}

TEST(CampaignTest, RunManyCollisions) {
  TempDir dir("camp");
  auto a = small_campaign(dir, "a", 5);
  auto b = small_campaign(dir, "b", 5);
  a.validator_port = b.validator_port = 9555;
  EXPECT_THROW(run_many({a, b}, 2), ConfigError);
  b.validator_port = 0;
  b.log_path = a.log_path;
  EXPECT_THROW(run_many({a, b}, 2), ConfigError);
  b = small_campaign(dir, "a", 5);
  b.log_path = dir / "other.jsonl";
  EXPECT_THROW(run_many({a, b}, 2), ConfigError);
  EXPECT_THROW(run_many({a}, 0), ConfigError);
}

TEST(CampaignTest, RunManyHonoursParallelism) {
  TempDir dir("camp");
  std::vector<CampaignConfig> cs;
  for (int i = 0; i < 5; ++i) cs.push_back(small_campaign(dir, "p" + std::to_string(i), 150));
  cs[3].fuzzer = ExternalFuzzer{dir / "missing", {}};

  std::atomic<bool> done{false};
  std::atomic<int> peak{0};
  const int base = ValidatorService::live_instances();
  std::thread monitor([&] {
    while (!done) {
      peak = std::max(peak.load(), ValidatorService::live_instances() - base);
      std::this_thread::sleep_for(std::chrono::microseconds(200));
    }
  });
  const auto results = run_many(cs, 2);
  done = true;
  monitor.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
  ASSERT_EQ(results.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(results[i].campaign_id, cs[i].campaign_id);
    if (i == 3) {
      EXPECT_FALSE(results[i].completed);
      EXPECT_THAT(results[i].error, HasSubstr("not found"));
    } else {
      EXPECT_TRUE(results[i].completed) << results[i].error;
      EXPECT_EQ(results[i].records_written, 150u);
    }
  }
  EXPECT_THAT(summary_line(results[0]), HasSubstr("p0: completed records=150"));
  EXPECT_THAT(summary_line(results[3]), HasSubstr("FAILED"));
}

TEST(CampaignTest, ExternalFuzzerIsStoppedAtDeadline) {
  TempDir dir("camp");
  write_script(dir / "fuzz.sh",
               "port=$1\n"
               "for i in 1 2 3; do printf '0001ffffffffffffffff00ab' > /dev/tcp/127.0.0.1/$port; done\n"
               "printf 'zz,-1' > /dev/tcp/127.0.0.1/$port\n"
               "echo \"$2\" > \"$3/args\"\n"
               "sleep 30\n");
  auto c = small_campaign(dir, "ext", 0);
  c.max_inputs.reset();
  c.duration = 1.0;
  c.fuzzer = ExternalFuzzer{dir / "fuzz.sh", {"{port}", "{mod_len}:{campaign_id}", "{out_dir}"}};
  RunOptions opts;
  opts.grace = std::chrono::milliseconds(300);
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = run_campaign(c, opts);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ASSERT_TRUE(s.completed) << s.error;
  EXPECT_LT(elapsed, 5.0);
  EXPECT_EQ(s.records_written, 4u);
  EXPECT_EQ(s.valid_records, 3u);
  EXPECT_EQ(s.crashed_records, 1u);
  std::ifstream args(dir / "ext_out" / "args");
  std::string line;
  std::getline(args, line);
  EXPECT_EQ(line, "12:ext");
}

TEST(CampaignTest, BuiltinFuzzerWithHarnessSubject) {
  TempDir dir("camp");
  write_script(dir / "harness.sh",
               "hex=$(od -An -tx1 -v \"$1\" | tr -d ' \\n')\n"
               "printf '%s' \"$hex\" > /dev/tcp/127.0.0.1/$2\n");
  auto c = small_campaign(dir, "harn", 20);
  c.fuzzer = BuiltinFuzzer{GeneratorStrategy::kConstraintAware, {}};
  c.subject = dir / "harness.sh";
  RunOptions opts;
  opts.grace = std::chrono::milliseconds(200);
  const auto s = run_campaign(c, opts);
  ASSERT_TRUE(s.completed) << s.error;
  EXPECT_EQ(s.records_written, 20u);
  EXPECT_EQ(s.valid_records, 20u);
}

TEST(ConfigTest, LoadConfigResolvesAgainstFileDir) {
  ::unsetenv("FUZZEVAL_LOG_DIR");
  TempDir dir("cfg");
  std::ofstream(dir / "c.toml") << std::string(kHead) << "duration = 1\n";
  const auto cs = load_config(dir / "c.toml");
  EXPECT_EQ(cs[0].log_path, dir / "c.jsonl");
  EXPECT_THROW(load_config(dir / "nope.toml"), ConfigError);
}

}  // namespace
}  // namespace pkcsbench
