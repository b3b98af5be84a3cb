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

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "pkcsbench/bytes.hpp"
#include "pkcsbench/process.hpp"
#include "pkcsbench/record.hpp"
#include "pkcsbench/rsa.hpp"
#include "pkcsbench/validator_service.hpp"
#include "pkcsbench/wire.hpp"
#include "toml.hpp"

namespace pkcsbench {

namespace fs = std::filesystem;

namespace {

constexpr const char* kLogDirEnv = "FUZZEVAL_LOG_DIR";

// Typed, strict access to one TOML table; every error names the field.
class Fields {
 public:
  Fields(const toml::table& table, std::string prefix) : t_(table), prefix_(std::move(prefix)) {}

  std::string where(std::string_view key) const { return prefix_ + "." + std::string(key); }

  [[noreturn]] void fail(std::string_view key, const std::string& msg) const {
    throw ConfigError(where(key) + ": " + msg);
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (auto&& [k, v] : t_) {
      if (std::find(keys.begin(), keys.end(), k.str()) == keys.end()) {
        throw ConfigError(where(k.str()) + ": unknown field");
      }
    }
  }

  bool has(std::string_view key) const { return t_.contains(key); }
  const toml::node* node(std::string_view key) const { return t_.get(key); }

  std::optional<std::string> str(std::string_view key) const {
    const auto* n = t_.get(key);
    if (!n) return std::nullopt;
    if (!n->is_string()) fail(key, "expected a string");
    return n->value<std::string>();
  }

  std::optional<std::int64_t> integer(std::string_view key) const {
    const auto* n = t_.get(key);
    if (!n) return std::nullopt;
    if (!n->is_integer()) fail(key, "expected an integer");
    return n->value<std::int64_t>();
  }

  std::optional<double> number(std::string_view key) const {
    const auto* n = t_.get(key);
    if (!n) return std::nullopt;
    if (!n->is_number()) fail(key, "expected a number");
    return n->value<double>();
  }

  std::optional<bool> boolean(std::string_view key) const {
    const auto* n = t_.get(key);
    if (!n) return std::nullopt;
    if (!n->is_boolean()) fail(key, "expected a boolean");
    return n->value<bool>();
  }

  std::optional<std::vector<std::string>> strings(std::string_view key) const {
    const auto* n = t_.get(key);
    if (!n) return std::nullopt;
    const auto* arr = n->as_array();
    if (!arr) fail(key, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& el : *arr) {
      if (!el.is_string()) fail(key, "expected an array of strings");
      out.push_back(*el.value<std::string>());
    }
    return out;
  }

  const toml::table* table(std::string_view key) const {
    const auto* n = t_.get(key);
    if (!n) return nullptr;
    if (!n->is_table()) fail(key, "expected a table");
    return n->as_table();
  }

  template <class T>
  T require(std::optional<T> v, std::string_view key) const {
    if (!v) fail(key, "missing required field");
    return *std::move(v);
  }

 private:
  const toml::table& t_;
  std::string prefix_;
};

fs::path resolve(const fs::path& p, const fs::path& base) {
  return p.is_absolute() ? p : base / p;
}

Bytes parse_seed_hex(std::string text, const Fields& f) {
  text.erase(std::remove_if(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
             text.end());
  auto bytes = from_hex(text);
  if (!bytes) f.fail("seeds", "seed is not valid hex");
  return *bytes;
}

FuzzerSpec parse_fuzzer(const Fields& campaign) {
  const auto* node = campaign.node("fuzzer");
  if (!node) campaign.fail("fuzzer", "missing required field");
  if (node->is_string()) {
    const auto name = *node->value<std::string>();
    const auto strategy = strategy_from_name(name);
    if (!strategy) {
      campaign.fail("fuzzer", "unknown built-in strategy '" + name +
                                  "' (use a [fuzzer] table with 'executable' for external fuzzers)");
    }
    return BuiltinFuzzer{*strategy, {}};
  }
  const auto* table = campaign.table("fuzzer");
  const Fields f(*table, campaign.where("fuzzer"));
  if (f.has("executable")) {
    f.allow_only({"executable", "args"});
    ExternalFuzzer ext;
    ext.executable = *f.str("executable");
    ext.args = f.strings("args").value_or(std::vector<std::string>{});
    return ext;
  }
  f.allow_only({"strategy", "deterministic_stage_enabled", "havoc_stacking_max", "seeds"});
  const auto name = f.require(f.str("strategy"), "strategy");
  const auto strategy = strategy_from_name(name);
  if (!strategy) f.fail("strategy", "unknown built-in strategy '" + name + "'");
  BuiltinFuzzer b{*strategy, {}};
  b.mutation.deterministic_stage_enabled = f.boolean("deterministic_stage_enabled").value_or(true);
  if (const auto m = f.integer("havoc_stacking_max")) {
    if (*m <= 0) f.fail("havoc_stacking_max", "must be positive");
    b.mutation.havoc_stacking_max = static_cast<std::size_t>(*m);
  }
  for (auto& s : f.strings("seeds").value_or(std::vector<std::string>{})) {
    b.mutation.seed_corpus.push_back(parse_seed_hex(std::move(s), f));
  }
  return b;
}

CampaignConfig parse_campaign(const toml::table& table, std::size_t index, const fs::path& base) {
  const Fields f(table, "campaign[" + std::to_string(index) + "]");
  f.allow_only({"campaign_id", "fuzzer", "subject", "duration", "seed_dir", "validator_port",
                "oracle", "log_path", "rng_seed", "max_inputs", "crash_trigger", "out_dir"});
  CampaignConfig c;
  c.campaign_id = f.require(f.str("campaign_id"), "campaign_id");
  if (c.campaign_id.empty()) f.fail("campaign_id", "must not be empty");
  c.fuzzer = parse_fuzzer(f);

  const auto subject = f.require(f.str("subject"), "subject");
  if (const auto policy = policy_from_name(subject)) {
    c.subject = *policy;
  } else if (subject.find('/') != std::string::npos) {
    c.subject = resolve(subject, base);
  } else {
    f.fail("subject", "unknown subject '" + subject +
                          "' (strict, lenient_ps, crashy, or a path to a harness)");
  }

  c.duration = f.require(f.number("duration"), "duration");
  if (!(c.duration > 0.0) || !std::isfinite(c.duration)) f.fail("duration", "must be positive");

  const auto port = f.require(f.integer("validator_port"), "validator_port");
  if (port < 0 || port > 65535) f.fail("validator_port", "must be in 0..65535");
  c.validator_port = static_cast<std::uint16_t>(port);

  const fs::path log = f.require(f.str("log_path"), "log_path");
  if (log.empty()) f.fail("log_path", "must not be empty");
  if (log.is_absolute()) {
    c.log_path = log;
  } else if (const char* dir = std::getenv(kLogDirEnv); dir && *dir) {
    c.log_path = fs::path(dir) / log;
  } else {
    c.log_path = base / log;
  }

  if (const auto seed = f.integer("rng_seed")) {
    if (*seed < 0) f.fail("rng_seed", "must be non-negative");
    c.rng_seed = static_cast<std::uint64_t>(*seed);
  }
  if (const auto m = f.integer("max_inputs")) {
    if (*m <= 0) f.fail("max_inputs", "must be positive");
    c.max_inputs = static_cast<std::size_t>(*m);
  }
  if (const auto t = f.integer("crash_trigger")) {
    if (*t < 0 || *t > 255) f.fail("crash_trigger", "must be a byte value 0..255");
    c.crash_trigger = static_cast<std::uint8_t>(*t);
  }
  if (const auto d = f.str("seed_dir")) c.seed_dir = resolve(*d, base);
  if (const auto d = f.str("out_dir")) c.out_dir = resolve(*d, base);

  if (const auto* oracle = f.table("oracle")) {
    const Fields o(*oracle, f.where("oracle"));
    o.allow_only({"mod_len", "min_ps_len"});
    if (const auto m = o.integer("mod_len")) {
      if (*m <= 0) o.fail("mod_len", "must be positive");
      c.oracle.mod_len = static_cast<std::size_t>(*m);
    }
    if (const auto m = o.integer("min_ps_len")) {
      if (*m <= 0) o.fail("min_ps_len", "must be positive");
      c.oracle.min_ps_len = static_cast<std::size_t>(*m);
    }
    if (!c.oracle.well_formed()) o.fail("mod_len", "must be at least min_ps_len + 3");
  }

  try {
    check_config(c);
  } catch (const ConfigError& e) {
    throw ConfigError("campaign[" + std::to_string(index) + "]." + e.what());
  }
  return c;
}

std::string substitute(std::string arg, const std::map<std::string, std::string>& vars) {
  for (const auto& [key, value] : vars) {
    const std::string token = "{" + key + "}";
    for (std::size_t pos = arg.find(token); pos != std::string::npos;
         pos = arg.find(token, pos + value.size())) {
      arg.replace(pos, token.size(), value);
    }
  }
  return arg;
}

bool is_executable(const fs::path& p) {
  return fs::is_regular_file(p) && ::access(p.c_str(), X_OK) == 0;
}

std::string subject_arg(const SubjectSpec& s) {
  if (const auto* policy = std::get_if<SubjectPolicy>(&s)) return std::string(policy_name(*policy));
  return std::get<fs::path>(s).string();
}

fs::path out_dir_for(const CampaignConfig& c) {
  if (c.out_dir) return *c.out_dir;
  return c.log_path.parent_path() / (c.campaign_id + "_out");
}

struct LogCounts {
  std::size_t records = 0;
  std::size_t valid = 0;
  std::size_t crashed = 0;
};

LogCounts count_log(const fs::path& path) {
  LogCounts counts;
  for (const auto& r : read_log(path)) {
    ++counts.records;
    if (r.valid) ++counts.valid;
    if (r.crashed) ++counts.crashed;
  }
  return counts;
}

}  // namespace

void check_config(const CampaignConfig& c) {
  if (c.campaign_id.empty()) throw ConfigError("campaign_id: must not be empty");
  if (!(c.duration > 0.0)) throw ConfigError("duration: must be positive");
  if (!c.oracle.well_formed()) throw ConfigError("oracle.mod_len: must be at least min_ps_len + 3");
  if (c.log_path.empty()) throw ConfigError("log_path: must not be empty");
  if (const auto* b = std::get_if<BuiltinFuzzer>(&c.fuzzer)) {
    if (b->strategy == GeneratorStrategy::kMutation && b->mutation.seed_corpus.empty() &&
        !c.seed_dir) {
      throw ConfigError("seed_dir: mutation strategy needs seed_dir or inline fuzzer.seeds");
    }
  }
}

std::vector<CampaignConfig> parse_config(std::string_view text, const fs::path& base_dir) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML syntax error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  for (auto&& [k, v] : doc) {
    if (k.str() != "campaign") throw ConfigError(std::string(k.str()) + ": unknown top-level field");
  }
  const auto* campaigns = doc.get("campaign");
  if (!campaigns) throw ConfigError("campaign: no [[campaign]] tables");
  const auto* arr = campaigns->as_array();
  if (!arr || !arr->is_array_of_tables()) throw ConfigError("campaign: expected [[campaign]] tables");

  std::vector<CampaignConfig> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    out.push_back(parse_campaign(*arr->get(i)->as_table(), i, base_dir));
    if (!ids.insert(out.back().campaign_id).second) {
      throw ConfigError("campaign[" + std::to_string(i) + "].campaign_id: duplicate id '" +
                        out.back().campaign_id + "'");
    }
  }
  return out;
}

std::vector<CampaignConfig> load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return parse_config(buf.str(), base);
}

CampaignSummary run_campaign(const CampaignConfig& config, const RunOptions& options) {
  check_config(config);
  CampaignSummary summary;
  summary.campaign_id = config.campaign_id;

  // Everything that can fail without side effects happens before the
  // validator comes up.
  const auto* builtin = std::get_if<BuiltinFuzzer>(&config.fuzzer);
  const auto* external = std::get_if<ExternalFuzzer>(&config.fuzzer);
  const auto* policy = std::get_if<SubjectPolicy>(&config.subject);
  const auto* harness = std::get_if<fs::path>(&config.subject);

  if (external && !is_executable(external->executable)) {
    throw CampaignError("fuzzer executable not found or not executable: " +
                        external->executable.string());
  }
  if (harness && !is_executable(*harness)) {
    throw CampaignError("subject executable not found or not executable: " + harness->string());
  }
  std::unique_ptr<InputGenerator> generator;
  std::optional<Subject> subject;
  if (builtin) {
    MutationConfig mutation = builtin->mutation;
    if (builtin->strategy == GeneratorStrategy::kMutation && config.seed_dir) {
      try {
        for (auto& s : read_corpus_dir(*config.seed_dir)) mutation.seed_corpus.push_back(std::move(s));
      } catch (const std::exception& e) {
        throw CampaignError(e.what());
      }
    }
    try {
      generator = make_generator(builtin->strategy, config.oracle, mutation, config.rng_seed);
      if (policy) {
        subject.emplace(*policy, builtin_key_for(config.oracle.mod_len), config.oracle.min_ps_len,
                        config.crash_trigger);
      }
    } catch (const std::invalid_argument& e) {
      throw CampaignError(config.campaign_id + ": " + e.what());
    }
  }
  const fs::path out_dir = out_dir_for(config);
  if (external || harness) fs::create_directories(out_dir);

  // A campaign owns its log; a rerun starts from an empty file.
  std::error_code ec;
  fs::remove(config.log_path, ec);

  ServiceOptions sopts;
  sopts.port = config.validator_port;
  sopts.params = config.oracle;
  sopts.log_path = config.log_path;
  sopts.campaign_id = config.campaign_id;
  std::unique_ptr<ValidatorService> validator;
  try {
    validator = ValidatorService::start(sopts);
  } catch (const ServiceError& e) {
    throw CampaignError(config.campaign_id + ": " + e.what());
  }
  const std::uint16_t port = validator->port();

  const auto duration = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(config.duration));
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + duration;
  bool drained_externally = false;

  try {
    if (builtin) {
      std::size_t produced = 0;
      const fs::path input_file = out_dir / "cur_input";
      while ((!config.max_inputs || produced < *config.max_inputs) &&
             std::chrono::steady_clock::now() < deadline) {
        const Bytes em = generator->next();
        if (subject) {
          const SubjectOutcome outcome = subject->run(em);
          send_wire("127.0.0.1", port,
                    encode_wire(em, outcome.crashed ? std::optional<std::int64_t>(kCrashStatus)
                                                    : std::nullopt));
        } else {
          write_file_bytes(input_file, em);
          auto child = ChildProcess::spawn({harness->string(), input_file.string(), std::to_string(port)});
          if (!child.wait_for(std::chrono::seconds(10))) child.terminate(options.grace);
          drained_externally = true;
        }
        ++produced;
      }
    } else {
      const std::map<std::string, std::string> vars{
          {"port", std::to_string(port)},
          {"seed_dir", config.seed_dir ? config.seed_dir->string() : std::string()},
          {"out_dir", out_dir.string()},
          {"subject", subject_arg(config.subject)},
          {"mod_len", std::to_string(config.oracle.mod_len)},
          {"campaign_id", config.campaign_id},
      };
      std::vector<std::string> argv{external->executable.string()};
      for (const auto& a : external->args) argv.push_back(substitute(a, vars));
      auto child = ChildProcess::spawn(argv);
      const auto remaining =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (!child.wait_for(std::max(remaining, std::chrono::milliseconds(0)))) {
        child.terminate(options.grace);
      }
      drained_externally = true;
    }
  } catch (const std::exception& e) {
    summary.error = e.what();
  }
  const auto stop = std::chrono::steady_clock::now();

  if (drained_externally) std::this_thread::sleep_for(options.grace);
  summary.records_written = validator->shutdown();
  validator.reset();

  summary.wall_seconds = std::chrono::duration<double>(stop - start).count();
  summary.throughput = summary.wall_seconds > 0.0
                           ? static_cast<double>(summary.records_written) / summary.wall_seconds
                           : 0.0;
  const LogCounts counts = count_log(config.log_path);
  summary.valid_records = counts.valid;
  summary.crashed_records = counts.crashed;
  summary.completed = summary.error.empty();
  return summary;
}

std::vector<CampaignSummary> run_many(const std::vector<CampaignConfig>& configs,
                                      std::size_t parallelism, const RunOptions& options) {
  if (parallelism == 0) throw ConfigError("parallelism: must be positive");
  std::vector<std::string> collisions;
  std::map<std::uint16_t, std::string> ports;
  std::map<fs::path, std::string> logs;
  std::set<std::string> ids;
  for (const auto& c : configs) {
    if (!ids.insert(c.campaign_id).second) collisions.push_back("duplicate campaign_id " + c.campaign_id);
    if (c.validator_port != 0) {
      const auto [it, fresh] = ports.emplace(c.validator_port, c.campaign_id);
      if (!fresh) {
        collisions.push_back("validator_port " + std::to_string(c.validator_port) + " shared by " +
                             it->second + " and " + c.campaign_id);
      }
    }
    const auto key = fs::weakly_canonical(fs::absolute(c.log_path));
    const auto [it, fresh] = logs.emplace(key, c.campaign_id);
    if (!fresh) {
      collisions.push_back("log_path " + key.string() + " shared by " + it->second + " and " +
                           c.campaign_id);
    }
  }
  if (!collisions.empty()) {
    std::string msg = "campaign collisions:";
    for (const auto& c : collisions) msg += "\n  " + c;
    throw ConfigError(msg);
  }

  std::vector<CampaignSummary> results(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i] = run_campaign(configs[i], options);
      } catch (const std::exception& e) {
        results[i].campaign_id = configs[i].campaign_id;
        results[i].completed = false;
        results[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> threads;
  const std::size_t n = std::min(parallelism, configs.size());
  for (std::size_t i = 0; i < n; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return results;
}

std::string summary_line(const CampaignSummary& s) {
  char buf[512];
  const double pct = s.records_written == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(s.valid_records) /
                               static_cast<double>(s.records_written);
  std::snprintf(buf, sizeof buf,
                "%s: %s records=%zu valid=%zu (%.2f%%) crashed=%zu wall=%.3fs throughput=%.2f/s",
                s.campaign_id.c_str(), s.completed ? "completed" : "FAILED", s.records_written,
                s.valid_records, pct, s.crashed_records, s.wall_seconds, s.throughput);
  std::string line = buf;
  if (!s.error.empty()) line += " error=\"" + s.error + "\"";
  return line;
}

}  // namespace pkcsbench
