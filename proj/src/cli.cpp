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

#include "pkcsbench/cli.hpp"

#include <signal.h>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "pkcsbench/analyzer.hpp"
#include "pkcsbench/bytes.hpp"
#include "pkcsbench/controller.hpp"
#include "pkcsbench/generators.hpp"
#include "pkcsbench/validator_service.hpp"

namespace pkcsbench {

namespace fs = std::filesystem;

namespace {

// Raised for bad flag combinations that CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ServeArgs {
  int port = 0;
  std::size_t mod_len = 256;
  std::size_t min_ps_len = kDefaultMinPsLen;
  std::string log;
  std::string campaign_id = "serve";
  std::string bind = "127.0.0.1";
};

struct RunArgs {
  std::string config;
  std::size_t parallelism = 1;
};

struct GenerateArgs {
  std::string strategy;
  std::size_t count = 0;
  std::size_t mod_len = 256;
  std::size_t min_ps_len = kDefaultMinPsLen;
  std::string seed_dir;
  std::string out;
  std::uint64_t rng_seed = 0;
  bool no_deterministic = false;
  std::size_t havoc_stacking_max = 16;
};

struct AnalyzeArgs {
  std::vector<std::string> logs;
  std::size_t sample = 100;
  std::size_t reps = 10;
  std::int64_t bucket = 600;
  std::uint64_t rng_seed = 0;
  std::string out_json;
  std::string out_csv;
  std::string out_tsv;
};

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  // Signals are taken synchronously; service threads inherit the mask.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  ServiceOptions opts;
  opts.port = static_cast<std::uint16_t>(a.port);
  opts.bind_address = a.bind;
  opts.params = {a.mod_len, a.min_ps_len};
  opts.log_path = a.log;
  opts.campaign_id = a.campaign_id;
  std::unique_ptr<ValidatorService> svc;
  try {
    svc = ValidatorService::start(opts);
  } catch (const std::exception& e) {
    pthread_sigmask(SIG_UNBLOCK, &set, nullptr);
    err << "serve: " << e.what() << "\n";
    return kExitFailure;
  }
  out << "listening on " << a.bind << ":" << svc->port() << " (mod_len " << a.mod_len
      << "), logging to " << a.log << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  const std::size_t n = svc->shutdown();
  out << "shut down after " << n << " records" << std::endl;
  return kExitOk;
}

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  if (!fs::exists(a.config)) {
    err << "run: config file not found: " << a.config << "\n";
    return kExitFailure;
  }
  std::vector<CampaignConfig> configs;
  std::vector<CampaignSummary> results;
  try {
    configs = load_config(a.config);
    results = run_many(configs, a.parallelism);
  } catch (const std::exception& e) {
    err << "run: " << e.what() << "\n";
    return kExitFailure;
  }
  bool ok = true;
  for (const auto& s : results) {
    out << summary_line(s) << "\n";
    ok = ok && s.completed;
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const auto strategy = strategy_from_name(a.strategy);
  if (!strategy) throw UsageError("unknown strategy " + a.strategy);
  const OracleParams params{a.mod_len, a.min_ps_len};
  if (!params.well_formed()) throw UsageError("--mod-len must be at least --min-ps-len + 3");
  MutationConfig mutation;
  mutation.deterministic_stage_enabled = !a.no_deterministic;
  mutation.havoc_stacking_max = a.havoc_stacking_max;
  if (*strategy == GeneratorStrategy::kMutation) {
    if (a.seed_dir.empty()) throw UsageError("mutation strategy requires --seed-dir");
    mutation.seed_corpus = read_corpus_dir(a.seed_dir);
    if (mutation.seed_corpus.empty()) throw UsageError("--seed-dir contains no seed files");
  }
  auto gen = make_generator(*strategy, params, mutation, a.rng_seed);
  fs::create_directories(a.out);
  const int width = std::max<int>(6, static_cast<int>(std::to_string(a.count).size()));
  for (std::size_t i = 0; i < a.count; ++i) {
    std::ostringstream name;
    name << std::setw(width) << std::setfill('0') << i;
    write_file_bytes(fs::path(a.out) / name.str(), gen->next());
  }
  out << "wrote " << a.count << " inputs to " << a.out << "\n";
  return kExitOk;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  AnalyzeOptions opts;
  opts.sample_size = a.sample;
  opts.repetitions = a.reps;
  opts.bucket_seconds = a.bucket;
  opts.rng_seed = a.rng_seed;
  if (opts.sample_size < 2) throw UsageError("--sample must be at least 2");
  if (opts.repetitions == 0) throw UsageError("--reps must be positive");
  if (opts.bucket_seconds <= 0) throw UsageError("--bucket must be positive");
  std::vector<fs::path> logs(a.logs.begin(), a.logs.end());
  MetricsReport report;
  try {
    report = analyze_logs(logs, opts);
  } catch (const std::exception& e) {
    err << "analyze: " << e.what() << "\n";
    return kExitFailure;
  }
  if (!a.out_json.empty()) write_text(a.out_json, report_to_json(report));
  if (!a.out_csv.empty()) write_text(a.out_csv, report_to_csv(report));
  if (!a.out_tsv.empty()) write_text(a.out_tsv, series_to_tsv(report));
  out << headline_table(report);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PKCS#1 v1.5 fuzzer evaluation: validator, campaigns, generators, metrics",
               "pkcsbench"};
  app.require_subcommand(1);

  ServeArgs serve;
  auto* s = app.add_subcommand("serve", "Run the TCP validator until interrupted");
  s->add_option("--port", serve.port, "TCP port (0 picks one)")->required()->check(CLI::Range(0, 65535));
  s->add_option("--mod-len", serve.mod_len, "Modulus length in bytes")->capture_default_str();
  s->add_option("--min-ps-len", serve.min_ps_len, "Minimum padding length")->capture_default_str();
  s->add_option("--log", serve.log, "JSONL log file (appended)")->required();
  s->add_option("--campaign-id", serve.campaign_id, "Id stamped on every record")->capture_default_str();
  s->add_option("--bind", serve.bind, "IPv4 address to listen on")->capture_default_str();

  RunArgs run;
  auto* r = app.add_subcommand("run", "Run the campaigns of a TOML config");
  r->add_option("--config", run.config, "Campaign config file")->required();
  r->add_option("--parallelism", run.parallelism, "Campaigns run at once")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write generated inputs, one raw file each");
  g->add_option("--strategy", gen.strategy, "constraint_aware | context_free | mutation")
      ->required()
      ->check(CLI::IsMember({"constraint_aware", "context_free", "mutation"}));
  g->add_option("--count", gen.count, "Number of inputs")->required();
  g->add_option("--mod-len", gen.mod_len, "Modulus length in bytes")->capture_default_str();
  g->add_option("--min-ps-len", gen.min_ps_len, "Minimum padding length")->capture_default_str();
  g->add_option("--seed-dir", gen.seed_dir, "Seed corpus (mutation)");
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--rng-seed", gen.rng_seed, "Generator seed")->capture_default_str();
  g->add_flag("--no-deterministic", gen.no_deterministic, "Skip the deterministic mutation stage");
  g->add_option("--havoc-stacking-max", gen.havoc_stacking_max, "Max stacked havoc operations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Compute validity, throughput and diversity metrics");
  a->add_option("--logs", an.logs, "One JSONL log per run")->required()->expected(1, -1);
  a->add_option("--sample", an.sample, "Inputs sampled per repetition")->capture_default_str();
  a->add_option("--reps", an.reps, "Sampling repetitions")->capture_default_str();
  a->add_option("--bucket", an.bucket, "Validity series bucket, seconds")->capture_default_str();
  a->add_option("--rng-seed", an.rng_seed, "Sampling seed")->capture_default_str();
  a->add_option("--out-json", an.out_json, "Full report (JSON)");
  a->add_option("--out-csv", an.out_csv, "One row per campaign and metric (CSV)");
  a->add_option("--out-tsv", an.out_tsv, "Validity series for gnuplot (TSV)");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*s) return cmd_serve(serve, out, err);
    if (*r) return cmd_run(run, out, err);
    if (*g) return cmd_generate(gen, out);
    if (*a) return cmd_analyze(an, out, err);
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace pkcsbench
