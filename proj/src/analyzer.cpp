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

#include "pkcsbench/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "pkcsbench/sequence_metrics.hpp"

namespace pkcsbench {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RepetitionMeans {
  double edit_dist = 0.0;
  double nlcs = kNaN;
  std::size_t nlcs_skipped = 0;
};

// Means over all pairs of `sample`. Accumulation order is fixed by index.
RepetitionMeans sample_means(const std::vector<const std::string*>& sample) {
  const std::size_t k = sample.size();
  std::vector<metrics::BitPattern> patterns;
  patterns.reserve(k);
  for (const auto* s : sample) patterns.emplace_back(metrics::seq_of(*s));

  double ed_sum = 0.0;
  double nlcs_sum = 0.0;
  std::size_t nlcs_pairs = 0;
  RepetitionMeans out;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto b = metrics::seq_of(*sample[j]);
      ed_sum += static_cast<double>(patterns[i].edit_distance(b));
      if (sample[i]->empty() || sample[j]->empty()) {
        out.nlcs_skipped += 2;
        continue;
      }
      const auto lcs = static_cast<double>(patterns[i].lcs_length(b));
      nlcs_sum += lcs / static_cast<double>(sample[i]->size());
      nlcs_sum += lcs / static_cast<double>(sample[j]->size());
      nlcs_pairs += 2;
    }
  }
  const double unordered = static_cast<double>(k * (k - 1) / 2);
  out.edit_dist = ed_sum / unordered;
  if (nlcs_pairs > 0) out.nlcs = nlcs_sum / static_cast<double>(nlcs_pairs);
  return out;
}

double mean_ignoring_nan(const std::vector<double>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  return n == 0 ? kNaN : sum / static_cast<double>(n);
}

std::vector<std::string> hex_inputs(const std::vector<InputRecord>& records, bool valid_only) {
  std::vector<std::string> out;
  for (const auto& r : records) {
    if (valid_only && !r.valid) continue;
    out.push_back(r.hex);
  }
  return out;
}

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json json_number(double v) {
  return std::isnan(v) ? ordered_json(nullptr) : ordered_json(v);
}

}  // namespace

DiversityMeans pairwise_means(const std::vector<std::string>& inputs) {
  if (inputs.size() < 2) throw std::invalid_argument("pairwise means need two inputs");
  std::vector<const std::string*> all;
  for (const auto& s : inputs) all.push_back(&s);
  const auto m = sample_means(all);
  return {m.edit_dist, m.nlcs};
}

DiversityStats diversity_of_inputs(const std::vector<std::string>& hex, std::size_t sample_size,
                                   std::size_t repetitions, std::uint64_t rng_seed) {
  if (hex.size() < 2) {
    throw std::invalid_argument("diversity needs at least two inputs (got " +
                                std::to_string(hex.size()) + ")");
  }
  if (sample_size < 2) throw std::invalid_argument("sample size must be at least 2");
  if (repetitions == 0) throw std::invalid_argument("repetitions must be positive");

  DiversityStats stats;
  stats.sample_size = sample_size;
  stats.repetitions = repetitions;
  stats.population = hex.size();

  std::mt19937_64 rng(rng_seed);
  const std::size_t k = std::min(sample_size, hex.size());
  std::vector<std::size_t> idx(hex.size());
  std::vector<const std::string*> sample(k);
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t pick = std::uniform_int_distribution<std::size_t>(i, idx.size() - 1)(rng);
      std::swap(idx[i], idx[pick]);
      sample[i] = &hex[idx[i]];
    }
    const auto m = sample_means(sample);
    stats.repetition_edit_dist_means.push_back(m.edit_dist);
    stats.repetition_nlcs_means.push_back(m.nlcs);
    stats.nlcs_pairs_skipped += m.nlcs_skipped;
  }
  stats.edit_dist_mean = std::accumulate(stats.repetition_edit_dist_means.begin(),
                                         stats.repetition_edit_dist_means.end(), 0.0) /
                         static_cast<double>(repetitions);
  stats.nlcs_mean = mean_ignoring_nan(stats.repetition_nlcs_means);
  return stats;
}

DiversityStats diversity(const std::vector<InputRecord>& records, std::size_t sample_size,
                         std::size_t repetitions, std::uint64_t rng_seed, bool valid_only) {
  auto stats = diversity_of_inputs(hex_inputs(records, valid_only), sample_size, repetitions,
                                   rng_seed);
  if (!valid_only) {
    const auto valid = hex_inputs(records, true);
    if (valid.size() >= 2) {
      const auto v = diversity_of_inputs(valid, sample_size, repetitions, rng_seed);
      stats.valid_only_variant = DiversityMeans{v.edit_dist_mean, v.nlcs_mean};
    }
  }
  return stats;
}

ValiditySeries validity_series(const std::vector<InputRecord>& records,
                               std::int64_t bucket_seconds) {
  if (bucket_seconds <= 0) throw std::invalid_argument("bucket_seconds must be positive");
  ValiditySeries series;
  series.bucket_seconds = bucket_seconds;
  if (records.empty()) return series;

  std::int64_t first = records.front().timestamp_ms;
  for (const auto& r : records) first = std::min(first, r.timestamp_ms);
  const std::int64_t bucket_ms = bucket_seconds * 1000;
  std::vector<std::pair<std::size_t, std::size_t>> counts;  // (inputs, valid)
  for (const auto& r : records) {
    const auto b = static_cast<std::size_t>((r.timestamp_ms - first) / bucket_ms);
    if (b >= counts.size()) counts.resize(b + 1);
    ++counts[b].first;
    if (r.valid) ++counts[b].second;
  }
  std::size_t total = 0;
  std::size_t valid = 0;
  double cumulative = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    total += counts[b].first;
    valid += counts[b].second;
    if (total > 0) cumulative = 100.0 * static_cast<double>(valid) / static_cast<double>(total);
    series.points.push_back({b, counts[b].first, counts[b].second, cumulative});
  }
  return series;
}

double validity_percent(const std::vector<InputRecord>& records) {
  if (records.empty()) return 0.0;
  const auto valid = std::count_if(records.begin(), records.end(),
                                   [](const InputRecord& r) { return r.valid; });
  return 100.0 * static_cast<double>(valid) / static_cast<double>(records.size());
}

double log_span_seconds(const std::vector<InputRecord>& records) {
  if (records.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(
      records.begin(), records.end(),
      [](const InputRecord& a, const InputRecord& b) { return a.timestamp_ms < b.timestamp_ms; });
  return static_cast<double>(hi->timestamp_ms - lo->timestamp_ms) / 1000.0;
}

double log_throughput(const std::vector<InputRecord>& records) {
  const double span = log_span_seconds(records);
  return span > 0.0 ? static_cast<double>(records.size()) / span : 0.0;
}

RunMetrics analyze_records(const std::vector<InputRecord>& records, std::string source,
                           const AnalyzeOptions& options) {
  RunMetrics m;
  m.source = std::move(source);
  if (!records.empty()) m.campaign_id = records.front().campaign_id;
  m.records = records.size();
  for (const auto& r : records) {
    if (r.valid) ++m.valid;
    if (r.crashed) ++m.crashed;
  }
  m.validity_percent = validity_percent(records);
  m.span_seconds = log_span_seconds(records);
  m.throughput = log_throughput(records);
  m.series = validity_series(records, options.bucket_seconds);
  if (records.size() >= 2) {
    m.diversity =
        diversity(records, options.sample_size, options.repetitions, options.rng_seed, false);
  }
  return m;
}

MetricSummary mean_stddev(std::string metric, const std::vector<double>& values) {
  MetricSummary s;
  s.metric = std::move(metric);
  s.runs = values.size();
  if (values.empty()) {
    s.mean = kNaN;
    s.stddev = kNaN;
    return s;
  }
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / n);
  return s;
}

std::vector<MetricSummary> aggregate(const std::vector<RunMetrics>& runs) {
  std::vector<double> validity, throughput, ed, nl, ed_valid, nl_valid;
  for (const auto& r : runs) {
    validity.push_back(r.validity_percent);
    throughput.push_back(r.throughput);
    if (r.diversity) {
      ed.push_back(r.diversity->edit_dist_mean);
      if (!std::isnan(r.diversity->nlcs_mean)) nl.push_back(r.diversity->nlcs_mean);
      if (const auto& v = r.diversity->valid_only_variant) {
        ed_valid.push_back(v->edit_dist_mean);
        if (!std::isnan(v->nlcs_mean)) nl_valid.push_back(v->nlcs_mean);
      }
    }
  }
  return {
      mean_stddev("validity_percent", validity),
      mean_stddev("throughput", throughput),
      mean_stddev("edit_dist_mean", ed),
      mean_stddev("nlcs_mean", nl),
      mean_stddev("edit_dist_mean_valid", ed_valid),
      mean_stddev("nlcs_mean_valid", nl_valid),
  };
}

MetricsReport analyze_logs(const std::vector<std::filesystem::path>& logs,
                           const AnalyzeOptions& options) {
  if (logs.empty()) throw std::invalid_argument("no logs given");
  MetricsReport report;
  report.options = options;
  std::size_t total = 0;
  for (const auto& path : logs) {
    const auto records = read_log(path);
    total += records.size();
    report.runs.push_back(analyze_records(records, path.string(), options));
  }
  if (total == 0) throw std::invalid_argument("all logs are empty");
  report.aggregate = aggregate(report.runs);
  return report;
}

std::string report_to_json(const MetricsReport& report) {
  ordered_json j;
  j["options"] = {{"sample_size", report.options.sample_size},
                  {"repetitions", report.options.repetitions},
                  {"bucket_seconds", report.options.bucket_seconds},
                  {"rng_seed", report.options.rng_seed}};
  j["campaign_ids"] = ordered_json::array();
  j["runs"] = ordered_json::array();
  for (const auto& r : report.runs) {
    j["campaign_ids"].push_back(r.campaign_id);
    ordered_json run;
    run["source"] = r.source;
    run["campaign_id"] = r.campaign_id;
    run["records"] = r.records;
    run["valid"] = r.valid;
    run["crashed"] = r.crashed;
    run["validity_percent"] = r.validity_percent;
    run["throughput"] = r.throughput;
    run["span_seconds"] = r.span_seconds;
    ordered_json series;
    series["bucket_seconds"] = r.series.bucket_seconds;
    series["points"] = ordered_json::array();
    for (const auto& p : r.series.points) {
      series["points"].push_back({{"bucket_index", p.bucket_index},
                                  {"inputs_in_bucket", p.inputs_in_bucket},
                                  {"valid_in_bucket", p.valid_in_bucket},
                                  {"cumulative_valid_percent", p.cumulative_valid_percent}});
    }
    run["validity_series"] = series;
    if (r.diversity) {
      const auto& d = *r.diversity;
      ordered_json div;
      div["edit_dist_mean"] = json_number(d.edit_dist_mean);
      div["nlcs_mean"] = json_number(d.nlcs_mean);
      div["sample_size"] = d.sample_size;
      div["repetitions"] = d.repetitions;
      div["population"] = d.population;
      div["nlcs_pairs_skipped"] = d.nlcs_pairs_skipped;
      if (d.valid_only_variant) {
        div["valid_only_variant"] = {
            {"edit_dist_mean", json_number(d.valid_only_variant->edit_dist_mean)},
            {"nlcs_mean", json_number(d.valid_only_variant->nlcs_mean)}};
      } else {
        div["valid_only_variant"] = nullptr;
      }
      run["diversity"] = div;
    } else {
      run["diversity"] = nullptr;
    }
    j["runs"].push_back(run);
  }
  ordered_json agg = ordered_json::object();
  for (const auto& s : report.aggregate) {
    agg[s.metric] = {{"mean", json_number(s.mean)},
                     {"stddev", json_number(s.stddev)},
                     {"runs", s.runs}};
  }
  j["aggregate"] = agg;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "run,campaign_id,metric,value,stddev\n";
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const auto& r = report.runs[i];
    auto row = [&](const char* metric, double v) {
      out << i << ',' << r.campaign_id << ',' << metric << ',' << num(v) << ",\n";
    };
    row("records", static_cast<double>(r.records));
    row("valid", static_cast<double>(r.valid));
    row("crashed", static_cast<double>(r.crashed));
    row("validity_percent", r.validity_percent);
    row("throughput", r.throughput);
    row("span_seconds", r.span_seconds);
    if (r.diversity) {
      row("edit_dist_mean", r.diversity->edit_dist_mean);
      row("nlcs_mean", r.diversity->nlcs_mean);
      if (const auto& v = r.diversity->valid_only_variant) {
        row("edit_dist_mean_valid", v->edit_dist_mean);
        row("nlcs_mean_valid", v->nlcs_mean);
      }
    }
  }
  for (const auto& s : report.aggregate) {
    if (s.runs == 0) continue;
    out << "aggregate,all," << s.metric << ',' << num(s.mean) << ',' << num(s.stddev) << '\n';
  }
  return out.str();
}

std::string series_to_tsv(const MetricsReport& report) {
  std::ostringstream out;
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const auto& r = report.runs[i];
    if (i > 0) out << "\n\n";
    out << "# run " << i << " campaign " << r.campaign_id << '\n';
    out << "# bucket_index\tbucket_start_seconds\tinputs\tvalid\tcumulative_valid_percent\n";
    for (const auto& p : r.series.points) {
      out << p.bucket_index << '\t'
          << static_cast<std::int64_t>(p.bucket_index) * r.series.bucket_seconds << '\t'
          << p.inputs_in_bucket << '\t' << p.valid_in_bucket << '\t'
          << num(p.cumulative_valid_percent) << '\n';
    }
  }
  return out.str();
}

std::string headline_table(const MetricsReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-24s %9s %16s %18s %18s %16s\n", "run", "campaign_id",
                "records", "validity%", "throughput/s", "EditDist", "NLCS");
  out << line;
  auto fmt = [](double v, const char* spec) {
    if (std::isnan(v)) return std::string("-");
    char b[48];
    std::snprintf(b, sizeof b, spec, v);
    return std::string(b);
  };
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const auto& r = report.runs[i];
    const double ed = r.diversity ? r.diversity->edit_dist_mean : kNaN;
    const double nl = r.diversity ? r.diversity->nlcs_mean : kNaN;
    std::snprintf(line, sizeof line, "%-10zu %-24s %9zu %16s %18s %18s %16s\n", i,
                  r.campaign_id.c_str(), r.records, fmt(r.validity_percent, "%.2f").c_str(),
                  fmt(r.throughput, "%.2f").c_str(), fmt(ed, "%.2f").c_str(),
                  fmt(nl, "%.4f").c_str());
    out << line;
  }
  auto cell = [&](const std::string& metric, const char* spec) {
    for (const auto& s : report.aggregate) {
      if (s.metric == metric && s.runs > 0) {
        return fmt(s.mean, spec) + " (" + fmt(s.stddev, spec) + ")";
      }
    }
    return std::string("-");
  };
  std::snprintf(line, sizeof line, "%-10s %-24s %9zu %16s %18s %18s %16s\n", "mean(sd)", "all",
                report.runs.size(), cell("validity_percent", "%.2f").c_str(),
                cell("throughput", "%.2f").c_str(), cell("edit_dist_mean", "%.2f").c_str(),
                cell("nlcs_mean", "%.4f").c_str());
  out << line;
  return out.str();
}

}  // namespace pkcsbench
