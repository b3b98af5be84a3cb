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

// Campaign log metrics: validity (overall and over time), throughput, and
// input diversity (mean pairwise edit distance and normalized LCS over
// repeated random samples). Inputs are compared as their lowercase hex
// strings.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pkcsbench/record.hpp"

namespace pkcsbench {

struct SeriesPoint {
  std::size_t bucket_index = 0;
  std::size_t inputs_in_bucket = 0;
  std::size_t valid_in_bucket = 0;
  double cumulative_valid_percent = 0.0;
};

struct ValiditySeries {
  std::int64_t bucket_seconds = 600;
  // One point per bucket from 0 to the last non-empty one; empty buckets
  // carry the previous cumulative value.
  std::vector<SeriesPoint> points;
};

struct DiversityMeans {
  double edit_dist_mean = 0.0;
  double nlcs_mean = 0.0;  // NaN when no pair had two non-empty inputs
};

struct DiversityStats {
  double edit_dist_mean = 0.0;
  double nlcs_mean = 0.0;
  std::size_t sample_size = 100;
  std::size_t repetitions = 10;
  std::size_t population = 0;
  // Ordered pairs left out of the NLCS mean because an input was empty.
  std::size_t nlcs_pairs_skipped = 0;
  std::vector<double> repetition_edit_dist_means;
  std::vector<double> repetition_nlcs_means;
  // Same means over valid records only; computed when the main statistics
  // cover all records and at least two of them are valid.
  std::optional<DiversityMeans> valid_only_variant;
};

// Mean pairwise metrics of the population itself (every unordered pair for
// the edit distance, every ordered pair for NLCS).
DiversityMeans pairwise_means(const std::vector<std::string>& inputs);

// Per repetition: draw min(sample_size, population) records uniformly
// without replacement, average edit distance over unordered pairs and NLCS
// over ordered pairs (first element is the reference). Returns the average of
// the repetition means. Throws std::invalid_argument when fewer than two
// records remain after the valid_only filter.
DiversityStats diversity(const std::vector<InputRecord>& records, std::size_t sample_size,
                         std::size_t repetitions, std::uint64_t rng_seed, bool valid_only);

DiversityStats diversity_of_inputs(const std::vector<std::string>& hex_inputs,
                                   std::size_t sample_size, std::size_t repetitions,
                                   std::uint64_t rng_seed);

ValiditySeries validity_series(const std::vector<InputRecord>& records,
                               std::int64_t bucket_seconds);

double validity_percent(const std::vector<InputRecord>& records);

// Seconds between the first and last record timestamps.
double log_span_seconds(const std::vector<InputRecord>& records);
// records / log_span_seconds; 0 when the span is zero.
double log_throughput(const std::vector<InputRecord>& records);

struct RunMetrics {
  std::string source;
  std::string campaign_id;
  std::size_t records = 0;
  std::size_t valid = 0;
  std::size_t crashed = 0;
  double validity_percent = 0.0;
  double throughput = 0.0;
  double span_seconds = 0.0;
  ValiditySeries series;
  std::optional<DiversityStats> diversity;  // absent below two records
};

struct MetricSummary {
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  std::size_t runs = 0;
};

struct AnalyzeOptions {
  std::size_t sample_size = 100;
  std::size_t repetitions = 10;
  std::int64_t bucket_seconds = 600;
  std::uint64_t rng_seed = 0;
};

struct MetricsReport {
  AnalyzeOptions options;
  std::vector<RunMetrics> runs;
  std::vector<MetricSummary> aggregate;
};

RunMetrics analyze_records(const std::vector<InputRecord>& records, std::string source,
                           const AnalyzeOptions& options);

// Aggregates validity_percent, throughput, edit_dist_mean, nlcs_mean and
// the *_valid variants over the runs that carry them.
std::vector<MetricSummary> aggregate(const std::vector<RunMetrics>& runs);

MetricSummary mean_stddev(std::string metric, const std::vector<double>& values);

// Throws std::invalid_argument if `logs` is empty or every log is empty.
MetricsReport analyze_logs(const std::vector<std::filesystem::path>& logs,
                           const AnalyzeOptions& options);

std::string report_to_json(const MetricsReport& report);
// Header run,campaign_id,metric,value,stddev; one row per (run, metric) and
// one per aggregate metric with run = "aggregate".
std::string report_to_csv(const MetricsReport& report);
// gnuplot-ready, one block per run separated by two blank lines.
std::string series_to_tsv(const MetricsReport& report);
// Human-readable "mean (stddev)" table.
std::string headline_table(const MetricsReport& report);

}  // namespace pkcsbench
