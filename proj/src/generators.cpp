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

#include "pkcsbench/generators.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace pkcsbench {

namespace {

constexpr std::size_t kArithMax = 35;
constexpr std::array<std::uint8_t, 4> kInterestingValues{0x00, 0xFF, 0x7F, 0x80};
constexpr std::size_t kHavocBlockMax = 32;

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::uint8_t random_byte(std::mt19937_64& rng) {
  return static_cast<std::uint8_t>(uniform(rng, 0, 255));
}

std::size_t saturating_sub(std::size_t a, std::size_t b) { return a > b ? a - b : 0; }

// Bit 0 is the most significant bit of byte 0.
void flip_bit(Bytes& data, std::size_t bit) {
  data[bit >> 3] ^= static_cast<std::uint8_t>(0x80u >> (bit & 7));
}

enum class Stage { kFlip1, kFlip2, kFlip4, kByte1, kByte2, kByte4, kArith, kInteresting };

struct StageSpan {
  Stage stage;
  std::size_t count;
};

std::array<StageSpan, 8> stage_layout(std::size_t len) {
  const std::size_t bits = len * 8;
  return {{
      {Stage::kFlip1, bits},
      {Stage::kFlip2, saturating_sub(bits, 1)},
      {Stage::kFlip4, saturating_sub(bits, 3)},
      {Stage::kByte1, len},
      {Stage::kByte2, saturating_sub(len, 1)},
      {Stage::kByte4, saturating_sub(len, 3)},
      {Stage::kArith, len * kArithMax * 2},
      {Stage::kInteresting, len * kInterestingValues.size()},
  }};
}

}  // namespace

std::string_view strategy_name(GeneratorStrategy s) {
  switch (s) {
    case GeneratorStrategy::kConstraintAware: return "constraint_aware";
    case GeneratorStrategy::kContextFree: return "context_free";
    case GeneratorStrategy::kMutation: return "mutation";
  }
  return "unknown";
}

std::optional<GeneratorStrategy> strategy_from_name(std::string_view name) {
  for (auto s : {GeneratorStrategy::kConstraintAware, GeneratorStrategy::kContextFree,
                 GeneratorStrategy::kMutation}) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<Bytes> InputGenerator::take(std::size_t count) {
  std::vector<Bytes> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  return out;
}

ConstraintAwareGenerator::ConstraintAwareGenerator(OracleParams params, std::uint64_t rng_seed)
    : params_(params), rng_(rng_seed) {
  params_.check();
}

Bytes ConstraintAwareGenerator::next() {
  const std::size_t pl_len = uniform(rng_, 0, params_.mod_len - params_.min_ps_len - 3);
  Bytes pl(pl_len);
  for (auto& b : pl) b = random_byte(rng_);
  return build_em(pl, params_);
}

ContextFreeGenerator::ContextFreeGenerator(OracleParams params, std::uint64_t rng_seed)
    : params_(params), rng_(rng_seed) {
  params_.check();
}

Bytes ContextFreeGenerator::next() {
  const std::size_t ps_len = uniform(rng_, 0, params_.mod_len);
  const std::size_t pl_len = uniform(rng_, 0, params_.mod_len);
  Bytes out;
  out.reserve(ps_len + pl_len + 3);
  out.push_back(0x00);
  out.push_back(kSignatureBlockType);
  out.insert(out.end(), ps_len, 0xFF);
  out.push_back(0x00);
  for (std::size_t i = 0; i < pl_len; ++i) out.push_back(random_byte(rng_));
  return out;
}

MutationGenerator::MutationGenerator(MutationConfig config, std::uint64_t rng_seed)
    : config_(std::move(config)), rng_(rng_seed) {
  if (config_.seed_corpus.empty()) {
    throw std::invalid_argument("mutation strategy needs a non-empty seed corpus");
  }
  if (config_.havoc_stacking_max == 0) {
    throw std::invalid_argument("havoc_stacking_max must be positive");
  }
}

std::size_t MutationGenerator::deterministic_count(std::size_t len) {
  std::size_t total = 0;
  for (const auto& span : stage_layout(len)) total += span.count;
  return total;
}

std::optional<Bytes> MutationGenerator::deterministic_output(ByteView seed, std::size_t k) {
  for (const auto& [stage, count] : stage_layout(seed.size())) {
    if (k >= count) {
      k -= count;
      continue;
    }
    Bytes out(seed.begin(), seed.end());
    switch (stage) {
      case Stage::kFlip1: flip_bit(out, k); break;
      case Stage::kFlip2:
        for (std::size_t b = 0; b < 2; ++b) flip_bit(out, k + b);
        break;
      case Stage::kFlip4:
        for (std::size_t b = 0; b < 4; ++b) flip_bit(out, k + b);
        break;
      case Stage::kByte1: out[k] ^= 0xFF; break;
      case Stage::kByte2:
        for (std::size_t b = 0; b < 2; ++b) out[k + b] ^= 0xFF;
        break;
      case Stage::kByte4:
        for (std::size_t b = 0; b < 4; ++b) out[k + b] ^= 0xFF;
        break;
      case Stage::kArith: {
        const std::size_t pos = k / (kArithMax * 2);
        const std::size_t rem = k % (kArithMax * 2);
        const auto delta = static_cast<std::uint8_t>(rem / 2 + 1);
        out[pos] = rem % 2 == 0 ? static_cast<std::uint8_t>(out[pos] + delta)
                                : static_cast<std::uint8_t>(out[pos] - delta);
        break;
      }
      case Stage::kInteresting:
        out[k / kInterestingValues.size()] = kInterestingValues[k % kInterestingValues.size()];
        break;
    }
    return out;
  }
  return std::nullopt;
}

Bytes MutationGenerator::havoc(ByteView seed) {
  Bytes data(seed.begin(), seed.end());
  const std::size_t ops = uniform(rng_, 1, config_.havoc_stacking_max);
  for (std::size_t i = 0; i < ops; ++i) {
    std::size_t op = uniform(rng_, 0, 4);
    // Operations that need existing bytes degrade to insertion.
    if (data.empty() || (op == 2 && data.size() < 2)) op = 3;
    switch (op) {
      case 0:  // bit flip
        flip_bit(data, uniform(rng_, 0, data.size() * 8 - 1));
        break;
      case 1:  // random byte overwrite
        data[uniform(rng_, 0, data.size() - 1)] = random_byte(rng_);
        break;
      case 2: {  // block delete
        const std::size_t len = uniform(rng_, 1, std::min(data.size() - 1, kHavocBlockMax));
        const std::size_t pos = uniform(rng_, 0, data.size() - len);
        data.erase(data.begin() + static_cast<std::ptrdiff_t>(pos),
                   data.begin() + static_cast<std::ptrdiff_t>(pos + len));
        break;
      }
      case 3: {  // block insert of random bytes
        const std::size_t len = uniform(rng_, 1, kHavocBlockMax);
        const std::size_t pos = uniform(rng_, 0, data.size());
        Bytes block(len);
        for (auto& b : block) b = random_byte(rng_);
        data.insert(data.begin() + static_cast<std::ptrdiff_t>(pos), block.begin(), block.end());
        break;
      }
      default: {  // block duplicate
        const std::size_t len = uniform(rng_, 1, std::min(data.size(), kHavocBlockMax));
        const std::size_t src = uniform(rng_, 0, data.size() - len);
        const std::size_t dst = uniform(rng_, 0, data.size());
        const Bytes block(data.begin() + static_cast<std::ptrdiff_t>(src),
                          data.begin() + static_cast<std::ptrdiff_t>(src + len));
        data.insert(data.begin() + static_cast<std::ptrdiff_t>(dst), block.begin(), block.end());
        break;
      }
    }
  }
  return data;
}

Bytes MutationGenerator::next() {
  if (config_.deterministic_stage_enabled) {
    while (det_entry_ < config_.seed_corpus.size()) {
      if (auto out = deterministic_output(config_.seed_corpus[det_entry_], det_index_)) {
        ++det_index_;
        return *out;
      }
      ++det_entry_;
      det_index_ = 0;
    }
  }
  const auto& seed = config_.seed_corpus[uniform(rng_, 0, config_.seed_corpus.size() - 1)];
  return havoc(seed);
}

std::unique_ptr<InputGenerator> make_generator(GeneratorStrategy strategy,
                                               const OracleParams& params,
                                               const MutationConfig& mutation,
                                               std::uint64_t rng_seed) {
  switch (strategy) {
    case GeneratorStrategy::kConstraintAware:
      return std::make_unique<ConstraintAwareGenerator>(params, rng_seed);
    case GeneratorStrategy::kContextFree:
      return std::make_unique<ContextFreeGenerator>(params, rng_seed);
    case GeneratorStrategy::kMutation:
      return std::make_unique<MutationGenerator>(mutation, rng_seed);
  }
  throw std::invalid_argument("unknown generator strategy");
}

std::vector<Bytes> gen_constraint_aware(const OracleParams& params, std::uint64_t rng_seed,
                                        std::size_t count) {
  return ConstraintAwareGenerator(params, rng_seed).take(count);
}

std::vector<Bytes> gen_context_free(const OracleParams& params, std::uint64_t rng_seed,
                                    std::size_t count) {
  return ContextFreeGenerator(params, rng_seed).take(count);
}

std::vector<Bytes> gen_mutation(const MutationConfig& config, std::uint64_t rng_seed,
                                std::size_t count) {
  return MutationGenerator(config, rng_seed).take(count);
}

}  // namespace pkcsbench
