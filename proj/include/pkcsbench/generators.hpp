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

// Reference input generators covering three points of the fuzzer spectrum:
//
//   constraint_aware  every length coupling honoured; always valid.
//   context_free      fixed field layout, independently drawn field lengths.
//   mutation          AFL-style deterministic sweep over seeds, then havoc.
//
// Each generator owns its random state and is fully determined by its
// configuration and seed.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "pkcsbench/bytes.hpp"
#include "pkcsbench/pkcs1.hpp"

namespace pkcsbench {

enum class GeneratorStrategy { kConstraintAware, kContextFree, kMutation };

std::string_view strategy_name(GeneratorStrategy s);
std::optional<GeneratorStrategy> strategy_from_name(std::string_view name);

struct MutationConfig {
  bool deterministic_stage_enabled = true;
  std::size_t havoc_stacking_max = 16;
  std::vector<Bytes> seed_corpus;
};

class InputGenerator {
 public:
  virtual ~InputGenerator() = default;
  virtual Bytes next() = 0;

  std::vector<Bytes> take(std::size_t count);
};

class ConstraintAwareGenerator final : public InputGenerator {
 public:
  ConstraintAwareGenerator(OracleParams params, std::uint64_t rng_seed);
  Bytes next() override;

 private:
  OracleParams params_;
  std::mt19937_64 rng_;
};

class ContextFreeGenerator final : public InputGenerator {
 public:
  ContextFreeGenerator(OracleParams params, std::uint64_t rng_seed);
  Bytes next() override;

 private:
  OracleParams params_;
  std::mt19937_64 rng_;
};

// Deterministic stage order per corpus entry of L bytes:
//   walking bit flips of 1, 2, 4 adjacent bits   (8L, 8L-1, 8L-3 outputs)
//   byte flips of 1, 2, 4 adjacent bytes         (L, L-1, L-3)
//   per-byte arithmetic +j then -j, j = 1..35    (70L)
//   per-byte interesting values 00 ff 7f 80      (4L)
// Once every entry is swept, and always when the stage is disabled, outputs
// come from havoc.
class MutationGenerator final : public InputGenerator {
 public:
  // Throws std::invalid_argument on an empty corpus or zero stacking.
  MutationGenerator(MutationConfig config, std::uint64_t rng_seed);
  Bytes next() override;

  // Number of deterministic outputs for an entry of `len` bytes.
  static std::size_t deterministic_count(std::size_t len);
  // The k-th deterministic output for `seed`; nullopt when k is past the end.
  static std::optional<Bytes> deterministic_output(ByteView seed, std::size_t k);

  // One havoc output from `seed`. May change the length.
  Bytes havoc(ByteView seed);

 private:
  MutationConfig config_;
  std::mt19937_64 rng_;
  std::size_t det_entry_ = 0;
  std::size_t det_index_ = 0;
};

std::unique_ptr<InputGenerator> make_generator(GeneratorStrategy strategy,
                                               const OracleParams& params,
                                               const MutationConfig& mutation,
                                               std::uint64_t rng_seed);

std::vector<Bytes> gen_constraint_aware(const OracleParams& params, std::uint64_t rng_seed,
                                        std::size_t count);
std::vector<Bytes> gen_context_free(const OracleParams& params, std::uint64_t rng_seed,
                                    std::size_t count);
std::vector<Bytes> gen_mutation(const MutationConfig& config, std::uint64_t rng_seed,
                                std::size_t count);

}  // namespace pkcsbench
