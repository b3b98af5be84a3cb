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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <set>

#include "test_support.hpp"

namespace pkcsbench {
namespace {

using testing::brute_force_valid;

// Fraction of the (|PS|, |PL|) lattice [0, m]^2 whose layout 00 01 FF^j 00 X^k
// is a valid block, by enumeration.
double lattice_validity(std::size_t m, std::size_t min_ps) {
  std::size_t hits = 0;
  for (std::size_t j = 0; j <= m; ++j) {
    for (std::size_t k = 0; k <= m; ++k) {
      Bytes b = {0x00, 0x01};
      b.insert(b.end(), j, 0xFF);
      b.push_back(0x00);
      b.insert(b.end(), k, 0x5A);
      hits += brute_force_valid(b, m, min_ps);
    }
  }
  return static_cast<double>(hits) / static_cast<double>((m + 1) * (m + 1));
}

std::size_t bit_distance(ByteView a, ByteView b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::popcount(static_cast<unsigned>(a[i] ^ b[i]));
  return d;
}

TEST(GeneratorsTest, StrategyNames) {
  for (auto s : {GeneratorStrategy::kConstraintAware, GeneratorStrategy::kContextFree,
                 GeneratorStrategy::kMutation}) {
    EXPECT_EQ(strategy_from_name(strategy_name(s)), s);
  }
  EXPECT_FALSE(strategy_from_name("grammar"));
}

TEST(GeneratorsTest, ConstraintAwareAlwaysValid) {
  for (const OracleParams p : {OracleParams{256, 8}, OracleParams{12, 8}, OracleParams{11, 8},
                               OracleParams{40, 1}}) {
    std::set<std::size_t> pl_lengths;
    for (const auto& em : gen_constraint_aware(p, 5, 3000)) {
      ASSERT_TRUE(brute_force_valid(em, p.mod_len, p.min_ps_len)) << to_hex(em);
      pl_lengths.insert(parse_em(em).parsed->pl.size());
    }
    if (p.mod_len <= 40) {
      // Every admissible payload length shows up.
      EXPECT_EQ(pl_lengths.size(), p.mod_len - p.min_ps_len - 2);
    }
  }
}

TEST(GeneratorsTest, ContextFreeLatticeClosedForm) {
  // (m - min_ps - 2) valid cells out of (m + 1)^2.
  EXPECT_DOUBLE_EQ(lattice_validity(12, 8), 2.0 / 169.0);
  EXPECT_DOUBLE_EQ(lattice_validity(20, 3), 15.0 / 441.0);
  EXPECT_NEAR(lattice_validity(256, 8), 246.0 / 66049.0, 1e-15);
}

TEST(GeneratorsTest, ContextFreeMatchesLatticeProbability) {
  for (const OracleParams p : {OracleParams{12, 8}, OracleParams{20, 3}}) {
    const double expect = lattice_validity(p.mod_len, p.min_ps_len);
    const std::size_t n = 200000;
    std::size_t valid = 0;
    for (const auto& em : gen_context_free(p, 9, n)) valid += validate(em, p).valid();
    const double rate = static_cast<double>(valid) / n;
    const double se = std::sqrt(expect * (1 - expect) / n);
    EXPECT_LE(std::abs(rate - expect), 3 * se) << p.mod_len << " rate " << rate;
  }
}

TEST(GeneratorsTest, ContextFreeFieldLayout) {
  const OracleParams p{32, 8};
  for (const auto& em : gen_context_free(p, 2, 500)) {
    ASSERT_GE(em.size(), 3u);
    ASSERT_LE(em.size(), 2 * p.mod_len + 3);
    EXPECT_EQ(em[0], 0x00);
    EXPECT_EQ(em[1], 0x01);
    const auto parsed = parse_em(em).parsed;
    ASSERT_TRUE(parsed);
    for (auto b : parsed->ps) EXPECT_EQ(b, 0xFF);
  }
}

TEST(GeneratorsTest, DeterministicCount) {
  // 8L + (8L-1) + (8L-3) + L + (L-1) + (L-3) + 70L + 4L
  for (std::size_t len : {4u, 12u, 256u}) {
    EXPECT_EQ(MutationGenerator::deterministic_count(len), 101 * len - 8) << len;
  }
}

TEST(GeneratorsTest, WalkingBitFlipsMsbFirst) {
  const Bytes seed = *from_hex("0001ffffffffffffffff00aa");
  std::set<Bytes> seen;
  for (std::size_t k = 0; k < 96; ++k) {
    const Bytes out = *MutationGenerator::deterministic_output(seed, k);
    ASSERT_EQ(out.size(), seed.size());
    EXPECT_EQ(bit_distance(out, seed), 1u) << k;
    EXPECT_EQ(out[k / 8] ^ seed[k / 8], 0x80 >> (k % 8)) << k;
    seen.insert(out);
  }
  EXPECT_EQ(seen.size(), 96u);
  // Two-bit walk starts right after.
  EXPECT_EQ(bit_distance(*MutationGenerator::deterministic_output(seed, 96), seed), 2u);
}

TEST(GeneratorsTest, DeterministicStageInventory) {
  const Bytes seed = *from_hex("0001ffffffffffffffff00aa");
  const std::size_t L = seed.size();
  const std::size_t n = MutationGenerator::deterministic_count(L);
  EXPECT_FALSE(MutationGenerator::deterministic_output(seed, n));
  std::size_t k = 0;
  auto next = [&] { return *MutationGenerator::deterministic_output(seed, k++); };
  for (std::size_t width : {1u, 2u, 4u}) {
    for (std::size_t i = 0; i + width <= 8 * L; ++i) EXPECT_EQ(bit_distance(next(), seed), width);
  }
  for (std::size_t width : {1u, 2u, 4u}) {
    for (std::size_t i = 0; i + width <= L; ++i) {
      const Bytes out = next();
      for (std::size_t b = 0; b < L; ++b) {
        EXPECT_EQ(out[b], (b >= i && b < i + width) ? seed[b] ^ 0xFF : seed[b]);
      }
    }
  }
  for (std::size_t pos = 0; pos < L; ++pos) {
    std::set<int> deltas;
    for (int j = 0; j < 70; ++j) {
      const Bytes out = next();
      for (std::size_t b = 0; b < L; ++b) {
        if (b != pos) ASSERT_EQ(out[b], seed[b]);
      }
      int d = (out[pos] - seed[pos] + 256) % 256;
      deltas.insert(d > 128 ? d - 256 : d);
    }
    EXPECT_EQ(deltas.size(), 70u);
    EXPECT_EQ(*deltas.begin(), -35);
    EXPECT_EQ(*deltas.rbegin(), 35);
    EXPECT_FALSE(deltas.count(0));
  }
  for (std::size_t pos = 0; pos < L; ++pos) {
    std::set<std::uint8_t> values;
    for (int j = 0; j < 4; ++j) values.insert(next()[pos]);
    EXPECT_EQ(values, (std::set<std::uint8_t>{0x00, 0x7F, 0x80, 0xFF}));
  }
  EXPECT_EQ(k, n);
}

TEST(GeneratorsTest, MutationSweepsBeforeHavoc) {
  const Bytes seed = *from_hex("0001ffffffffffffffff00aa");
  MutationConfig cfg;
  cfg.seed_corpus = {seed};
  const auto outs = gen_mutation(cfg, 1, MutationGenerator::deterministic_count(12) + 50);
  for (std::size_t k = 0; k < MutationGenerator::deterministic_count(12); ++k) {
    ASSERT_EQ(outs[k], *MutationGenerator::deterministic_output(seed, k));
  }
}

TEST(GeneratorsTest, HavocBounds) {
  const Bytes seed = *from_hex("0001ffffffffffffffff00aa");
  MutationConfig cfg;
  cfg.seed_corpus = {seed};
  cfg.deterministic_stage_enabled = false;
  cfg.havoc_stacking_max = 4;
  std::size_t changed_len = 0;
  for (const auto& out : gen_mutation(cfg, 3, 5000)) {
    ASSERT_LE(out.size(), seed.size() + 4 * 32);
    changed_len += out.size() != seed.size();
  }
  EXPECT_GT(changed_len, 0u);
}

TEST(GeneratorsTest, HavocFromEmptySeed) {
  MutationConfig cfg;
  cfg.seed_corpus = {Bytes{}};
  cfg.deterministic_stage_enabled = true;
  for (const auto& out : gen_mutation(cfg, 3, 100)) EXPECT_FALSE(out.empty());
}

TEST(GeneratorsTest, Deterministic) {
  const OracleParams p{256, 8};
  EXPECT_EQ(gen_constraint_aware(p, 42, 50), gen_constraint_aware(p, 42, 50));
  EXPECT_NE(gen_constraint_aware(p, 42, 50), gen_constraint_aware(p, 43, 50));
  EXPECT_EQ(gen_context_free(p, 42, 50), gen_context_free(p, 42, 50));
  MutationConfig cfg;
  cfg.seed_corpus = {build_em(Bytes(20, 0x11), p)};
  cfg.deterministic_stage_enabled = false;
  EXPECT_EQ(gen_mutation(cfg, 42, 50), gen_mutation(cfg, 42, 50));
  EXPECT_NE(gen_mutation(cfg, 42, 50), gen_mutation(cfg, 43, 50));
}

TEST(GeneratorsTest, RejectsBadConfig) {
  MutationConfig cfg;
  EXPECT_THROW(MutationGenerator(cfg, 0), std::invalid_argument);
  cfg.seed_corpus = {Bytes{1}};
  cfg.havoc_stacking_max = 0;
  EXPECT_THROW(MutationGenerator(cfg, 0), std::invalid_argument);
}

}  // namespace
}  // namespace pkcsbench
