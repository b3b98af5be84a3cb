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

#include "pkcsbench/pkcs1.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "pkcsbench/bytes.hpp"
#include "test_support.hpp"

namespace pkcsbench {
namespace {

using testing::brute_force_valid;
using testing::expected_reasons;

std::set<std::string> names(const Verdict& v) {
  const auto n = v.reason_names();
  return {n.begin(), n.end()};
}

Bytes hex(std::string_view h) { return *from_hex(h); }

TEST(Pkcs1Test, ValidBlock) {
  const OracleParams p{12, 8};
  const Bytes em = hex("0001ffffffffffffffff00ab");
  EXPECT_TRUE(validate(em, p).valid());
  const auto parsed = parse_em(em);
  ASSERT_TRUE(parsed.parsed);
  EXPECT_EQ(parsed.parsed->bt, 0x01);
  EXPECT_EQ(parsed.parsed->ps.size(), 8u);
  EXPECT_EQ(parsed.parsed->pl, hex("ab"));
  EXPECT_EQ(parsed.reassemble(), em);
}

TEST(Pkcs1Test, EmptyPayloadIsValid) {
  const OracleParams p{11, 8};
  EXPECT_TRUE(validate(hex("0001ffffffffffffffff00"), p).valid());
}

TEST(Pkcs1Test, ReportsEveryViolation) {
  const OracleParams p{12, 8};
  // Wrong leading byte, block type 02, short PS containing a foreign byte.
  const auto v = validate(hex("0102ffaa00"), p);
  EXPECT_EQ(names(v), (std::set<std::string>{"LENGTH_MISMATCH", "BAD_LEADING_BYTE",
                                             "BAD_BLOCK_TYPE", "PS_NOT_FF", "PS_TOO_SHORT"}));
  EXPECT_EQ(v.reasons.front(), ReasonCode::kLengthMismatch);
}

TEST(Pkcs1Test, MissingSeparator) {
  const OracleParams p{12, 8};
  const auto v = validate(hex("0001ffffffffffffffffffff"), p);
  EXPECT_EQ(names(v), (std::set<std::string>{"MISSING_SEPARATOR"}));
  EXPECT_FALSE(parse_em(hex("0001ffffffffffffffffffff")).parsed);
}

TEST(Pkcs1Test, EmptyInput) {
  const auto v = validate({}, OracleParams{12, 8});
  EXPECT_EQ(names(v), (std::set<std::string>{"LENGTH_MISMATCH", "BAD_LEADING_BYTE",
                                             "BAD_BLOCK_TYPE", "MISSING_SEPARATOR"}));
}

TEST(Pkcs1Test, SeparatorAtIndexTwo) {
  const auto v = validate(hex("000100aabbccddeeff112233"), OracleParams{12, 8});
  EXPECT_EQ(names(v), (std::set<std::string>{"PS_TOO_SHORT"}));
}

TEST(Pkcs1Test, ReasonNamesRoundTrip) {
  for (int c = 0; c <= static_cast<int>(ReasonCode::kWireDecodeError); ++c) {
    const auto code = static_cast<ReasonCode>(c);
    EXPECT_EQ(reason_from_name(reason_name(code)), code);
  }
  EXPECT_FALSE(reason_from_name("NOPE"));
}

TEST(Pkcs1Test, OracleParamsCheck) {
  EXPECT_TRUE((OracleParams{11, 8}.well_formed()));
  EXPECT_FALSE((OracleParams{10, 8}.well_formed()));
  EXPECT_FALSE((OracleParams{256, 0}.well_formed()));
  EXPECT_THROW((OracleParams{10, 8}.check()), std::invalid_argument);
}

TEST(Pkcs1Test, BuildEm) {
  const OracleParams p{16, 8};
  const Bytes pl = hex("0102030405");
  const Bytes em = build_em(pl, p);
  EXPECT_EQ(em.size(), 16u);
  EXPECT_TRUE(validate(em, p).valid());
  EXPECT_EQ(parse_em(em).parsed->pl, pl);
  EXPECT_THROW(build_em(hex("010203040506"), p), std::invalid_argument);
}

// Property: reassemble(parse(x)) == x whenever parsing succeeds.
TEST(Pkcs1Test, ParseReassembleRoundTrip) {
  std::mt19937_64 rng(7);
  const std::uint8_t alphabet[] = {0x00, 0x01, 0xFF, 0x5A};
  for (int i = 0; i < 20000; ++i) {
    Bytes raw(rng() % 14);
    for (auto& b : raw) b = alphabet[rng() % 4];
    if (rng() % 2 && raw.size() >= 2) raw[0] = 0x00;
    const auto em = parse_em(raw);
    if (em.parsed) EXPECT_EQ(em.reassemble(), raw);
  }
}

TEST(Pkcs1Test, AgreesWithReferenceOnRandomInputs) {
  std::mt19937_64 rng(11);
  const std::uint8_t alphabet[] = {0x00, 0x01, 0x02, 0xFF, 0xAA};
  for (int i = 0; i < 20000; ++i) {
    Bytes raw(rng() % 16);
    for (auto& b : raw) b = alphabet[rng() % 5];
    for (std::size_t min_ps : {1u, 3u, 8u}) {
      const auto v = validate(raw, OracleParams{12, min_ps});
      EXPECT_EQ(names(v), expected_reasons(raw, 12, min_ps)) << to_hex(raw);
      EXPECT_EQ(v.valid(), brute_force_valid(raw, 12, min_ps)) << to_hex(raw);
    }
  }
}

}  // namespace
}  // namespace pkcsbench
