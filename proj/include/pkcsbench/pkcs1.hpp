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

// PKCS#1 v1.5 signature block format oracle.
//
//   EM = 0x00 || BT || PS || 0x00 || PL
//
// A block is valid for a modulus of `mod_len` bytes iff |EM| = mod_len,
// BT = 0x01, PS is all 0xFF and at least `min_ps_len` bytes long. PL is an
// opaque byte string; its DigestInfo content is never inspected.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pkcsbench/bytes.hpp"

namespace pkcsbench {

enum class ReasonCode : std::uint8_t {
  kLengthMismatch,
  kBadLeadingByte,
  kBadBlockType,
  kPsNotFf,
  kPsTooShort,
  kMissingSeparator,
  // Not produced by validate(); the validator service uses it for payloads
  // that are not hex.
  kWireDecodeError,
};

// "LENGTH_MISMATCH", "PS_NOT_FF", ...
std::string_view reason_name(ReasonCode code);
std::optional<ReasonCode> reason_from_name(std::string_view name);

inline constexpr std::uint8_t kSignatureBlockType = 0x01;
inline constexpr std::size_t kDefaultMinPsLen = 8;

struct OracleParams {
  std::size_t mod_len = 256;
  std::size_t min_ps_len = kDefaultMinPsLen;

  // mod_len >= min_ps_len + 3 and both positive; otherwise no valid EM exists.
  bool well_formed() const {
    return mod_len > 0 && min_ps_len > 0 && mod_len >= min_ps_len + 3;
  }
  // Throws std::invalid_argument when not well formed.
  void check() const;
};

struct Verdict {
  // Ordered by ReasonCode value; empty iff the input is valid.
  std::vector<ReasonCode> reasons;

  bool valid() const { return reasons.empty(); }
  bool has(ReasonCode code) const;
  std::vector<std::string> reason_names() const;
};

struct ParsedFields {
  std::uint8_t bt = 0;
  Bytes ps;
  Bytes pl;
};

struct EncodedMessage {
  Bytes raw;
  std::optional<ParsedFields> parsed;

  // 0x00 || bt || ps || 0x00 || pl; requires parsed.
  Bytes reassemble() const;
};

// Locates PS as the bytes strictly between index 1 and the first 0x00 at
// index >= 2. Populates `parsed` iff raw[0] == 0x00, |raw| >= 3 and such a
// separator exists. PS need not be all 0xFF to parse.
EncodedMessage parse_em(ByteView raw);

// Reports every violated constraint, not only the first.
Verdict validate(ByteView raw, const OracleParams& params);

// Builds a valid block with the given PL; PS fills the remaining space.
// Throws std::invalid_argument when PL leaves less than min_ps_len for PS.
Bytes build_em(ByteView payload, const OracleParams& params);

}  // namespace pkcsbench
