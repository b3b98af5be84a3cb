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

#include <algorithm>
#include <array>
#include <stdexcept>

namespace pkcsbench {

namespace {

constexpr std::array<std::pair<ReasonCode, std::string_view>, 7> kReasonNames{{
    {ReasonCode::kLengthMismatch, "LENGTH_MISMATCH"},
    {ReasonCode::kBadLeadingByte, "BAD_LEADING_BYTE"},
    {ReasonCode::kBadBlockType, "BAD_BLOCK_TYPE"},
    {ReasonCode::kPsNotFf, "PS_NOT_FF"},
    {ReasonCode::kPsTooShort, "PS_TOO_SHORT"},
    {ReasonCode::kMissingSeparator, "MISSING_SEPARATOR"},
    {ReasonCode::kWireDecodeError, "WIRE_DECODE_ERROR"},
}};

// Index of the first 0x00 at index >= 2, or npos.
std::size_t find_separator(ByteView raw) {
  for (std::size_t i = 2; i < raw.size(); ++i) {
    if (raw[i] == 0x00) return i;
  }
  return std::string_view::npos;
}

}  // namespace

std::string_view reason_name(ReasonCode code) {
  for (const auto& [c, name] : kReasonNames) {
    if (c == code) return name;
  }
  return "UNKNOWN";
}

std::optional<ReasonCode> reason_from_name(std::string_view name) {
  for (const auto& [c, n] : kReasonNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

void OracleParams::check() const {
  if (!well_formed()) {
    throw std::invalid_argument(
        "oracle parameters need mod_len >= min_ps_len + 3 (mod_len=" +
        std::to_string(mod_len) + ", min_ps_len=" + std::to_string(min_ps_len) +
        ")");
  }
}

bool Verdict::has(ReasonCode code) const {
  return std::find(reasons.begin(), reasons.end(), code) != reasons.end();
}

std::vector<std::string> Verdict::reason_names() const {
  std::vector<std::string> names;
  names.reserve(reasons.size());
  for (ReasonCode r : reasons) names.emplace_back(reason_name(r));
  return names;
}

Bytes EncodedMessage::reassemble() const {
  if (!parsed) throw std::logic_error("reassemble on unparsed message");
  Bytes out;
  out.reserve(parsed->ps.size() + parsed->pl.size() + 3);
  out.push_back(0x00);
  out.push_back(parsed->bt);
  out.insert(out.end(), parsed->ps.begin(), parsed->ps.end());
  out.push_back(0x00);
  out.insert(out.end(), parsed->pl.begin(), parsed->pl.end());
  return out;
}

EncodedMessage parse_em(ByteView raw) {
  EncodedMessage em{Bytes(raw.begin(), raw.end()), std::nullopt};
  if (raw.size() < 3 || raw[0] != 0x00) return em;
  const std::size_t sep = find_separator(raw);
  if (sep == std::string_view::npos) return em;
  em.parsed = ParsedFields{
      raw[1],
      Bytes(raw.begin() + 2, raw.begin() + static_cast<std::ptrdiff_t>(sep)),
      Bytes(raw.begin() + static_cast<std::ptrdiff_t>(sep) + 1, raw.end()),
  };
  return em;
}

Verdict validate(ByteView raw, const OracleParams& params) {
  Verdict v;
  if (raw.size() != params.mod_len) v.reasons.push_back(ReasonCode::kLengthMismatch);
  if (raw.empty() || raw[0] != 0x00) v.reasons.push_back(ReasonCode::kBadLeadingByte);
  if (raw.size() < 2 || raw[1] != kSignatureBlockType) {
    v.reasons.push_back(ReasonCode::kBadBlockType);
  }
  const std::size_t sep = find_separator(raw);
  if (sep == std::string_view::npos) {
    v.reasons.push_back(ReasonCode::kMissingSeparator);
  } else {
    const auto ps = raw.subspan(2, sep - 2);
    if (!std::all_of(ps.begin(), ps.end(), [](std::uint8_t b) { return b == 0xFF; })) {
      v.reasons.push_back(ReasonCode::kPsNotFf);
    }
    if (ps.size() < params.min_ps_len) v.reasons.push_back(ReasonCode::kPsTooShort);
  }
  std::sort(v.reasons.begin(), v.reasons.end());
  return v;
}

Bytes build_em(ByteView payload, const OracleParams& params) {
  params.check();
  if (payload.size() + params.min_ps_len + 3 > params.mod_len) {
    throw std::invalid_argument("payload too long for modulus");
  }
  Bytes em(params.mod_len, 0xFF);
  em[0] = 0x00;
  em[1] = kSignatureBlockType;
  const std::size_t sep = params.mod_len - payload.size() - 1;
  em[sep] = 0x00;
  std::copy(payload.begin(), payload.end(), em.begin() + static_cast<std::ptrdiff_t>(sep) + 1);
  return em;
}

}  // namespace pkcsbench
