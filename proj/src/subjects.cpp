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

#include "pkcsbench/subjects.hpp"

#include <algorithm>

namespace pkcsbench {

std::string_view policy_name(SubjectPolicy p) {
  switch (p) {
    case SubjectPolicy::kStrict: return "strict";
    case SubjectPolicy::kLenientPs: return "lenient_ps";
    case SubjectPolicy::kCrashy: return "crashy";
  }
  return "unknown";
}

std::optional<SubjectPolicy> policy_from_name(std::string_view name) {
  for (auto p : {SubjectPolicy::kStrict, SubjectPolicy::kLenientPs, SubjectPolicy::kCrashy}) {
    if (policy_name(p) == name) return p;
  }
  return std::nullopt;
}

Subject::Subject(SubjectPolicy policy, const RsaKey& key, std::size_t min_ps_len,
                 std::uint8_t crash_trigger)
    : policy_(policy), key_(&key), min_ps_len_(min_ps_len), crash_trigger_(crash_trigger) {}

SubjectOutcome Subject::run(ByteView em) const {
  const std::size_t mod_len = key_->mod_len();
  if (em.size() > mod_len) return {};

  Bytes block(mod_len - em.size(), 0x00);
  block.insert(block.end(), em.begin(), em.end());

  Bytes recovered;
  try {
    recovered = verify_raw(sign(block, *key_), *key_);
  } catch (const RsaDomainError&) {
    return {};
  }

  const OracleParams strict{mod_len, min_ps_len_};
  switch (policy_) {
    case SubjectPolicy::kStrict:
      return {validate(recovered, strict).valid(), false};
    case SubjectPolicy::kLenientPs:
      return {validate(recovered, OracleParams{mod_len, 1}).valid(), false};
    case SubjectPolicy::kCrashy: {
      if (!validate(recovered, strict).valid()) return {};
      const auto em_fields = parse_em(recovered);
      if (!em_fields.parsed) return {};
      const auto& pl = em_fields.parsed->pl;
      const bool hit = std::find(pl.begin(), pl.end(), crash_trigger_) != pl.end();
      return {true, hit};
    }
  }
  return {};
}

SubjectOutcome run_subject(ByteView em, SubjectPolicy policy, const RsaKey& key,
                           std::size_t min_ps_len, std::uint8_t crash_trigger) {
  return Subject(policy, key, min_ps_len, crash_trigger).run(em);
}

}  // namespace pkcsbench
