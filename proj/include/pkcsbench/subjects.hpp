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

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "pkcsbench/bytes.hpp"
#include "pkcsbench/pkcs1.hpp"
#include "pkcsbench/rsa.hpp"

namespace pkcsbench {

// Built-in stand-ins for a signature-verifying library.
//   strict      accepts iff the recovered block passes the oracle
//   lenient_ps  accepts any all-0xFF PS of at least one byte
//   crashy      strict, but reports a crash when an accepted block's PL
//               contains the trigger byte
enum class SubjectPolicy { kStrict, kLenientPs, kCrashy };

std::string_view policy_name(SubjectPolicy p);
std::optional<SubjectPolicy> policy_from_name(std::string_view name);

inline constexpr std::uint8_t kDefaultCrashTrigger = 0x41;

struct SubjectOutcome {
  bool accepted = false;
  bool crashed = false;
};

class Subject {
 public:
  Subject(SubjectPolicy policy, const RsaKey& key, std::size_t min_ps_len = kDefaultMinPsLen,
          std::uint8_t crash_trigger = kDefaultCrashTrigger);

  // Signs `em` (left-padded with 0x00 to mod_len), recovers the block from
  // the signature and applies the policy. Inputs longer than mod_len or not
  // below the modulus are rejected without signing.
  SubjectOutcome run(ByteView em) const;

  SubjectPolicy policy() const { return policy_; }
  std::size_t mod_len() const { return key_->mod_len(); }

 private:
  SubjectPolicy policy_;
  const RsaKey* key_;
  std::size_t min_ps_len_;
  std::uint8_t crash_trigger_;
};

SubjectOutcome run_subject(ByteView em, SubjectPolicy policy, const RsaKey& key,
                           std::size_t min_ps_len = kDefaultMinPsLen,
                           std::uint8_t crash_trigger = kDefaultCrashTrigger);

}  // namespace pkcsbench
