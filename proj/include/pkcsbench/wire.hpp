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

// Harness -> validator wire format. One message per TCP connection,
// terminated by the sender closing (or half-closing) the connection:
//
//   message := HEX [ "," STATUS ]
//
// HEX is the encoded message in upper- or lowercase hex. STATUS is a decimal
// integer; -1 means the subject crashed while processing the input.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pkcsbench/bytes.hpp"

namespace pkcsbench {

inline constexpr std::int64_t kCrashStatus = -1;

class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WireMessage {
  std::optional<Bytes> em;  // nullopt: payload did not decode
  std::optional<std::int64_t> status;
  bool crashed() const { return status == kCrashStatus; }
};

// Surrounding whitespace is ignored.
WireMessage decode_wire(std::string_view payload);

std::string encode_wire(ByteView em, std::optional<std::int64_t> status = std::nullopt);

// Connects to host:port, sends `payload` and half-closes. When
// `wait_for_close` is set, blocks until the server closes its side, which
// the validator does only after the record is appended. Throws WireError.
void send_wire(const std::string& host, std::uint16_t port, std::string_view payload,
               bool wait_for_close = true,
               std::chrono::milliseconds timeout = std::chrono::seconds(10));

}  // namespace pkcsbench
