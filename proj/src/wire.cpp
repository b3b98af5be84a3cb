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

#include "pkcsbench/wire.hpp"

#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

namespace pkcsbench {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto b = s.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kSpace);
  return s.substr(b, e - b + 1);
}

class Fd {
 public:
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }

 private:
  int fd_;
};

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

}  // namespace

WireMessage decode_wire(std::string_view payload) {
  payload = trim(payload);
  WireMessage msg;
  std::string_view hex = payload;
  if (const auto comma = payload.find(','); comma != std::string_view::npos) {
    hex = trim(payload.substr(0, comma));
    const std::string_view status = trim(payload.substr(comma + 1));
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(status.data(), status.data() + status.size(), value);
    if (status.empty() || ec != std::errc() || ptr != status.data() + status.size()) {
      return msg;
    }
    msg.status = value;
  }
  msg.em = from_hex(hex);
  return msg;
}

std::string encode_wire(ByteView em, std::optional<std::int64_t> status) {
  std::string out = to_hex(em);
  if (status) {
    out += ',';
    out += std::to_string(*status);
  }
  return out;
}

void send_wire(const std::string& host, std::uint16_t port, std::string_view payload,
               bool wait_for_close, std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw WireError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  Fd fd(::socket(res->ai_family, res->ai_socktype | SOCK_CLOEXEC, res->ai_protocol));
  if (fd.get() < 0) {
    ::freeaddrinfo(res);
    throw WireError(errno_text("socket"));
  }
  const int rc = ::connect(fd.get(), res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc < 0) throw WireError(errno_text(("connect to port " + service).c_str()));

  std::size_t sent = 0;
  while (sent < payload.size()) {
    const ssize_t n = ::send(fd.get(), payload.data() + sent, payload.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw WireError(errno_text("send"));
    }
    sent += static_cast<std::size_t>(n);
  }
  ::shutdown(fd.get(), SHUT_WR);
  if (!wait_for_close) return;

  pollfd pfd{fd.get(), POLLIN, 0};
  char sink[64];
  for (;;) {
    const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) throw WireError("timed out waiting for validator acknowledgement");
    const ssize_t n = ::recv(fd.get(), sink, sizeof sink, 0);
    if (n == 0) return;
    if (n < 0 && errno != EINTR) {
      if (errno == ECONNRESET) return;
      throw WireError(errno_text("recv"));
    }
  }
}

}  // namespace pkcsbench
