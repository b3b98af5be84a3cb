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

#include "pkcsbench/validator_service.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "pkcsbench/bytes.hpp"
#include "pkcsbench/wire.hpp"

namespace pkcsbench {

std::atomic<int> ValidatorService::live_{0};

namespace {

std::string errno_text(const std::string& what) { return what + ": " + std::strerror(errno); }

}  // namespace

ValidatorService::ValidatorService(ServiceOptions options) : options_(std::move(options)) {}

std::unique_ptr<ValidatorService> ValidatorService::start(ServiceOptions options) {
  options.params.check();
  if (options.workers == 0) options.workers = 1;
  std::unique_ptr<ValidatorService> svc(new ValidatorService(std::move(options)));
  const auto& opts = svc->options_;

  in_addr addr{};
  if (::inet_pton(AF_INET, opts.bind_address.c_str(), &addr) != 1) {
    throw ServiceError("bad bind address " + opts.bind_address);
  }
  svc->listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0);
  if (svc->listen_fd_ < 0) throw ServiceError(errno_text("socket"));
  const int one = 1;
  ::setsockopt(svc->listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(opts.port);
  sa.sin_addr = addr;
  if (::bind(svc->listen_fd_, reinterpret_cast<sockaddr*>(&sa), sizeof sa) < 0) {
    const std::string msg = errno_text("cannot bind port " + std::to_string(opts.port));
    ::close(svc->listen_fd_);
    svc->listen_fd_ = -1;
    throw ServiceError(msg);
  }
  if (::listen(svc->listen_fd_, SOMAXCONN) < 0) {
    const std::string msg = errno_text("listen");
    ::close(svc->listen_fd_);
    svc->listen_fd_ = -1;
    throw ServiceError(msg);
  }
  socklen_t len = sizeof sa;
  ::getsockname(svc->listen_fd_, reinterpret_cast<sockaddr*>(&sa), &len);
  svc->port_ = ntohs(sa.sin_port);

  if (opts.log_path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(opts.log_path.parent_path(), ec);
  }
  svc->log_.open(opts.log_path, std::ios::out | std::ios::app);
  if (!svc->log_) {
    ::close(svc->listen_fd_);
    svc->listen_fd_ = -1;
    throw ServiceError("cannot open log " + opts.log_path.string());
  }
  if (::pipe2(svc->wake_pipe_, O_CLOEXEC) < 0) {
    ::close(svc->listen_fd_);
    svc->listen_fd_ = -1;
    throw ServiceError(errno_text("pipe"));
  }

  ++live_;
  svc->acceptor_ = std::thread(&ValidatorService::accept_loop, svc.get());
  for (std::size_t i = 0; i < svc->options_.workers; ++i) {
    svc->workers_.emplace_back(&ValidatorService::worker_loop, svc.get());
  }
  return svc;
}

ValidatorService::~ValidatorService() {
  if (acceptor_.joinable()) shutdown();
  for (int& fd : wake_pipe_) {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
}

int ValidatorService::live_instances() { return live_.load(); }

std::size_t ValidatorService::records_written() const {
  std::lock_guard lock(log_mu_);
  return records_;
}

void ValidatorService::accept_loop() {
  pollfd fds[2] = {{listen_fd_, POLLIN, 0}, {wake_pipe_[0], POLLIN, 0}};
  for (;;) {
    const int ready = ::poll(fds, 2, -1);
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (fds[1].revents != 0) break;
    if (fds[0].revents & POLLIN) drain_backlog();
  }
  drain_backlog();
  ::close(listen_fd_);
  listen_fd_ = -1;
  {
    std::lock_guard lock(queue_mu_);
    queue_closed_ = true;
  }
  queue_cv_.notify_all();
}

void ValidatorService::drain_backlog() {
  for (;;) {
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR || errno == ECONNABORTED) continue;
      return;  // EAGAIN: backlog empty
    }
    {
      std::lock_guard lock(queue_mu_);
      queue_.push_back(fd);
    }
    queue_cv_.notify_one();
  }
}

void ValidatorService::worker_loop() {
  for (;;) {
    int fd = -1;
    {
      std::unique_lock lock(queue_mu_);
      queue_cv_.wait(lock, [this] { return queue_closed_ || !queue_.empty(); });
      if (queue_.empty()) return;
      fd = queue_.front();
      queue_.pop_front();
    }
    handle_connection(fd);
  }
}

void ValidatorService::handle_connection(int fd) {
  timeval tv{};
  tv.tv_sec = options_.read_timeout.count() / 1000;
  tv.tv_usec = (options_.read_timeout.count() % 1000) * 1000;
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);

  std::string payload;
  bool overflow = false;
  char buf[4096];
  for (;;) {
    const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n > 0) {
      if (payload.size() + static_cast<std::size_t>(n) > options_.max_payload) {
        overflow = true;
      } else {
        payload.append(buf, static_cast<std::size_t>(n));
      }
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    break;  // peer closed, timed out or reset
  }

  InputRecord record;
  record.campaign_id = options_.campaign_id;
  const WireMessage msg = overflow ? WireMessage{} : decode_wire(payload);
  record.crashed = msg.crashed();
  if (msg.status && !msg.crashed()) record.status = msg.status;
  if (msg.em) {
    const Verdict v = validate(*msg.em, options_.params);
    record.hex = to_hex(*msg.em);
    record.valid = v.valid();
    record.reasons = v.reason_names();
  } else {
    record.valid = false;
    record.reasons = {std::string(reason_name(ReasonCode::kWireDecodeError))};
    record.wire_hex = to_hex(as_bytes(payload));
  }
  append(std::move(record));
  ::close(fd);
}

void ValidatorService::append(InputRecord record) {
  std::lock_guard lock(log_mu_);
  record.timestamp_ms = now_ms();
  log_ << to_json_line(record) << '\n';
  log_.flush();
  ++records_;
}

std::size_t ValidatorService::shutdown() {
  std::lock_guard guard(shutdown_mu_);
  if (stopped_) return final_count_;
  const char wake = 'x';
  while (::write(wake_pipe_[1], &wake, 1) < 0 && errno == EINTR) {
  }
  if (acceptor_.joinable()) acceptor_.join();
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
  {
    std::lock_guard lock(log_mu_);
    log_.flush();
    log_.close();
    final_count_ = records_;
  }
  stopped_ = true;
  --live_;
  return final_count_;
}

}  // namespace pkcsbench
