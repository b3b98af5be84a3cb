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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pkcsbench/pkcs1.hpp"
#include "pkcsbench/record.hpp"

namespace pkcsbench {

class ServiceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServiceOptions {
  std::uint16_t port = 0;  // 0 picks an ephemeral port
  std::string bind_address = "127.0.0.1";
  OracleParams params;
  std::filesystem::path log_path;
  std::string campaign_id;
  std::size_t workers = 8;
  // A connection that stays silent this long is treated as closed.
  std::chrono::milliseconds read_timeout{5000};
  std::size_t max_payload = 8u << 20;
};

// TCP validator. Each connection carries one wire message; each message
// becomes one appended JSONL record. Appends go through a single writer.
class ValidatorService {
 public:
  // Binds, opens the log for appending and starts accepting. Throws
  // ServiceError if the port is taken or the log cannot be opened.
  static std::unique_ptr<ValidatorService> start(ServiceOptions options);

  ~ValidatorService();
  ValidatorService(const ValidatorService&) = delete;
  ValidatorService& operator=(const ValidatorService&) = delete;

  std::uint16_t port() const { return port_; }
  std::size_t records_written() const;

  // Stops accepting, handles every connection already established (including
  // ones still queued in the kernel backlog), flushes the log and returns the
  // total number of records written. Idempotent.
  std::size_t shutdown();

  // Services started and not yet shut down, process wide.
  static int live_instances();

 private:
  explicit ValidatorService(ServiceOptions options);

  void accept_loop();
  void worker_loop();
  void handle_connection(int fd);
  void drain_backlog();
  void append(InputRecord record);

  ServiceOptions options_;
  int listen_fd_ = -1;
  int wake_pipe_[2] = {-1, -1};
  std::uint16_t port_ = 0;

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::deque<int> queue_;
  bool queue_closed_ = false;

  mutable std::mutex log_mu_;
  std::ofstream log_;
  std::size_t records_ = 0;

  std::mutex shutdown_mu_;
  bool stopped_ = false;
  std::size_t final_count_ = 0;

  std::thread acceptor_;
  std::vector<std::thread> workers_;

  static std::atomic<int> live_;
};

}  // namespace pkcsbench
