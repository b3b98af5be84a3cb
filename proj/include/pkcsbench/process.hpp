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

#include <sys/types.h>

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pkcsbench {

class ProcessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A spawned child in its own process group. The destructor kills the group
// if the child is still running.
class ChildProcess {
 public:
  // argv[0] is the executable path. Throws ProcessError if spawning fails.
  static ChildProcess spawn(const std::vector<std::string>& argv);

  ChildProcess(ChildProcess&& other) noexcept;
  ChildProcess& operator=(ChildProcess&&) = delete;
  ChildProcess(const ChildProcess&) = delete;
  ~ChildProcess();

  // Exit status (or 128 + signal) once the child is gone; nullopt if it is
  // still running when `timeout` elapses.
  std::optional<int> wait_for(std::chrono::milliseconds timeout);

  // SIGTERM to the group, then SIGKILL after `grace`. Returns the status.
  int terminate(std::chrono::milliseconds grace);

  bool running() const { return !status_.has_value(); }
  pid_t pid() const { return pid_; }

 private:
  explicit ChildProcess(pid_t pid) : pid_(pid) {}
  bool reap(bool block);

  pid_t pid_ = -1;
  std::optional<int> status_;
};

}  // namespace pkcsbench
