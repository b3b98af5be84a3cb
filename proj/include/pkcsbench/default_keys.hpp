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

namespace pkcsbench::keys {

struct KeyHex {
  const char* n;
  const char* e;
  const char* d;
};

extern const KeyHex kRsa2048E3;
extern const KeyHex kRsa96E3;

}  // namespace pkcsbench::keys
