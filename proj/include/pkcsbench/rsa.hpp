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

// Textbook RSA over fixed-width big-endian byte strings. No padding, blinding
// or constant-time guarantees: subjects only need S = EM^d mod n and its
// inverse.

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "pkcsbench/bytes.hpp"

namespace pkcsbench {

// Integer value of the input is >= n.
class RsaDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class RsaKey {
 public:
  // Hex strings, no 0x prefix. Throws std::invalid_argument on bad hex or
  // non-positive components.
  static RsaKey from_hex(std::string_view n, std::string_view e, std::string_view d);

  const mpz_class& n() const { return n_; }
  const mpz_class& e() const { return e_; }
  const mpz_class& d() const { return d_; }

  // Byte length of n.
  std::size_t mod_len() const { return mod_len_; }

  // Probabilistic check of (m^d)^e mod n == m over `trials` random m in
  // [0, n) drawn from a generator seeded with `seed`.
  bool consistent(int trials, std::uint64_t seed) const;

 private:
  RsaKey(mpz_class n, mpz_class e, mpz_class d);

  mpz_class n_;
  mpz_class e_;
  mpz_class d_;
  std::size_t mod_len_ = 0;
};

// Big-endian, exactly `width` bytes. Throws std::invalid_argument if the
// value does not fit.
Bytes encode_fixed(const mpz_class& value, std::size_t width);
mpz_class decode_be(ByteView bytes);

// em^d mod n, mod_len bytes. Requires |em| = mod_len; throws
// std::invalid_argument on a length mismatch and RsaDomainError if em >= n.
Bytes sign(ByteView em, const RsaKey& key);

// sig^e mod n, mod_len bytes. Same error contract as sign().
Bytes verify_raw(ByteView sig, const RsaKey& key);

// Checked-in key material (data/keys/). 2048-bit modulus with e = 3.
const RsaKey& default_key();
// 96-bit modulus (mod_len 12), e = 3. Test sized.
const RsaKey& small_test_key();
// The built-in key whose modulus is `mod_len` bytes; throws
// std::invalid_argument when there is none.
const RsaKey& builtin_key_for(std::size_t mod_len);

}  // namespace pkcsbench
