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

#include "pkcsbench/rsa.hpp"

#include <string>
#include <utility>

#include "pkcsbench/default_keys.hpp"

namespace pkcsbench {

namespace {

mpz_class parse_hex_component(std::string_view hex, const char* what) {
  mpz_class v;
  if (hex.empty() || v.set_str(std::string(hex), 16) != 0) {
    throw std::invalid_argument(std::string("bad hex for RSA component ") + what);
  }
  if (v <= 0) throw std::invalid_argument(std::string("RSA component must be positive: ") + what);
  return v;
}

Bytes power_mod(ByteView input, const mpz_class& exponent, const RsaKey& key) {
  if (input.size() != key.mod_len()) {
    throw std::invalid_argument("input must be exactly mod_len bytes (got " +
                                std::to_string(input.size()) + ", want " +
                                std::to_string(key.mod_len()) + ")");
  }
  const mpz_class m = decode_be(input);
  if (m >= key.n()) throw RsaDomainError("input integer is not below the modulus");
  mpz_class out;
  mpz_powm(out.get_mpz_t(), m.get_mpz_t(), exponent.get_mpz_t(), key.n().get_mpz_t());
  return encode_fixed(out, key.mod_len());
}

}  // namespace

RsaKey::RsaKey(mpz_class n, mpz_class e, mpz_class d)
    : n_(std::move(n)), e_(std::move(e)), d_(std::move(d)) {
  mod_len_ = (mpz_sizeinbase(n_.get_mpz_t(), 2) + 7) / 8;
}

RsaKey RsaKey::from_hex(std::string_view n, std::string_view e, std::string_view d) {
  return RsaKey(parse_hex_component(n, "n"), parse_hex_component(e, "e"),
                parse_hex_component(d, "d"));
}

bool RsaKey::consistent(int trials, std::uint64_t seed) const {
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(static_cast<unsigned long>(seed));
  for (int i = 0; i < trials; ++i) {
    const mpz_class m = rng.get_z_range(n_);
    mpz_class s, back;
    mpz_powm(s.get_mpz_t(), m.get_mpz_t(), d_.get_mpz_t(), n_.get_mpz_t());
    mpz_powm(back.get_mpz_t(), s.get_mpz_t(), e_.get_mpz_t(), n_.get_mpz_t());
    if (back != m) return false;
  }
  return true;
}

Bytes encode_fixed(const mpz_class& value, std::size_t width) {
  if (value < 0) throw std::invalid_argument("negative value");
  const std::size_t needed = value == 0 ? 0 : (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  if (needed > width) throw std::invalid_argument("value wider than target width");
  Bytes out(width, 0);
  std::size_t written = 0;
  mpz_export(out.data() + (width - needed), &written, 1, 1, 1, 0, value.get_mpz_t());
  return out;
}

mpz_class decode_be(ByteView bytes) {
  mpz_class v;
  if (!bytes.empty()) mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return v;
}

Bytes sign(ByteView em, const RsaKey& key) { return power_mod(em, key.d(), key); }

Bytes verify_raw(ByteView sig, const RsaKey& key) { return power_mod(sig, key.e(), key); }

const RsaKey& default_key() {
  static const RsaKey key =
      RsaKey::from_hex(keys::kRsa2048E3.n, keys::kRsa2048E3.e, keys::kRsa2048E3.d);
  return key;
}

const RsaKey& small_test_key() {
  static const RsaKey key =
      RsaKey::from_hex(keys::kRsa96E3.n, keys::kRsa96E3.e, keys::kRsa96E3.d);
  return key;
}

const RsaKey& builtin_key_for(std::size_t mod_len) {
  if (mod_len == default_key().mod_len()) return default_key();
  if (mod_len == small_test_key().mod_len()) return small_test_key();
  throw std::invalid_argument("no built-in RSA key with a " + std::to_string(mod_len) +
                              "-byte modulus (available: 256, 12)");
}

}  // namespace pkcsbench
