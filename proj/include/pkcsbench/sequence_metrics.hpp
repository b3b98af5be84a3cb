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

// Pairwise sequence metrics over byte / char strings.
//
//   edit_distance(a, b)  Levenshtein distance (unit insert, delete, substitute)
//   lcs_length(a, b)     longest common subsequence length
//   nlcs(a, b)           lcs_length(a, b) / |a|, with a as the reference
//
// The fast paths are bit-parallel over 64-bit words (Myers / Hyyro for the
// edit distance, Allison-Dix / Hyyro for the LCS): O(ceil(m/64) * n) word
// operations. The *_table variants evaluate the textbook recurrences cell by
// cell and exist for cross-checking.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace pkcsbench::metrics {

using Seq = std::span<const std::uint8_t>;

inline Seq seq_of(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Match-mask table for one pattern; reusable against many texts.
class BitPattern {
 public:
  explicit BitPattern(Seq pattern)
      : m_(pattern.size()), words_(std::max<std::size_t>(1, (pattern.size() + 63) / 64)) {
    if (words_ > 1) {
      wide_ = std::make_unique<std::uint64_t[]>(257 * words_);  // zeroed; row 256 stays zero
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::uint8_t c = pattern[i];
      std::uint64_t* r = mutable_row(c);
      if (!is_present(c)) {
        std::fill(r, r + words_, 0);
        present_[c >> 6] |= std::uint64_t{1} << (c & 63);
      }
      r[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
  }
  explicit BitPattern(std::string_view pattern) : BitPattern(seq_of(pattern)) {}

  std::size_t size() const { return m_; }

  std::size_t edit_distance(Seq text) const {
    if (m_ == 0) return text.size();
    const std::uint64_t high = std::uint64_t{1} << ((m_ - 1) & 63);
    std::size_t score = m_;
    if (words_ == 1) {
      std::uint64_t pv = ~std::uint64_t{0};
      std::uint64_t mv = 0;
      for (const std::uint8_t c : text) {
        const std::uint64_t eq = narrow_eq(c);
        const std::uint64_t xv = eq | mv;
        const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
        std::uint64_t ph = mv | ~(xh | pv);
        std::uint64_t mh = pv & xh;
        if (ph & high) {
          ++score;
        } else if (mh & high) {
          --score;
        }
        // Row 0 of the distance table grows by one per text symbol.
        ph = (ph << 1) | 1;
        mh <<= 1;
        pv = mh | ~(xv | ph);
        mv = ph & xv;
      }
      return score;
    }
    std::vector<std::uint64_t> pv(words_, ~std::uint64_t{0});
    std::vector<std::uint64_t> mv(words_, 0);
    const std::size_t last = words_ - 1;
    for (const std::uint8_t c : text) {
      const std::uint64_t* eqs = row(c);
      std::uint64_t hp_carry = 1;
      std::uint64_t hn_carry = 0;
      std::uint64_t add_carry = 0;
      for (std::size_t w = 0; w < words_; ++w) {
        const std::uint64_t eq = eqs[w];
        const std::uint64_t p = pv[w];
        const std::uint64_t n = mv[w];
        const std::uint64_t xv = eq | n;
        const std::uint64_t x = eq & p;
        const std::uint64_t s1 = x + p;
        const std::uint64_t s2 = s1 + add_carry;
        add_carry = static_cast<std::uint64_t>(s1 < x) | static_cast<std::uint64_t>(s2 < s1);
        const std::uint64_t xh = (s2 ^ p) | eq;
        std::uint64_t ph = n | ~(xh | p);
        std::uint64_t mh = p & xh;
        if (w == last) {
          if (ph & high) {
            ++score;
          } else if (mh & high) {
            --score;
          }
        }
        const std::uint64_t ph_out = ph >> 63;
        const std::uint64_t mh_out = mh >> 63;
        ph = (ph << 1) | hp_carry;
        mh = (mh << 1) | hn_carry;
        hp_carry = ph_out;
        hn_carry = mh_out;
        pv[w] = mh | ~(xv | ph);
        mv[w] = ph & xv;
      }
    }
    return score;
  }

  std::size_t lcs_length(Seq text) const {
    if (m_ == 0) return 0;
    const std::uint64_t tail_mask =
        (m_ & 63) == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << (m_ & 63)) - 1;
    if (words_ == 1) {
      std::uint64_t v = ~std::uint64_t{0};
      for (const std::uint8_t c : text) {
        const std::uint64_t u = v & narrow_eq(c);
        v = (v + u) | (v - u);
      }
      return m_ - static_cast<std::size_t>(std::popcount(v & tail_mask));
    }
    std::vector<std::uint64_t> v(words_, ~std::uint64_t{0});
    for (const std::uint8_t c : text) {
      const std::uint64_t* eqs = row(c);
      std::uint64_t carry = 0;
      for (std::size_t w = 0; w < words_; ++w) {
        const std::uint64_t u = v[w] & eqs[w];
        const std::uint64_t s1 = v[w] + u;
        const std::uint64_t s2 = s1 + carry;
        carry = static_cast<std::uint64_t>(s1 < u) | static_cast<std::uint64_t>(s2 < s1);
        v[w] = s2 | (v[w] - u);
      }
    }
    std::size_t ones = 0;
    for (std::size_t w = 0; w + 1 < words_; ++w) ones += static_cast<std::size_t>(std::popcount(v[w]));
    ones += static_cast<std::size_t>(std::popcount(v[words_ - 1] & tail_mask));
    return m_ - ones;
  }

 private:
  bool is_present(std::uint8_t c) const { return (present_[c >> 6] >> (c & 63)) & 1; }

  std::uint64_t narrow_eq(std::uint8_t c) const { return is_present(c) ? narrow_[c] : 0; }

  const std::uint64_t* row(std::uint8_t c) const {
    return wide_.get() + (is_present(c) ? c : 256) * words_;
  }

  std::uint64_t* mutable_row(std::uint8_t c) {
    return words_ == 1 ? &narrow_[c] : wide_.get() + static_cast<std::size_t>(c) * words_;
  }

  std::size_t m_;
  std::size_t words_;
  std::array<std::uint64_t, 4> present_{};
  // Rows are only meaningful for symbols flagged in present_.
  std::array<std::uint64_t, 256> narrow_;
  std::unique_ptr<std::uint64_t[]> wide_;
};

inline std::size_t edit_distance(Seq a, Seq b) {
  // Symmetric; the shorter string is the cheaper pattern.
  return a.size() <= b.size() ? BitPattern(a).edit_distance(b) : BitPattern(b).edit_distance(a);
}
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  return edit_distance(seq_of(a), seq_of(b));
}

inline std::size_t lcs_length(Seq a, Seq b) {
  return a.size() <= b.size() ? BitPattern(a).lcs_length(b) : BitPattern(b).lcs_length(a);
}
inline std::size_t lcs_length(std::string_view a, std::string_view b) {
  return lcs_length(seq_of(a), seq_of(b));
}

// Throws std::invalid_argument when the reference `a` is empty.
inline double nlcs(Seq a, Seq b) {
  if (a.empty()) throw std::invalid_argument("nlcs: reference sequence is empty");
  return static_cast<double>(lcs_length(a, b)) / static_cast<double>(a.size());
}
inline double nlcs(std::string_view a, std::string_view b) { return nlcs(seq_of(a), seq_of(b)); }

// D[i][0] = i, D[0][j] = j,
// D[i][j] = D[i-1][j-1] if a[i] = b[j], else 1 + min(D[i-1][j], D[i][j-1], D[i-1][j-1]).
inline std::size_t edit_distance_table(Seq a, Seq b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1]
                                    : 1 + std::min({prev[j], cur[j - 1], prev[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}
inline std::size_t edit_distance_table(std::string_view a, std::string_view b) {
  return edit_distance_table(seq_of(a), seq_of(b));
}

inline std::size_t lcs_length_table(Seq a, Seq b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}
inline std::size_t lcs_length_table(std::string_view a, std::string_view b) {
  return lcs_length_table(seq_of(a), seq_of(b));
}

}  // namespace pkcsbench::metrics
