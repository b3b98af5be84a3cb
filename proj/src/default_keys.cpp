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

// Generated from data/keys/*.json by tools/gen_keys.py; keep in sync.

#include "pkcsbench/default_keys.hpp"

namespace pkcsbench::keys {

const KeyHex kRsa2048E3{
    "b671deed211e113120f5220d88483f8cf0c384612edb784dfce890531438f9697027fb70"
    "469b940204e6a7f74e1ea152130f3ea22241ffe575af92d430cd0ac4537d4b708f320730"
    "8ab57e8d236ff4d16ae1998ee8ffba921ab8eececd8f00bd11bcf8803cbb6d7d32ea7473"
    "cbe939256560094b988df9d4a25c1afd82f24a2b57d55c96aacb90bf4281966ef5fc3daa"
    "36998d789a222c76f74874578991e814f11509299d88636b5470bbe12e62de288d37f6d5"
    "7bffa05ef3984fa38e67e578da2dbdf6a2b921e4f447b6a17323fd118b823e9328388ae8"
    "9ce4693357112032ad6f46ed0f67fdeee277a4d408b195607bdb19ba9e5240cb9a567e7b"
    "26242f2d",
    "3",
    "79a13f48c0beb620c0a36c0905857fb34b2d02eb74925033fdf0603762d0a6464ac5524a"
    "d9bd0d56adef1aa4debf1636b75f7f16c1815543a3ca61e2cb335c82e25387a05f76af75"
    "b1ce545e179ff88b9c96665f45ffd1b6bc7b49df33b4ab28b67dfb00287cf3a8cc9c4da2"
    "87f0d0c398eab0dd105ea68dc192bca901f6dc1bc45d6b025ecff5144f476d17561d3703"
    "b2ea0dc7dafbd3bad8e0314193012b66c4f8d2ec2b63d1e6f2cb4f6ee0851f1cb073178f"
    "b111d32e69ba73209d872d13619b165c67dda40e28f254117f2f07ad3829b8eb89ba8cd1"
    "d35d5733857716cfd6876e930e344103bcf32feaf484ffdded6c76050c8c67467d065352"
    "01fd546b",
};

const KeyHex kRsa96E3{
    "f491965ced02e1322e09b953",
    "3",
    "a30bb99348ab48800d1fed3b",
};

}  // namespace pkcsbench::keys
