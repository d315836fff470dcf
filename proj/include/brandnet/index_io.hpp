// Copyright 2026 The Brandnet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "brandnet/ivf_pq_index.hpp"

namespace brandnet {

// On-disk layout, all integers little-endian:
//   0   "OBIX"
//   4   version   u32
//   8   d         u32
//   12  m         u32
//   16  ksub      u32
//   20  nlist     u32
//   24  count     u32
//   28  coarse centroids   nlist x d f32, row-major
//       sub-centroids      m x ksub x (d / m) f32, row-major
//       per list: length u32, ids u64[length], codes u8[length x m]
//       CRC32 of every preceding byte, u32
inline constexpr char kIndexMagic[4] = {'O', 'B', 'I', 'X'};
inline constexpr std::uint32_t kIndexVersion = 1;
inline constexpr std::size_t kIndexHeaderSize = 28;

std::string serialize_index(const IvfPqIndex& index);

// Throws IndexFormatError on bad magic, unknown version, truncation,
// checksum mismatch or inconsistent header fields.
IvfPqIndex deserialize_index(std::string_view bytes);

void save_index(const IvfPqIndex& index, const std::filesystem::path& path);
IvfPqIndex load_index(const std::filesystem::path& path);

std::uint32_t crc32(std::string_view bytes);

}  // namespace brandnet
