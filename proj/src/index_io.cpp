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

#include "brandnet/index_io.hpp"

#include <zlib.h>

#include <limits>
#include <vector>

#include "binary_io.hpp"
#include "brandnet/error.hpp"
#include "text_io.hpp"

namespace brandnet {

std::uint32_t crc32(std::string_view bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  const auto* data = reinterpret_cast<const Bytef*>(bytes.data());
  std::size_t left = bytes.size();
  while (left > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(left, std::numeric_limits<uInt>::max()));
    crc = ::crc32(crc, data, chunk);
    data += chunk;
    left -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::string serialize_index(const IvfPqIndex& index) {
  const ProductQuantizer& pq = index.pq();
  if (index.count() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("serialize_index: count does not fit the u32 header field");
  }
  binary::Writer w;
  w.bytes(std::string_view(kIndexMagic, 4));
  w.u32(kIndexVersion);
  w.u32(static_cast<std::uint32_t>(index.dim()));
  w.u32(static_cast<std::uint32_t>(pq.m()));
  w.u32(static_cast<std::uint32_t>(pq.ksub()));
  w.u32(static_cast<std::uint32_t>(index.nlist()));
  w.u32(static_cast<std::uint32_t>(index.count()));
  for (float v : index.coarse_centroids()) w.f32(v);
  for (float v : pq.centroids()) w.f32(v);
  for (std::size_t l = 0; l < index.nlist(); ++l) {
    const InvertedList& list = index.list(l);
    w.u32(static_cast<std::uint32_t>(list.ids.size()));
    for (VectorId id : list.ids) w.u64(id);
    w.bytes(std::string_view(reinterpret_cast<const char*>(list.codes.data()), list.codes.size()));
  }
  const std::uint32_t checksum = crc32(w.data());
  w.u32(checksum);
  return w.take();
}

namespace {
[[noreturn]] void format_error(IndexFormatError::Kind kind, const std::string& why) {
  throw IndexFormatError(kind, "index file: " + why);
}
}  // namespace

IvfPqIndex deserialize_index(std::string_view bytes) {
  using Kind = IndexFormatError::Kind;
  binary::Reader r(bytes);
  std::string_view magic;
  if (!r.bytes(4, magic)) format_error(Kind::kTruncated, "shorter than the magic number");
  if (magic != std::string_view(kIndexMagic, 4)) format_error(Kind::kBadMagic, "bad magic number");
  std::uint32_t version = 0;
  if (!r.u32(version)) format_error(Kind::kTruncated, "truncated header");
  if (version != kIndexVersion) format_error(Kind::kBadVersion, "unsupported version " + std::to_string(version));
  std::uint32_t d = 0, m = 0, ksub = 0, nlist = 0, count = 0;
  if (!r.u32(d) || !r.u32(m) || !r.u32(ksub) || !r.u32(nlist) || !r.u32(count)) {
    format_error(Kind::kTruncated, "truncated header");
  }
  if (d == 0 || m == 0 || d % m != 0 || ksub == 0 || ksub > 256 || nlist == 0) {
    format_error(Kind::kInconsistent, "invalid header dimensions");
  }
  // Size checks before allocating anything the header claims.
  const std::uint64_t coarse_n = std::uint64_t{nlist} * d;
  const std::uint64_t sub_n = std::uint64_t{ksub} * d;
  if (r.remaining() < (coarse_n + sub_n) * 4) format_error(Kind::kTruncated, "truncated centroid tables");
  std::vector<float> coarse(coarse_n);
  for (float& v : coarse) r.f32(v);
  std::vector<float> sub(sub_n);
  for (float& v : sub) r.f32(v);

  std::vector<InvertedList> lists(nlist);
  std::uint64_t total = 0;
  for (InvertedList& list : lists) {
    std::uint32_t len = 0;
    if (!r.u32(len)) format_error(Kind::kTruncated, "truncated inverted list header");
    if (r.remaining() < std::uint64_t{len} * (8 + m)) format_error(Kind::kTruncated, "truncated inverted list");
    list.ids.resize(len);
    for (VectorId& id : list.ids) r.u64(id);
    std::string_view codes;
    r.bytes(std::size_t{len} * m, codes);
    list.codes.assign(codes.begin(), codes.end());
    total += len;
  }
  const std::size_t payload_size = r.position();
  std::uint32_t stored = 0;
  if (!r.u32(stored)) format_error(Kind::kTruncated, "missing checksum");
  if (r.remaining() != 0) format_error(Kind::kInconsistent, "trailing bytes after checksum");
  if (crc32(bytes.substr(0, payload_size)) != stored) format_error(Kind::kChecksum, "checksum mismatch");
  if (total != count) format_error(Kind::kInconsistent, "list lengths do not add up to count");

  IvfPqIndex index(d, std::move(coarse), ProductQuantizer(d, m, ksub, std::move(sub)));
  for (std::uint32_t l = 0; l < nlist; ++l) {
    for (std::uint8_t c : lists[l].codes) {
      if (c >= ksub) format_error(Kind::kInconsistent, "code entry exceeds ksub");
    }
    try {
      index.restore_list(l, std::move(lists[l]));
    } catch (const std::invalid_argument& e) {
      format_error(Kind::kInconsistent, e.what());
    }
  }
  return index;
}

void save_index(const IvfPqIndex& index, const std::filesystem::path& path) {
  text::write_file(path, serialize_index(index));
}

IvfPqIndex load_index(const std::filesystem::path& path) { return deserialize_index(text::read_file(path)); }

}  // namespace brandnet
