// Copyright 2026 The zsfc Authors
// SPDX-License-Identifier: Apache-2.0
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
#include "zsfc/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace zsfc {

namespace {

constexpr char kMagic[4] = {'Z', 'S', 'F', 'C'};

template <typename U>
void put(std::ostream& out, U v) {
  static_assert(std::is_integral_v<U>);
  unsigned char buf[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), sizeof(U));
}

template <typename U>
U get(std::istream& in) {
  unsigned char buf[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(U))) throw DataError("checkpoint truncated");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<U>(v);
}

struct ManifestEntry {
  std::string name;
  std::uint32_t rows;
  std::uint32_t cols;
  std::uint64_t offset;
};

}  // namespace

void save_checkpoint(const ModelParams& params, std::ostream& out) {
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.variant));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.n_items()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.n_categories()));
  put<std::uint64_t>(out, params.seed);

  std::vector<ManifestEntry> manifest;
  std::uint64_t offset = 0;
  params.for_each([&](const char* name, const Matrix<float>& m) {
    manifest.push_back({name, static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols()), offset});
    offset += m.size() * sizeof(float);
  });
  put<std::uint32_t>(out, static_cast<std::uint32_t>(manifest.size()));
  for (const auto& e : manifest) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    put<std::uint32_t>(out, e.rows);
    put<std::uint32_t>(out, e.cols);
    put<std::uint64_t>(out, e.offset);
  }
  params.for_each([&](const char*, const Matrix<float>& m) {
    for (float v : m.flat()) put<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  });
  if (!out) throw DataError("checkpoint write failed");
}

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save_checkpoint(params, out);
}

ModelParams load_checkpoint(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw DataError("not a checkpoint (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) throw DataError("unsupported checkpoint version " + std::to_string(version));
  const auto variant = get<std::uint32_t>(in);
  if (variant > static_cast<std::uint32_t>(ModelVariant::Zsfc)) throw DataError("unknown variant tag");
  const auto dim = get<std::uint32_t>(in);
  const auto n_items = get<std::uint32_t>(in);
  const auto n_categories = get<std::uint32_t>(in);
  ModelParams p = ModelParams::zeros(static_cast<ModelVariant>(variant), n_items, n_categories, dim);
  p.seed = get<std::uint64_t>(in);

  const auto count = get<std::uint32_t>(in);
  std::vector<ManifestEntry> manifest(count);
  for (auto& e : manifest) {
    const auto len = get<std::uint32_t>(in);
    if (len > 256) throw DataError("checkpoint tensor name too long");
    e.name.resize(len);
    if (!in.read(e.name.data(), len)) throw DataError("checkpoint truncated");
    e.rows = get<std::uint32_t>(in);
    e.cols = get<std::uint32_t>(in);
    e.offset = get<std::uint64_t>(in);
  }
  std::size_t next = 0;
  std::uint64_t expected_offset = 0;
  p.for_each([&](const char* name, Matrix<float>& m) {
    if (next >= manifest.size()) throw DataError(std::string("checkpoint lacks tensor ") + name);
    const auto& e = manifest[next++];
    if (e.name != name || e.rows != m.rows() || e.cols != m.cols() || e.offset != expected_offset) {
      throw DataError("checkpoint manifest mismatch at tensor " + e.name);
    }
    expected_offset += m.size() * sizeof(float);
  });
  if (next != manifest.size()) throw DataError("checkpoint has unexpected extra tensors");
  p.for_each([&](const char*, Matrix<float>& m) {
    for (auto& v : m.flat()) v = std::bit_cast<float>(get<std::uint32_t>(in));
  });
  return p;
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_checkpoint(in);
}

std::vector<char> checkpoint_bytes(const ModelParams& params) {
  std::ostringstream out(std::ios::binary);
  save_checkpoint(params, out);
  const std::string s = out.str();
  return {s.begin(), s.end()};
}

}  // namespace zsfc
