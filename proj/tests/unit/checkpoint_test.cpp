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

#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "support.h"

namespace zsfc {
namespace {

ModelParams sample_params(ModelVariant v = ModelVariant::Zsfc) {
  const auto catalog = testing::small_catalog(30, 5, 6, 2);
  auto p = init_params(catalog, v, 6, InitMode::Xavier, 77);
  p.session_b(0, 3) = -0.0f;
  p.order_b(0, 1) = 1e-38f;
  return p;
}

ModelParams reload(const std::vector<char>& bytes) {
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  return load_checkpoint(in);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  for (auto v : kAllVariants) {
    const auto p = sample_params(v);
    const auto bytes = checkpoint_bytes(p);
    const auto q = reload(bytes);
    EXPECT_EQ(q.variant, v);
    EXPECT_EQ(q.seed, 77u);
    EXPECT_EQ(checkpoint_bytes(q), bytes);
    auto a = p.tensor_list();
    auto b = q.tensor_list();
    for (std::size_t t = 0; t < a.size(); ++t) {
      ASSERT_EQ(a[t]->rows(), b[t]->rows());
      EXPECT_EQ(std::memcmp(a[t]->data(), b[t]->data(), a[t]->size() * sizeof(float)), 0);
    }
  }
}

TEST(Checkpoint, HeaderLayout) {
  const auto bytes = checkpoint_bytes(sample_params());
  ASSERT_GT(bytes.size(), 8u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "ZSFC");
  std::uint32_t version = 0;
  for (int i = 3; i >= 0; --i) version = (version << 8) | static_cast<unsigned char>(bytes[4 + i]);
  EXPECT_EQ(version, kCheckpointVersion);
}

TEST(Checkpoint, FileRoundTrip) {
  const auto dir = testing::scratch_dir("checkpoint");
  const auto p = sample_params();
  save_checkpoint(p, dir / "m.ckpt");
  EXPECT_EQ(load_checkpoint(dir / "m.ckpt"), p);
  EXPECT_THROW(load_checkpoint(dir / "missing.ckpt"), DataError);
  std::filesystem::remove_all(dir);
}

TEST(Checkpoint, RejectsCorruption) {
  const auto good = checkpoint_bytes(sample_params());
  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(reload(bad_magic), DataError);
  auto bad_version = good;
  bad_version[4] = 99;
  EXPECT_THROW(reload(bad_version), DataError);
  const std::vector<char> truncated(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(good.size() / 2));
  EXPECT_THROW(reload(truncated), DataError);
  EXPECT_THROW(reload({}), DataError);
}

}  // namespace
}  // namespace zsfc
