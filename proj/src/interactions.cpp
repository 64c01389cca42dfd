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
#include "zsfc/interactions.h"

#include <algorithm>
#include <fstream>
#include <map>

#include "tsv.h"

namespace zsfc {

void sort_history(UserHistory& history) {
  std::stable_sort(history.events.begin(), history.events.end(),
                   [](const InteractionEvent& a, const InteractionEvent& b) { return a.timestamp < b.timestamp; });
}

std::vector<UserHistory> load_interactions(const std::filesystem::path& path, const Catalog& catalog) {
  std::map<std::uint64_t, UserHistory> by_user;
  detail::TsvReader in(path);
  std::vector<std::string_view> f;
  while (in.next(f)) {
    if (f.size() != 4) in.fail("expected 'user<TAB>unix_seconds<TAB>click|order<TAB>item'");
    std::uint64_t user = 0;
    Timestamp ts = 0;
    if (!detail::parse_number(f[0], user)) in.fail("bad user id");
    if (!detail::parse_number(f[1], ts) || ts < 0) in.fail("bad timestamp");
    InteractionEvent e;
    e.timestamp = ts;
    if (f[2] == "click") {
      e.kind = EventKind::Click;
    } else if (f[2] == "order") {
      e.kind = EventKind::Order;
    } else {
      in.fail("event kind must be click or order");
    }
    auto item = catalog.find(f[3]);
    if (!item) in.fail("unknown item '" + std::string(f[3]) + "'");
    e.item = *item;
    auto& h = by_user[user];
    h.user = user;
    h.events.push_back(e);
  }
  std::vector<UserHistory> out;
  out.reserve(by_user.size());
  for (auto& [user, h] : by_user) {
    sort_history(h);
    out.push_back(std::move(h));
  }
  return out;
}

void write_interactions(const std::vector<UserHistory>& histories, const Catalog& catalog,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  out << "# user\tunix_seconds\tkind\titem\n";
  for (const auto& h : histories) {
    for (const auto& e : h.events) {
      out << h.user << '\t' << e.timestamp << '\t' << (e.kind == EventKind::Click ? "click" : "order") << '\t'
          << catalog.key(e.item) << '\n';
    }
  }
}

Timestamp corpus_end(const std::vector<UserHistory>& histories) {
  Timestamp end = 0;
  for (const auto& h : histories) {
    for (const auto& e : h.events) end = std::max(end, e.timestamp);
  }
  return end;
}

}  // namespace zsfc
