// Copyright 2023 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfair/bundle.h"

#include "qfair/errors.h"

namespace qfair {

Bundle Bundle::Of(std::initializer_list<int> goods) {
  return FromGoods(std::vector<int>(goods));
}

Bundle Bundle::FromGoods(const std::vector<int>& goods) {
  std::uint64_t mask = 0;
  for (int g : goods) {
    if (g < 0 || g >= kMaxGoods) {
      throw InvalidArgument("good index out of range: " + std::to_string(g));
    }
    mask |= std::uint64_t{1} << g;
  }
  return Bundle(mask);
}

Bundle Bundle::FromLabels(const std::vector<int>& labels, int m) {
  std::uint64_t mask = 0;
  for (int label : labels) {
    if (label < 1 || label > m) {
      throw InvalidArgument("good label " + std::to_string(label) +
                            " outside [1, " + std::to_string(m) + "]");
    }
    mask |= std::uint64_t{1} << (label - 1);
  }
  return Bundle(mask);
}

std::vector<int> Bundle::Goods() const {
  std::vector<int> out;
  for (std::uint64_t rest = mask_; rest != 0; rest &= rest - 1) {
    out.push_back(std::countr_zero(rest));
  }
  return out;
}

std::vector<int> Bundle::Labels() const {
  std::vector<int> out = Goods();
  for (int& g : out) ++g;
  return out;
}

std::string Bundle::ToString() const {
  std::string out = "{";
  bool first = true;
  for (int label : Labels()) {
    if (!first) out += ",";
    out += std::to_string(label);
    first = false;
  }
  return out + "}";
}

void Allocation::Validate(int m) const {
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const Bundle b = bundles[i];
    if (!b.FitsIn(m)) {
      throw InvalidArgument("bundle of agent " + std::to_string(i + 1) +
                            " reaches outside the good set");
    }
    if ((seen & b.mask()) != 0) {
      throw InvalidArgument("bundles overlap at agent " +
                            std::to_string(i + 1));
    }
    seen |= b.mask();
  }
  if (seen != FullMask(m)) {
    throw InvalidArgument("allocation leaves goods " +
                          Bundle(FullMask(m) & ~seen).ToString() +
                          " unallocated");
  }
}

Allocation Allocation::FromDigits(const std::vector<int>& agent_of_good,
                                  int n) {
  Allocation a;
  a.bundles.assign(n, Bundle());
  for (std::size_t j = 0; j < agent_of_good.size(); ++j) {
    const int i = agent_of_good[j];
    if (i < 0 || i >= n) throw InvalidArgument("agent digit out of range");
    a.bundles[i] = a.bundles[i].With(static_cast<int>(j));
  }
  return a;
}

std::vector<int> Allocation::AgentOfGood(int m) const {
  std::vector<int> out(m, -1);
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    for (int g : bundles[i].Goods()) {
      if (g < m) out[g] = static_cast<int>(i);
    }
  }
  return out;
}

}  // namespace qfair
