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

#include "qfair/matroid.h"

#include <algorithm>
#include <numeric>

#include "qfair/errors.h"

namespace qfair {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void CheckGround(int ground_size) {
  if (ground_size < 0 || ground_size > kMaxGoods) {
    throw InvalidArgument("matroid ground size must be in [0, 63], got " +
                          std::to_string(ground_size));
  }
}

int Find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

Matroid Matroid::Uniform(int ground_size, int rank) {
  CheckGround(ground_size);
  if (rank < 0) throw InvalidArgument("uniform matroid rank must be >= 0");
  return Matroid(ground_size,
                 std::make_shared<const Spec>(UniformMatroid{rank}));
}

Matroid Matroid::Partition(int ground_size, std::vector<Bundle> blocks,
                           std::vector<int> capacities) {
  CheckGround(ground_size);
  if (blocks.size() != capacities.size()) {
    throw InvalidArgument("partition matroid needs one capacity per block");
  }
  std::uint64_t seen = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!blocks[b].FitsIn(ground_size)) {
      throw InvalidArgument("partition block outside the ground set");
    }
    if ((seen & blocks[b].mask()) != 0) {
      throw InvalidArgument("partition blocks overlap");
    }
    if (capacities[b] < 0) {
      throw InvalidArgument("partition capacity must be >= 0");
    }
    seen |= blocks[b].mask();
  }
  if (seen != FullMask(ground_size)) {
    throw InvalidArgument("partition blocks must cover the ground set");
  }
  return Matroid(ground_size,
                 std::make_shared<const Spec>(PartitionMatroid{
                     std::move(blocks), std::move(capacities)}));
}

Matroid Matroid::Graphic(int num_vertices,
                         std::vector<std::pair<int, int>> edges) {
  CheckGround(static_cast<int>(edges.size()));
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices) {
      throw InvalidArgument("graphic matroid edge endpoint out of range");
    }
  }
  const int ground = static_cast<int>(edges.size());
  return Matroid(ground, std::make_shared<const Spec>(GraphicMatroid{
                             num_vertices, std::move(edges)}));
}

Matroid Matroid::ExplicitBases(int ground_size, std::vector<Bundle> bases) {
  CheckGround(ground_size);
  if (bases.empty()) {
    throw InvalidArgument("a matroid has at least one basis");
  }
  for (const Bundle& b : bases) {
    if (!b.FitsIn(ground_size)) {
      throw InvalidArgument("basis outside the ground set");
    }
  }
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  return Matroid(ground_size, std::make_shared<const Spec>(
                                  ExplicitBasesMatroid{std::move(bases)}));
}

Matroid Matroid::Truncation(Matroid inner, int cap) {
  if (cap < 0) throw InvalidArgument("truncation cap must be >= 0");
  const int ground = inner.ground_size();
  return Matroid(ground, std::make_shared<const Spec>(
                             TruncatedMatroid{std::move(inner), cap}));
}

Matroid Matroid::DirectSum(std::vector<Matroid> parts) {
  std::vector<int> offsets;
  int ground = 0;
  for (const Matroid& p : parts) {
    offsets.push_back(ground);
    ground += p.ground_size();
  }
  CheckGround(ground);
  return Matroid(ground, std::make_shared<const Spec>(DirectSumMatroid{
                             std::move(parts), std::move(offsets)}));
}

Matroid Matroid::Relabel(Matroid inner, std::vector<int> permutation) {
  const int ground = inner.ground_size();
  if (static_cast<int>(permutation.size()) != ground) {
    throw InvalidArgument("relabeling must list every ground element");
  }
  std::vector<int> sorted = permutation;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < ground; ++i) {
    if (sorted[i] != i) {
      throw InvalidArgument("relabeling is not a permutation");
    }
  }
  return Matroid(ground, std::make_shared<const Spec>(RelabeledMatroid{
                             std::move(inner), std::move(permutation)}));
}

int Matroid::Rank(Bundle set) const {
  if (!set.FitsIn(ground_size_)) {
    throw InvalidArgument("set " + set.ToString() +
                          " outside matroid ground set of size " +
                          std::to_string(ground_size_));
  }
  return RankUnchecked(set.mask());
}

int Matroid::RankUnchecked(std::uint64_t mask) const {
  return std::visit(
      Overloaded{
          [&](const UniformMatroid& u) {
            return std::min(std::popcount(mask), u.rank);
          },
          [&](const PartitionMatroid& p) {
            int r = 0;
            for (std::size_t b = 0; b < p.blocks.size(); ++b) {
              r += std::min(std::popcount(mask & p.blocks[b].mask()),
                            p.capacities[b]);
            }
            return r;
          },
          [&](const GraphicMatroid& g) {
            std::vector<int> parent(g.num_vertices);
            std::iota(parent.begin(), parent.end(), 0);
            int r = 0;
            for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
              const auto& [u, v] = g.edges[std::countr_zero(rest)];
              const int a = Find(parent, u);
              const int b = Find(parent, v);
              if (a != b) {
                parent[a] = b;
                ++r;
              }
            }
            return r;
          },
          [&](const ExplicitBasesMatroid& e) {
            int r = 0;
            for (const Bundle& b : e.bases) {
              r = std::max(r, std::popcount(mask & b.mask()));
            }
            return r;
          },
          [&](const TruncatedMatroid& t) {
            return std::min(t.inner.RankUnchecked(mask), t.cap);
          },
          [&](const DirectSumMatroid& d) {
            int r = 0;
            for (std::size_t i = 0; i < d.parts.size(); ++i) {
              const std::uint64_t part =
                  (mask >> d.offsets[i]) & FullMask(d.parts[i].ground_size());
              r += d.parts[i].RankUnchecked(part);
            }
            return r;
          },
          [&](const RelabeledMatroid& rl) {
            std::uint64_t inner = 0;
            for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
              inner |= std::uint64_t{1}
                       << rl.permutation[std::countr_zero(rest)];
            }
            return rl.inner.RankUnchecked(inner);
          },
      },
      *spec_);
}

std::string Matroid::KindName() const {
  return std::visit(
      Overloaded{
          [](const UniformMatroid&) { return std::string("uniform"); },
          [](const PartitionMatroid&) { return std::string("partition"); },
          [](const GraphicMatroid&) { return std::string("graphic"); },
          [](const ExplicitBasesMatroid&) {
            return std::string("explicit_bases");
          },
          [](const TruncatedMatroid&) { return std::string("truncation"); },
          [](const DirectSumMatroid&) { return std::string("direct_sum"); },
          [](const RelabeledMatroid&) { return std::string("relabel"); },
      },
      *spec_);
}

}  // namespace qfair
