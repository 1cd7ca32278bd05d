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

#ifndef QFAIR_MATROID_H_
#define QFAIR_MATROID_H_

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qfair/bundle.h"

namespace qfair {

class Matroid;

struct UniformMatroid {
  int rank = 0;
};

// Blocks partition the ground set; at most capacities[b] elements of block b
// may be chosen.
struct PartitionMatroid {
  std::vector<Bundle> blocks;
  std::vector<int> capacities;
};

// Ground element e is edges[e]; vertices are 0-indexed. Self-loops are
// matroid loops.
struct GraphicMatroid {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

struct ExplicitBasesMatroid {
  std::vector<Bundle> bases;
};

struct TruncatedMatroid;
struct DirectSumMatroid;
struct RelabeledMatroid;

// Immutable matroid given by a rank oracle. Copies share structure.
class Matroid {
 public:
  using Spec = std::variant<UniformMatroid, PartitionMatroid, GraphicMatroid,
                            ExplicitBasesMatroid, TruncatedMatroid,
                            DirectSumMatroid, RelabeledMatroid>;

  static Matroid Uniform(int ground_size, int rank);
  static Matroid Partition(int ground_size, std::vector<Bundle> blocks,
                           std::vector<int> capacities);
  static Matroid Graphic(int num_vertices,
                         std::vector<std::pair<int, int>> edges);
  // Bases are taken as given; Validate() reports unequal cardinalities or a
  // failed exchange axiom.
  static Matroid ExplicitBases(int ground_size, std::vector<Bundle> bases);
  // rank(S) = min(inner.rank(S), cap).
  static Matroid Truncation(Matroid inner, int cap);
  // Ground sets are laid out consecutively: part 0 first.
  static Matroid DirectSum(std::vector<Matroid> parts);
  // Element j of the new ground set is element permutation[j] of `inner`.
  static Matroid Relabel(Matroid inner, std::vector<int> permutation);

  int ground_size() const { return ground_size_; }
  int Rank(Bundle set) const;
  bool IsIndependent(Bundle set) const { return Rank(set) == set.size(); }
  const Spec& spec() const;
  std::string KindName() const;

 private:
  Matroid(int ground_size, std::shared_ptr<const Spec> spec)
      : ground_size_(ground_size), spec_(std::move(spec)) {}

  int RankUnchecked(std::uint64_t mask) const;

  int ground_size_ = 0;
  std::shared_ptr<const Spec> spec_;
};

struct TruncatedMatroid {
  Matroid inner;
  int cap = 0;
};

struct DirectSumMatroid {
  std::vector<Matroid> parts;
  std::vector<int> offsets;
};

struct RelabeledMatroid {
  Matroid inner;
  std::vector<int> permutation;
};

inline const Matroid::Spec& Matroid::spec() const { return *spec_; }

}  // namespace qfair

#endif  // QFAIR_MATROID_H_
