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

// Families of subsets of [m], m <= 6, packed as 64-bit truth tables: bit S
// is set when bundle S belongs to the family.

#ifndef QFAIR_BOOLEAN_LATTICE_H_
#define QFAIR_BOOLEAN_LATTICE_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "qfair/numeric.h"
#include "qfair/valuation.h"

namespace qfair {

inline constexpr int kMaxLatticeGoods = 6;

using FamilyBits = std::uint64_t;

// All subsets of 2^[m].
inline constexpr FamilyBits AllBundles(int m) {
  return m >= 6 ? ~FamilyBits{0} : (FamilyBits{1} << (1 << m)) - 1;
}

bool IsDownSet(FamilyBits family, int m);
FamilyBits DownClosure(FamilyBits family, int m);

// Every down-set of 2^[m] (Dedekind many: 2, 3, 6, 20, 168, 7581, 7828354).
std::vector<FamilyBits> EnumerateDownSets(int m);
// Calls fn on each down-set without materializing the list.
void ForEachDownSet(int m, const std::function<void(FamilyBits)>& fn);

// Image of the family when good j is renamed perm[j].
FamilyBits PermuteGoods(FamilyBits family, int m, const std::vector<int>& perm);
// Least image under all good permutations.
FamilyBits CanonicalUnderGoodPermutations(FamilyBits family, int m);
// True when no good permutation maps the family to a smaller truth table.
bool IsCanonicalUnderGoodPermutations(FamilyBits family, int m);

// Sum over members S of (n-1)^(m-|S|): the allocations placing a member in a
// fixed agent's hands.
BigInt AllocationWeight(FamilyBits family, int n, int m);

// Monotone 0/1 valuation that is 0 exactly on the down-set `zeros`.
Valuation ZeroFamilyValuation(FamilyBits zeros, int m);
// Down-set of bundles on which the valuation is 0. Needs m <= 6.
FamilyBits ZeroFamily(const Valuation& valuation);

}  // namespace qfair

#endif  // QFAIR_BOOLEAN_LATTICE_H_
