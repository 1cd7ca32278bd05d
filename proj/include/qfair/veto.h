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

// Veto lists. A monotonicity-consistent list vetoes an allocation exactly
// when its owner's bundle lies in a family closed under subsets, so lists
// are stored as that bundle family rather than as allocations.

#ifndef QFAIR_VETO_H_
#define QFAIR_VETO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "qfair/allocate.h"
#include "qfair/bundle.h"
#include "qfair/numeric.h"
#include "qfair/valuation.h"

namespace qfair {

struct VetoList {
  int owner = 0;
  int n = 0;
  int m = 0;
  // Sorted by mask, no duplicates.
  std::vector<Bundle> zero_bundles;

  // Sorts and deduplicates; throws InvalidArgument for bundles outside [m].
  static VetoList FromBundles(int owner, int n, int m,
                              std::vector<Bundle> bundles);
  // Number of vetoed allocations among the n^m.
  BigInt Size() const;
  bool Contains(Bundle b) const;
  bool operator==(const VetoList&) const = default;
};

// Bundles worth strictly less than the q-quantile share.
VetoList VetoFromValuation(const Valuation& valuation, int n, const Rational& q,
                           int owner = 0);

bool IsMonotonicityConsistent(const VetoList& list);

// 0 on the family, 1 elsewhere, in canonical Explicit01 form. Throws
// InvalidArgument for inconsistent lists.
Valuation ValuationFromVeto(const VetoList& list);

// First allocation, in canonical order, vetoed by nobody.
AcceptSearchResult FindUnvetoedAllocation(const std::vector<VetoList>& lists,
                                          const SearchOptions& options = {});

struct EquivalenceReport {
  std::uint64_t profiles = 0;
  std::uint64_t levels = 0;
  std::uint64_t checks = 0;
  // First few failures, human readable.
  std::vector<std::string> failures;
  std::uint64_t failure_count = 0;
  bool ok() const { return failure_count == 0; }
};

// Checks, for the profile at quantile level q = (b + 1) / n^m:
//  - the veto lists induced by the valuations are consistent, have size at
//    most b, and leave an allocation unvetoed iff a q-fair allocation exists;
//  - the 0/1 valuations rebuilt from those lists admit a q-fair allocation
//    iff some allocation is unvetoed, with the same first witness;
//  - list -> valuation -> list is the identity.
void CheckEquivalenceAtLevel(const std::vector<Valuation>& profile,
                             std::uint64_t b, EquivalenceReport& report);

// Random monotone 0/1 profiles; each is checked at its critical level, one
// grid step above it, and one random grid level.
EquivalenceReport EquivalenceSuite(int n, int m, int trials, std::uint64_t seed);

// Every ordered pair of monotone 0/1 valuations on m <= 4 goods with n = 2,
// at every grid level.
EquivalenceReport EquivalenceExhaustivePairs(int m);

}  // namespace qfair

#endif  // QFAIR_VETO_H_
