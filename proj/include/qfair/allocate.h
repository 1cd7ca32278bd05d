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

// Allocation algorithms and maximin-share machinery.
//
// Exhaustive scans visit allocations in canonical order: the allocation is the
// base-n digit string agent_of_good[0..m), good 0 most significant, and the
// first witness in that order is returned whatever the thread count.

#ifndef QFAIR_ALLOCATE_H_
#define QFAIR_ALLOCATE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfair/bundle.h"
#include "qfair/instance.h"
#include "qfair/matroid.h"
#include "qfair/numeric.h"
#include "qfair/valuation.h"

namespace qfair {

inline constexpr std::uint64_t kDefaultAllocationBudget = 100'000'000;
// Infeasibility certificates list one violating agent per allocation up to
// this many allocations.
inline constexpr std::uint64_t kViolatorListLimit = 65'536;

struct SearchOptions {
  std::uint64_t budget = kDefaultAllocationBudget;
  int threads = 1;
};

// n^m, or BudgetExceeded when it overflows or exceeds `budget`.
std::uint64_t AllocationCount(int n, int m, std::uint64_t budget);
std::uint64_t AllocationIndex(const Allocation& allocation, int m);
Allocation AllocationAtIndex(std::uint64_t index, int n, int m);

// accept[mask] != 0 when the agent is content with bundle `mask`.
using AcceptTable = std::vector<std::uint8_t>;

struct CoverageCertificate {
  // coverage[i] = number of allocations in which agent i rejects its bundle.
  std::vector<BigInt> coverage;
  // violators[x] = least rejecting agent of the allocation with canonical
  // index x. Empty above kViolatorListLimit.
  std::vector<int> violators;
};

struct AcceptSearchResult {
  std::optional<Allocation> allocation;
  std::uint64_t index = 0;
  // Filled when no allocation exists.
  CoverageCertificate certificate;
};

// First allocation, in canonical order, accepted by every agent.
AcceptSearchResult FindAcceptedAllocation(int n, int m,
                                          const std::vector<AcceptTable>& accept,
                                          const SearchOptions& options = {});

// Picks follow instance order; each agent takes a remaining good of maximum
// weight, lowest index first among ties.
Allocation RoundRobin(const Instance& instance);

AcceptSearchResult ExhaustiveFairAllocation(const Instance& instance,
                                            const Rational& q,
                                            const SearchOptions& options = {});

struct MaximinResult {
  Allocation allocation;
  std::uint64_t index = 0;
  // Largest q for which the instance admits a q-fair allocation.
  Rational q_star;
};

MaximinResult MaximinSatisfactionAllocation(const Instance& instance,
                                            const SearchOptions& options = {});

struct MmsResult {
  Rational value;
  // n bundles partitioning the goods, each worth at least `value`.
  Allocation witness;
  std::string method;
};

inline constexpr std::uint64_t kDefaultPartitionBudget = 10'000'000;

struct MmsOptions {
  // Use matroid intersection for MatroidRank valuations.
  bool matroid_fast = false;
  std::uint64_t partition_budget = kDefaultPartitionBudget;
  int exact_cap = DefaultExactCap();
};

// Number of ways to split m labeled goods into at most n unlabeled blocks.
BigInt PartitionCount(int m, int n);

MmsResult MmsValue(const Valuation& valuation, int n,
                   const MmsOptions& options = {});

// Maximum-cardinality common independent set by shortest augmenting paths.
Bundle MatroidIntersection(const Matroid& m1, const Matroid& m2);

struct EdmondsCertificate {
  bool certified = false;
  // rank1(A) + rank2(E \ A) = |I| when certified.
  Bundle a;
  int bound = 0;
  int max_size = 0;
  std::string reason;
};

// Certifies that I is a maximum common independent set. Without a supplied
// A the witness is found by scanning all subsets (ground size <= 20) or, on
// larger grounds, read off the final exchange graph.
EdmondsCertificate CertifyIntersection(const Matroid& m1, const Matroid& m2,
                                       Bundle independent,
                                       std::optional<Bundle> supplied = {});

// Maximin share of a matroid-rank valuation: the largest k such that the
// ground set holds n disjoint independent sets of size k. Needs n * m <= 63.
MmsResult MatroidMms(const Matroid& matroid, int n);

// P[v(X) <= MMS].
Rational MmsQuantile(const Valuation& valuation, int n,
                     const MmsOptions& options = {});

struct BernoulliCheck {
  Rational probability;
  Rational bound;
  bool ok = false;
};

inline constexpr int kBernoulliCap = 24;

// Exact P[sum_j w_j b_j <= p * sum_j w_j] for i.i.d. Bernoulli(p) b_j, with
// ok = probability >= (14/100) (1 - p).
BernoulliCheck BernoulliDeviationCheck(const std::vector<Rational>& weights,
                                       const Rational& p);
BernoulliCheck ProportionalQuantileCheck(const std::vector<Rational>& weights,
                                         int n);

}  // namespace qfair

#endif  // QFAIR_ALLOCATE_H_
