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

// Uniform set families over [m]: matchings, rainbow matchings, shadows, the
// Erdos matching bounds and their extremal families, and the binomial and
// Poisson tail quantities used by the matroid-rank results.

#ifndef QFAIR_EXTREMAL_H_
#define QFAIR_EXTREMAL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfair/bundle.h"
#include "qfair/numeric.h"
#include "qfair/valuation.h"

namespace qfair {

inline constexpr std::uint64_t kDefaultFamilyBudget = 100000;
inline constexpr std::uint64_t kDefaultNodeBudget = 100000000;

// A k-uniform family on [m], deduplicated and sorted by (min element, mask).
struct SetFamily {
  int m = 0;
  int k = 0;
  std::vector<Bundle> sets;

  // Throws InvalidArgument when a set has the wrong size or leaves [m].
  static SetFamily Make(int m, int k, std::vector<Bundle> sets);
  // All k-subsets of [m]; throws BudgetExceeded past `budget` sets.
  static SetFamily Layer(int m, int k,
                         std::uint64_t budget = kDefaultFamilyBudget);

  std::size_t size() const { return sets.size(); }
  bool Contains(Bundle b) const;
  bool operator==(const SetFamily&) const = default;
};

// Orders bundles by least element first, then by mask. The empty bundle
// sorts first.
bool FamilyOrder(Bundle a, Bundle b);

struct MatchingOptions {
  std::uint64_t family_budget = kDefaultFamilyBudget;
  std::uint64_t node_budget = kDefaultNodeBudget;
};

struct MatchingResult {
  // Pairwise disjoint members, in family order.
  std::vector<Bundle> matching;
  std::uint64_t nodes = 0;
};

// Largest matching, or the first one of size `target` when target > 0.
// Throws BudgetExceeded when the family or the search tree is too large.
MatchingResult MaximumMatching(const SetFamily& family, int target = 0,
                               const MatchingOptions& options = {});
int MatchingNumber(const SetFamily& family, const MatchingOptions& options = {});

// Pairwise disjoint S_1, ..., S_n with S_i in families[i], or nullopt when
// the families are cross-dependent.
std::optional<std::vector<Bundle>> RainbowMatching(
    const std::vector<SetFamily>& families, const MatchingOptions& options = {});

// All k'-subsets of members. Throws InvalidArgument unless 0 <= k' <= k.
SetFamily Shadow(const SetFamily& family, int k_prime);

// If |family| >= C(m', k) then |shadow at k'| >= C(m', k'). Vacuously true
// when the hypothesis fails. Throws InvalidArgument unless
// k' <= k <= m' <= m.
bool KruskalKatonaCheck(const SetFamily& family, int m_prime, int k_prime);

struct EmcBounds {
  BigInt cover;   // C(m, k) - C(m - n + 1, k)
  BigInt clique;  // C(kn - 1, k)
  BigInt max;
};

// Throws InvalidArgument when m < kn, k < 0 or n < 1.
EmcBounds ComputeEmcBounds(int m, int k, int n);

struct EmcExtremal {
  SetFamily cover;   // k-sets meeting [n-1]
  SetFamily clique;  // k-sets inside [kn-1]
};

// Throws InvalidArgument when m < kn or k < 1, and std::logic_error if a
// construction misses its bound or contains an n-matching.
EmcExtremal EmcExtremalFamilies(int m, int k, int n,
                                const MatchingOptions& options = {});

struct EmcFalsifyOptions {
  bool rainbow = false;
  int threads = 1;
  MatchingOptions matching;
};

struct EmcFalsifyResult {
  int m = 0;
  int k = 0;
  int n = 0;
  BigInt bound;
  std::uint64_t trials = 0;
  // Index of the first trial whose families beat the bound without an
  // (rainbow) n-matching, with those families.
  std::optional<std::uint64_t> counterexample_trial;
  std::vector<SetFamily> counterexample;
};

// Heuristic search: each trial draws families of size bound + 1, either
// uniformly or as an extremal family plus one set, and looks for an
// n-matching (a rainbow matching across n families when `rainbow`).
// Results do not depend on the thread count. Throws InvalidArgument when
// m < kn, k < 1 or C(m, k) exceeds the family budget.
EmcFalsifyResult EmcFalsify(int m, int k, int n, std::uint64_t trials,
                            std::uint64_t seed,
                            const EmcFalsifyOptions& options = {});

struct ChainLevel {
  int k_prime = 0;
  BigInt zeros;     // |G_k'|
  BigInt required;  // C(m - n + 1, k')
  BigInt layer;     // C(m, k')
  bool ok = false;  // zeros >= required
  // |G_k'| / C(m, k') against (1 - 1/n)^(n-1).
  Rational ratio;
  bool ratio_ok = false;
};

struct BoundChainReport {
  int n = 0;
  int m = 0;
  int k = 0;
  BigInt ones_k;    // |F_k|
  BigInt zeros_k;   // |G_k|
  int nu = 0;       // matching number of F_k, capped at n
  bool applies = false;  // nu < n
  bool emc_step_ok = true;
  bool emc_violation = false;
  Rational limit;   // (1 - 1/n)^(n-1)
  std::vector<ChainLevel> levels;
};

// Runs the counting chain on a monotone 0/1 valuation with n | m and
// k = m/n - 1 >= 1. Throws InvalidArgument on other inputs and
// BudgetExceeded when C(m, k) exceeds the family budget.
BoundChainReport BoundChainCheck(const Valuation& valuation, int n,
                                     const MatchingOptions& options = {});

// P[Bin(trials, 1/n) < t], exactly.
Rational BinomialBelow(int trials, int n, int t);

struct BinomialQnResult {
  int n = 0;
  int t_max = 0;
  Rational estimate;  // min over 1 <= t <= t_max of P[Bin(tn - 1, 1/n) < t]
  int argmin = 1;
  HighPrecision bound;  // 1/e - 1/(2 sqrt(n(n-1)))
  Tri bound_holds = Tri::kFalse;
  Rational conjecture_gap;  // estimate - (1 - 1/n)^(n-1)
};

BinomialQnResult BinomialQn(int n, int t_max,
                            const HighPrecision& precision = HighPrecision("1e-15"));

// P[Poisson(lambda) <= lambda]. Throws InvalidArgument unless lambda > 0.
HighPrecision PoissonBelowMean(const Rational& lambda);
// Whether P[Poisson(lambda) <= lambda] exceeds 1/e, at the given precision.
Tri PoissonAboveInverseE(const Rational& lambda,
                         const HighPrecision& precision = HighPrecision("1e-15"));

// C(m, k) - C(m - n + 1, k) >= C(kn - 1, k) with m = (k + 1) n, checked
// exactly together with the product forms of both ratios in the rearranged
// inequality. At k = 1 equality is required.
bool Lemma9Check(int n, int k);

struct Lemma9SweepResult {
  std::uint64_t checked = 0;
  std::vector<std::pair<int, int>> failures;
  bool equality_at_k1 = true;
  // The rearranged ratio sum is non-increasing in k for every n.
  bool monotone_in_k = true;
  bool ok() const { return failures.empty() && equality_at_k1 && monotone_in_k; }
};

Lemma9SweepResult Lemma9Sweep(int n_max, int k_max);

}  // namespace qfair

#endif  // QFAIR_EXTREMAL_H_
