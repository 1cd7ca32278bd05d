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

// Distribution of an agent's value for the bundle X it receives in a
// uniformly random allocation: every good lands in X independently with
// probability 1/n. All probabilities are exact with denominator n^m.

#ifndef QFAIR_QUANTILE_H_
#define QFAIR_QUANTILE_H_

#include <cstdint>
#include <vector>

#include "qfair/bundle.h"
#include "qfair/instance.h"
#include "qfair/numeric.h"
#include "qfair/valuation.h"

namespace qfair {

struct Atom {
  Rational value;
  // Number of the n^m allocations giving the agent a bundle of this value.
  BigInt weight;
};

struct ValueDistribution {
  int n = 0;
  int m = 0;
  // Strictly ascending values, every weight >= 1, weights sum to n^m.
  std::vector<Atom> atoms;

  BigInt denominator() const { return Power(n, m); }
  // P[v(X) <= value].
  Rational Cdf(const Rational& value) const;
  // Least atom value whose cumulative weight reaches q * n^m.
  Rational Quantile(const Rational& q) const;
};

// Throws DomainError unless 0 < q <= 1.
void CheckQuantileLevel(const Rational& q);

// Enumerates all 2^m bundles S with weight (n-1)^(m-|S|). Throws
// BudgetExceeded above the exact cap.
ValueDistribution ExactDistribution(const Valuation& valuation, int n,
                                    int exact_cap = DefaultExactCap());

Rational QuantileShare(const Valuation& valuation, int n, const Rational& q,
                       int exact_cap = DefaultExactCap());

// P[v(X) <= v(bundle)].
Rational Satisfaction(const Valuation& valuation, int n, Bundle bundle,
                      int exact_cap = DefaultExactCap());

// v(bundle) >= QuantileShare(q); cross-checked against Satisfaction >= q.
bool IsQFair(const Valuation& valuation, int n, const Rational& q,
             Bundle bundle, int exact_cap = DefaultExactCap());

struct SampleEstimate {
  double estimate = 0;
  double half_width = 0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

// Monte Carlo estimate of Satisfaction with a Hoeffding half-width
// sqrt(ln(2/delta) / (2 samples)). Sample s, good j draws from a counter
// keyed by (seed, s, j), so any sharding of the samples reproduces the same
// stream.
SampleEstimate SampleSatisfaction(const Valuation& valuation, int n,
                                  Bundle bundle, std::uint64_t samples,
                                  double delta, std::uint64_t seed);

// Deterministic 1/n coin for (seed, sample, good).
bool SampledGoodLands(std::uint64_t seed, std::uint64_t sample, int good,
                      int n, int m);

struct Verdict {
  int agent = 0;
  Rational bundle_value;
  Rational quantile_share;
  Rational satisfaction;
  bool fair = false;
};

struct AllocationReport {
  Rational q;
  std::vector<Verdict> verdicts;
  // Largest q for which the allocation is q-fair towards everyone.
  Rational min_satisfaction;
  bool all_fair = false;
};

AllocationReport MakeAllocationReport(const Instance& instance,
                                      const Allocation& allocation,
                                      const Rational& q);

// Number of the n^m allocations in which an Explicit01 agent gets value 0.
BigInt CountZeroAllocations(const Valuation& explicit01, int n);

// Satisfaction numerators of all 2^m bundles over the common denominator
// n^m, which must fit in 64 bits.
class SatisfactionTable {
 public:
  static SatisfactionTable Build(const Valuation& valuation, int n,
                                 int exact_cap = DefaultExactCap());
  static SatisfactionTable FromValueTable(const ValueTable& table, int n);

  int n() const { return n_; }
  int num_goods() const { return m_; }
  std::uint64_t denominator() const { return denominator_; }
  std::uint64_t numerator(std::uint64_t mask) const {
    return numerators_[mask];
  }
  Rational satisfaction(std::uint64_t mask) const {
    return Rational(numerators_[mask]) / Rational(denominator_);
  }
  // Bundles meeting level q: numerator * den(q) >= num(q) * n^m.
  std::vector<bool> FairMask(const Rational& q) const;
  const std::vector<std::uint64_t>& numerators() const { return numerators_; }

 private:
  int n_ = 0;
  int m_ = 0;
  std::uint64_t denominator_ = 1;
  std::vector<std::uint64_t> numerators_;
};

}  // namespace qfair

#endif  // QFAIR_QUANTILE_H_
