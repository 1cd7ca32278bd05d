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

#include "qfair/quantile.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qfair/errors.h"

namespace qfair {
namespace {

void CheckAgents(int n) {
  if (n < 1) throw InvalidArgument("need at least one agent");
}

// Masks of [0, 2^m) sorted by value key.
std::vector<std::uint32_t> OrderByKey(const ValueTable& table) {
  std::vector<std::uint32_t> order(table.keys().size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return table.key(a) < table.key(b);
                   });
  return order;
}

// (n-1)^(m-k) for k = 0..m.
std::vector<BigInt> CardinalityWeights(int n, int m) {
  std::vector<BigInt> w(m + 1);
  for (int k = 0; k <= m; ++k) w[k] = Power(n - 1, m - k);
  return w;
}

BigInt WeightOfCounts(const std::vector<std::uint64_t>& counts,
                      const std::vector<BigInt>& weights) {
  BigInt total = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] != 0) total += weights[k] * counts[k];
  }
  return total;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

void CheckQuantileLevel(const Rational& q) {
  if (q <= 0 || q > 1) {
    throw DomainError("q must lie in (0, 1], got " + FormatRational(q));
  }
}

Rational ValueDistribution::Cdf(const Rational& value) const {
  BigInt cum = 0;
  for (const Atom& a : atoms) {
    if (a.value > value) break;
    cum += a.weight;
  }
  return Rational(cum, denominator());
}

Rational ValueDistribution::Quantile(const Rational& q) const {
  CheckQuantileLevel(q);
  const BigInt target =
      boost::multiprecision::numerator(q) * denominator();
  const BigInt& q_den = boost::multiprecision::denominator(q);
  BigInt cum = 0;
  for (const Atom& a : atoms) {
    cum += a.weight;
    if (cum * q_den >= target) return a.value;
  }
  // Unreachable: the weights sum to n^m and q <= 1.
  throw std::logic_error("distribution weights do not reach n^m");
}

ValueDistribution ExactDistribution(const Valuation& valuation, int n,
                                    int exact_cap) {
  CheckAgents(n);
  const ValueTable table = ValueTable::Build(valuation, exact_cap);
  const int m = valuation.num_goods();
  const std::vector<std::uint32_t> order = OrderByKey(table);
  const std::vector<BigInt> weights = CardinalityWeights(n, m);

  ValueDistribution dist;
  dist.n = n;
  dist.m = m;
  std::vector<std::uint64_t> counts(m + 1, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    ++counts[std::popcount(order[i])];
    const bool last_of_group =
        i + 1 == order.size() || table.key(order[i + 1]) != table.key(order[i]);
    if (!last_of_group) continue;
    BigInt w = WeightOfCounts(counts, weights);
    if (w != 0) {
      dist.atoms.push_back({table.ValueOfKey(table.key(order[i])), std::move(w)});
    }
    std::fill(counts.begin(), counts.end(), 0);
  }
  return dist;
}

Rational QuantileShare(const Valuation& valuation, int n, const Rational& q,
                       int exact_cap) {
  CheckQuantileLevel(q);
  return ExactDistribution(valuation, n, exact_cap).Quantile(q);
}

Rational Satisfaction(const Valuation& valuation, int n, Bundle bundle,
                      int exact_cap) {
  CheckAgents(n);
  const int m = valuation.num_goods();
  if (!bundle.FitsIn(m)) {
    throw InvalidArgument("bundle " + bundle.ToString() +
                          " outside the good set");
  }
  const ValueTable table = ValueTable::Build(valuation, exact_cap);
  const std::int64_t threshold = table.key(bundle.mask());
  std::vector<std::uint64_t> counts(m + 1, 0);
  for (std::uint64_t mask = 0; mask < table.keys().size(); ++mask) {
    if (table.key(mask) <= threshold) ++counts[std::popcount(mask)];
  }
  return Rational(WeightOfCounts(counts, CardinalityWeights(n, m)),
                  Power(n, m));
}

bool IsQFair(const Valuation& valuation, int n, const Rational& q,
             Bundle bundle, int exact_cap) {
  CheckQuantileLevel(q);
  const ValueDistribution dist = ExactDistribution(valuation, n, exact_cap);
  const Rational value = valuation.Evaluate(bundle);
  const bool by_share = value >= dist.Quantile(q);
  const bool by_satisfaction = dist.Cdf(value) >= q;
  if (by_share != by_satisfaction) {
    throw std::logic_error("quantile share and satisfaction disagree");
  }
  return by_share;
}

bool SampledGoodLands(std::uint64_t seed, std::uint64_t sample, int good,
                      int n, int m) {
  const std::uint64_t counter =
      sample * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(good);
  const std::uint64_t h = SplitMix64(seed ^ SplitMix64(counter));
  return h % static_cast<std::uint64_t>(n) == 0;
}

SampleEstimate SampleSatisfaction(const Valuation& valuation, int n,
                                  Bundle bundle, std::uint64_t samples,
                                  double delta, std::uint64_t seed) {
  CheckAgents(n);
  if (samples < 1) throw InvalidArgument("need at least one sample");
  if (!(delta > 0 && delta < 1)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
  const int m = valuation.num_goods();
  if (!bundle.FitsIn(m)) {
    throw InvalidArgument("bundle " + bundle.ToString() +
                          " outside the good set");
  }
  SampleEstimate out;
  out.samples = samples;
  auto draw = [&](std::uint64_t s) {
    std::uint64_t mask = 0;
    for (int j = 0; j < m; ++j) {
      if (SampledGoodLands(seed, s, j, n, m)) mask |= std::uint64_t{1} << j;
    }
    return mask;
  };
  if (m <= DefaultExactCap()) {
    const ValueTable table = ValueTable::Build(valuation);
    const std::int64_t threshold = table.key(bundle.mask());
    for (std::uint64_t s = 0; s < samples; ++s) {
      if (table.key(draw(s)) <= threshold) ++out.hits;
    }
  } else {
    const Rational threshold = valuation.Evaluate(bundle);
    for (std::uint64_t s = 0; s < samples; ++s) {
      if (valuation.Evaluate(Bundle(draw(s))) <= threshold) ++out.hits;
    }
  }
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.half_width =
      std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(samples)));
  return out;
}

AllocationReport MakeAllocationReport(const Instance& instance,
                                      const Allocation& allocation,
                                      const Rational& q) {
  CheckQuantileLevel(q);
  instance.CheckShape();
  if (allocation.num_agents() != instance.n) {
    throw InvalidArgument("allocation has " +
                          std::to_string(allocation.num_agents()) +
                          " bundles for " + std::to_string(instance.n) +
                          " agents");
  }
  allocation.Validate(instance.m);
  AllocationReport report;
  report.q = q;
  report.all_fair = true;
  for (int i = 0; i < instance.n; ++i) {
    const Valuation& v = instance.valuations[i];
    const ValueDistribution dist = ExactDistribution(v, instance.n);
    Verdict verdict;
    verdict.agent = i;
    verdict.bundle_value = v.Evaluate(allocation[i]);
    verdict.quantile_share = dist.Quantile(q);
    verdict.satisfaction = dist.Cdf(verdict.bundle_value);
    verdict.fair = verdict.bundle_value >= verdict.quantile_share;
    if (verdict.fair != (verdict.satisfaction >= q)) {
      throw std::logic_error("quantile share and satisfaction disagree");
    }
    report.all_fair = report.all_fair && verdict.fair;
    if (i == 0 || verdict.satisfaction < report.min_satisfaction) {
      report.min_satisfaction = verdict.satisfaction;
    }
    report.verdicts.push_back(std::move(verdict));
  }
  return report;
}

BigInt CountZeroAllocations(const Valuation& explicit01, int n) {
  CheckAgents(n);
  if (!std::holds_alternative<Explicit01Valuation>(explicit01.spec())) {
    throw InvalidArgument("zero-allocation counts need an explicit01 valuation");
  }
  const int m = explicit01.num_goods();
  const ValueTable table = ValueTable::Build(explicit01);
  std::vector<std::uint64_t> counts(m + 1, 0);
  for (std::uint64_t mask = 0; mask < table.keys().size(); ++mask) {
    if (table.key(mask) == 0) ++counts[std::popcount(mask)];
  }
  return WeightOfCounts(counts, CardinalityWeights(n, m));
}

SatisfactionTable SatisfactionTable::Build(const Valuation& valuation, int n,
                                           int exact_cap) {
  return FromValueTable(ValueTable::Build(valuation, exact_cap), n);
}

SatisfactionTable SatisfactionTable::FromValueTable(const ValueTable& table,
                                                    int n) {
  CheckAgents(n);
  const int m = table.num_goods();
  SatisfactionTable out;
  out.n_ = n;
  out.m_ = m;
  out.denominator_ = PowerU64(n, m);
  std::vector<std::uint64_t> weight(m + 1);
  for (int k = 0; k <= m; ++k) weight[k] = PowerU64(n - 1, m - k);
  const std::vector<std::uint32_t> order = OrderByKey(table);
  out.numerators_.assign(order.size(), 0);
  std::uint64_t cum = 0;
  std::size_t group_start = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    cum += weight[std::popcount(order[i])];
    const bool last_of_group =
        i + 1 == order.size() || table.key(order[i + 1]) != table.key(order[i]);
    if (!last_of_group) continue;
    for (std::size_t k = group_start; k <= i; ++k) {
      out.numerators_[order[k]] = cum;
    }
    group_start = i + 1;
  }
  return out;
}

std::vector<bool> SatisfactionTable::FairMask(const Rational& q) const {
  CheckQuantileLevel(q);
  // numerator / n^m >= a / b  <=>  numerator * b >= a * n^m
  const BigInt a = boost::multiprecision::numerator(q);
  const BigInt b = boost::multiprecision::denominator(q);
  const BigInt rhs = a * denominator_;
  std::vector<bool> fair(numerators_.size());
  // Smallest numerator with numerator * b >= rhs.
  BigInt min_num = (rhs + b - 1) / b;
  const std::uint64_t threshold =
      min_num > std::numeric_limits<std::uint64_t>::max()
          ? std::numeric_limits<std::uint64_t>::max()
          : min_num.convert_to<std::uint64_t>();
  for (std::size_t mask = 0; mask < numerators_.size(); ++mask) {
    fair[mask] = numerators_[mask] >= threshold;
  }
  return fair;
}

}  // namespace qfair
