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

#ifndef QFAIR_VALUATION_H_
#define QFAIR_VALUATION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qfair/bundle.h"
#include "qfair/matroid.h"
#include "qfair/numeric.h"

namespace qfair {

inline constexpr int kDefaultExactCap = 24;

// Largest m for which 2^m enumeration is attempted. QFAIR_EXACT_CAP
// overrides the default of 24.
int DefaultExactCap();

struct AdditiveValuation {
  std::vector<Rational> weights;
};

struct UnitDemandValuation {
  std::vector<Rational> weights;
};

struct MatroidRankValuation {
  Matroid matroid;
};

// Value 1 iff the bundle contains some member of minimal_ones. Kept sorted
// by (cardinality, mask) without duplicates.
struct Explicit01Valuation {
  int num_goods = 0;
  std::vector<Bundle> minimal_ones;
};

// Dense: values[mask] for every mask in [0, 2^m).
struct TableValuation {
  int num_goods = 0;
  std::vector<Rational> values;
};

class Valuation {
 public:
  using Spec = std::variant<AdditiveValuation, UnitDemandValuation,
                            MatroidRankValuation, Explicit01Valuation,
                            TableValuation>;

  static Valuation Additive(std::vector<Rational> weights);
  static Valuation UnitDemand(std::vector<Rational> weights);
  static Valuation MatroidRank(Matroid matroid);
  static Valuation Explicit01(int num_goods, std::vector<Bundle> minimal_ones);
  // Minimal bundles of the 1-region of a monotone predicate.
  static Valuation Explicit01FromPredicate(
      int num_goods, const std::function<bool(Bundle)>& is_one);
  static Valuation Table(int num_goods, std::vector<Rational> values);
  // Every bundle must appear in `values`.
  static Valuation TableFromMap(int num_goods,
                                const std::map<Bundle, Rational>& values);
  static Valuation Constant(int num_goods, const Rational& c);

  int num_goods() const { return num_goods_; }
  const Spec& spec() const { return spec_; }
  std::string KindName() const;

  Rational Evaluate(Bundle bundle) const;

 private:
  Valuation(int num_goods, Spec spec)
      : num_goods_(num_goods), spec_(std::move(spec)) {}

  int num_goods_ = 0;
  Spec spec_;
};

// Functional equality: same m and the same value on every bundle.
bool SameFunction(const Valuation& a, const Valuation& b);

// Every bundle's value as an order-preserving 64-bit key: key(S) < key(T)
// iff v(S) < v(T), and equal keys mean equal values. Rational-weighted
// valuations are scaled to a common denominator; when that overflows the
// keys fall back to ranks of the sorted distinct values.
class ValueTable {
 public:
  // Throws BudgetExceeded when m exceeds `exact_cap`.
  static ValueTable Build(const Valuation& valuation,
                          int exact_cap = DefaultExactCap());

  int num_goods() const { return num_goods_; }
  std::int64_t key(std::uint64_t mask) const { return keys_[mask]; }
  const std::vector<std::int64_t>& keys() const { return keys_; }
  Rational ValueOfKey(std::int64_t key) const;
  // True when v(S) <= v(S + j) for every S, j.
  bool IsMonotone() const;

 private:
  int num_goods_ = 0;
  std::vector<std::int64_t> keys_;
  bool ranked_ = false;
  Rational scale_ = 1;
  std::vector<Rational> ranked_values_;
};

}  // namespace qfair

#endif  // QFAIR_VALUATION_H_
