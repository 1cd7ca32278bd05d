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

#include "qfair/valuation.h"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "qfair/errors.h"

namespace qfair {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void CheckGoods(int m) {
  if (m < 0 || m > kMaxGoods) {
    throw InvalidArgument("number of goods must be in [0, 63], got " +
                          std::to_string(m));
  }
}

void CheckWeights(const std::vector<Rational>& weights) {
  CheckGoods(static_cast<int>(weights.size()));
  for (const Rational& w : weights) {
    if (w < 0) throw InvalidArgument("weights must be nonnegative");
  }
}

bool CanonicalLess(Bundle a, Bundle b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.mask() < b.mask();
}

// Common denominator of `values`, or 0 when scaling overflows `limit`.
BigInt ScaleFor(const std::vector<Rational>& values, const BigInt& limit) {
  BigInt lcm = 1;
  BigInt total = 0;
  for (const Rational& v : values) {
    lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(v));
    if (lcm > limit) return 0;
  }
  for (const Rational& v : values) {
    total += boost::multiprecision::abs(
        boost::multiprecision::numerator(v) * (lcm / boost::multiprecision::denominator(v)));
    if (total > limit) return 0;
  }
  return lcm;
}

std::int64_t Scaled(const Rational& v, const BigInt& scale) {
  const BigInt k = boost::multiprecision::numerator(v) *
                   (scale / boost::multiprecision::denominator(v));
  return k.convert_to<std::int64_t>();
}

}  // namespace

int DefaultExactCap() {
  if (const char* env = std::getenv("QFAIR_EXACT_CAP")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 0 && cap <= kMaxGoods) {
      return static_cast<int>(cap);
    }
  }
  return kDefaultExactCap;
}

Valuation Valuation::Additive(std::vector<Rational> weights) {
  CheckWeights(weights);
  const int m = static_cast<int>(weights.size());
  return Valuation(m, AdditiveValuation{std::move(weights)});
}

Valuation Valuation::UnitDemand(std::vector<Rational> weights) {
  CheckWeights(weights);
  const int m = static_cast<int>(weights.size());
  return Valuation(m, UnitDemandValuation{std::move(weights)});
}

Valuation Valuation::MatroidRank(Matroid matroid) {
  const int m = matroid.ground_size();
  return Valuation(m, MatroidRankValuation{std::move(matroid)});
}

Valuation Valuation::Explicit01(int num_goods,
                                std::vector<Bundle> minimal_ones) {
  CheckGoods(num_goods);
  for (const Bundle& b : minimal_ones) {
    if (!b.FitsIn(num_goods)) {
      throw InvalidArgument("minimal bundle " + b.ToString() +
                            " outside the good set");
    }
  }
  std::sort(minimal_ones.begin(), minimal_ones.end(), CanonicalLess);
  minimal_ones.erase(std::unique(minimal_ones.begin(), minimal_ones.end()),
                     minimal_ones.end());
  return Valuation(num_goods,
                   Explicit01Valuation{num_goods, std::move(minimal_ones)});
}

Valuation Valuation::Explicit01FromPredicate(
    int num_goods, const std::function<bool(Bundle)>& is_one) {
  CheckGoods(num_goods);
  if (num_goods > DefaultExactCap()) {
    throw BudgetExceeded("explicit 0/1 construction enumerates 2^m bundles");
  }
  std::vector<Bundle> minimal;
  const std::uint64_t count = std::uint64_t{1} << num_goods;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    const Bundle s(mask);
    if (!is_one(s)) continue;
    bool is_minimal = true;
    for (int g : s.Goods()) {
      if (is_one(s.Without(g))) {
        is_minimal = false;
        break;
      }
    }
    if (is_minimal) minimal.push_back(s);
  }
  return Explicit01(num_goods, std::move(minimal));
}

Valuation Valuation::Table(int num_goods, std::vector<Rational> values) {
  CheckGoods(num_goods);
  if (num_goods > DefaultExactCap()) {
    throw BudgetExceeded("table valuations are dense; m exceeds exact cap");
  }
  if (values.size() != (std::size_t{1} << num_goods)) {
    throw InvalidArgument("table valuation needs exactly 2^m values");
  }
  return Valuation(num_goods, TableValuation{num_goods, std::move(values)});
}

Valuation Valuation::TableFromMap(int num_goods,
                                  const std::map<Bundle, Rational>& values) {
  CheckGoods(num_goods);
  if (num_goods > DefaultExactCap()) {
    throw BudgetExceeded("table valuations are dense; m exceeds exact cap");
  }
  const std::uint64_t count = std::uint64_t{1} << num_goods;
  std::vector<Rational> dense(count);
  std::vector<bool> present(count, false);
  for (const auto& [bundle, value] : values) {
    if (!bundle.FitsIn(num_goods)) {
      throw InvalidArgument("table entry " + bundle.ToString() +
                            " outside the good set");
    }
    dense[bundle.mask()] = value;
    present[bundle.mask()] = true;
  }
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (!present[mask]) {
      throw InvalidArgument("table valuation is missing bundle " +
                            Bundle(mask).ToString());
    }
  }
  return Table(num_goods, std::move(dense));
}

Valuation Valuation::Constant(int num_goods, const Rational& c) {
  return Table(num_goods,
               std::vector<Rational>(std::size_t{1} << num_goods, c));
}

std::string Valuation::KindName() const {
  return std::visit(
      Overloaded{
          [](const AdditiveValuation&) { return std::string("additive"); },
          [](const UnitDemandValuation&) {
            return std::string("unit_demand");
          },
          [](const MatroidRankValuation&) {
            return std::string("matroid_rank");
          },
          [](const Explicit01Valuation&) { return std::string("explicit01"); },
          [](const TableValuation&) { return std::string("table"); },
      },
      spec_);
}

Rational Valuation::Evaluate(Bundle bundle) const {
  if (!bundle.FitsIn(num_goods_)) {
    throw InvalidArgument("bundle " + bundle.ToString() +
                          " outside the good set of size " +
                          std::to_string(num_goods_));
  }
  return std::visit(
      Overloaded{
          [&](const AdditiveValuation& a) {
            Rational total = 0;
            for (int g : bundle.Goods()) total += a.weights[g];
            return total;
          },
          [&](const UnitDemandValuation& u) {
            Rational best = 0;
            for (int g : bundle.Goods()) best = std::max(best, u.weights[g]);
            return best;
          },
          [&](const MatroidRankValuation& r) {
            return Rational(r.matroid.Rank(bundle));
          },
          [&](const Explicit01Valuation& e) {
            for (const Bundle& b : e.minimal_ones) {
              if (b.IsSubsetOf(bundle)) return Rational(1);
            }
            return Rational(0);
          },
          [&](const TableValuation& t) { return t.values[bundle.mask()]; },
      },
      spec_);
}

bool SameFunction(const Valuation& a, const Valuation& b) {
  if (a.num_goods() != b.num_goods()) return false;
  const ValueTable ta = ValueTable::Build(a);
  const ValueTable tb = ValueTable::Build(b);
  const std::uint64_t count = std::uint64_t{1} << a.num_goods();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (ta.ValueOfKey(ta.key(mask)) != tb.ValueOfKey(tb.key(mask))) {
      return false;
    }
  }
  return true;
}

ValueTable ValueTable::Build(const Valuation& valuation, int exact_cap) {
  const int m = valuation.num_goods();
  if (m > exact_cap) {
    throw BudgetExceeded("m = " + std::to_string(m) + " exceeds exact cap " +
                         std::to_string(exact_cap) +
                         "; use sampling or raise QFAIR_EXACT_CAP");
  }
  const std::uint64_t count = std::uint64_t{1} << m;
  const BigInt limit = BigInt(std::numeric_limits<std::int64_t>::max() / 4);
  ValueTable table;
  table.num_goods_ = m;
  table.keys_.assign(count, 0);

  auto rank_fallback = [&](const std::vector<Rational>& values) {
    std::vector<Rational> distinct = values;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      table.keys_[mask] =
          std::lower_bound(distinct.begin(), distinct.end(), values[mask]) -
          distinct.begin();
    }
    table.ranked_ = true;
    table.ranked_values_ = std::move(distinct);
  };
  auto all_values = [&]() {
    std::vector<Rational> values(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      values[mask] = valuation.Evaluate(Bundle(mask));
    }
    return values;
  };

  std::visit(
      Overloaded{
          [&](const AdditiveValuation& a) {
            const BigInt scale = ScaleFor(a.weights, limit);
            if (scale == 0) return rank_fallback(all_values());
            table.scale_ = Rational(scale);
            std::vector<std::int64_t> w(m);
            for (int j = 0; j < m; ++j) w[j] = Scaled(a.weights[j], scale);
            for (std::uint64_t mask = 1; mask < count; ++mask) {
              const int low = std::countr_zero(mask);
              table.keys_[mask] = table.keys_[mask & (mask - 1)] + w[low];
            }
          },
          [&](const UnitDemandValuation& u) {
            const BigInt scale = ScaleFor(u.weights, limit);
            if (scale == 0) return rank_fallback(all_values());
            table.scale_ = Rational(scale);
            std::vector<std::int64_t> w(m);
            for (int j = 0; j < m; ++j) w[j] = Scaled(u.weights[j], scale);
            for (std::uint64_t mask = 1; mask < count; ++mask) {
              const int low = std::countr_zero(mask);
              table.keys_[mask] =
                  std::max(table.keys_[mask & (mask - 1)], w[low]);
            }
          },
          [&](const MatroidRankValuation& r) {
            for (std::uint64_t mask = 0; mask < count; ++mask) {
              table.keys_[mask] = r.matroid.Rank(Bundle(mask));
            }
          },
          [&](const Explicit01Valuation& e) {
            for (const Bundle& b : e.minimal_ones) table.keys_[b.mask()] = 1;
            // Upward closure, one good at a time.
            for (int j = 0; j < m; ++j) {
              const std::uint64_t bit = std::uint64_t{1} << j;
              for (std::uint64_t mask = 0; mask < count; ++mask) {
                if ((mask & bit) && table.keys_[mask ^ bit]) {
                  table.keys_[mask] = 1;
                }
              }
            }
          },
          [&](const TableValuation& t) {
            const BigInt scale = ScaleFor(t.values, limit);
            if (scale == 0) return rank_fallback(t.values);
            table.scale_ = Rational(scale);
            for (std::uint64_t mask = 0; mask < count; ++mask) {
              table.keys_[mask] = Scaled(t.values[mask], scale);
            }
          },
      },
      valuation.spec());
  return table;
}

Rational ValueTable::ValueOfKey(std::int64_t key) const {
  if (ranked_) return ranked_values_.at(static_cast<std::size_t>(key));
  return Rational(key) / scale_;
}

bool ValueTable::IsMonotone() const {
  const std::uint64_t count = keys_.size();
  for (int j = 0; j < num_goods_; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << j;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      if (!(mask & bit) && keys_[mask] > keys_[mask | bit]) return false;
    }
  }
  return true;
}

}  // namespace qfair
