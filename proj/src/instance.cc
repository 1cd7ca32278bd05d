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

#include "qfair/instance.h"

#include <algorithm>
#include <set>

#include "qfair/errors.h"

namespace qfair {
namespace {

constexpr int kMatroidAxiomCap = 12;

void Append(ValidationReport& into, ValidationReport from) {
  for (auto& v : from.violations) into.violations.push_back(std::move(v));
}

}  // namespace

Instance Instance::Identical(int n, const Valuation& v, ItemKind kind) {
  Instance inst;
  inst.n = n;
  inst.m = v.num_goods();
  inst.kind = kind;
  inst.valuations.assign(n, v);
  return inst;
}

void Instance::CheckShape() const {
  if (n < 1) throw InvalidArgument("need at least one agent");
  if (m < 0 || m > kMaxGoods) {
    throw InvalidArgument("m must be in [0, 63]");
  }
  if (static_cast<int>(valuations.size()) != n) {
    throw InvalidArgument("expected " + std::to_string(n) +
                          " valuations, got " +
                          std::to_string(valuations.size()));
  }
  for (int i = 0; i < n; ++i) {
    if (valuations[i].num_goods() != m) {
      throw InvalidArgument("valuation of agent " + std::to_string(i + 1) +
                            " is defined on " +
                            std::to_string(valuations[i].num_goods()) +
                            " goods, expected " + std::to_string(m));
    }
  }
}

ValidationReport ValidateMatroid(const Matroid& matroid, int agent) {
  ValidationReport report;
  const int g = matroid.ground_size();
  if (g > kMatroidAxiomCap) return report;
  const std::uint64_t count = std::uint64_t{1} << g;

  if (const auto* eb = std::get_if<ExplicitBasesMatroid>(&matroid.spec())) {
    const int r = eb->bases.front().size();
    for (const Bundle& b : eb->bases) {
      if (b.size() != r) {
        report.violations.push_back(
            {agent, "basis_cardinality",
             "bases " + eb->bases.front().ToString() + " and " + b.ToString() +
                 " have different sizes",
             eb->bases.front(), b});
        return report;
      }
    }
    const std::set<Bundle> bases(eb->bases.begin(), eb->bases.end());
    for (const Bundle& b1 : eb->bases) {
      for (const Bundle& b2 : eb->bases) {
        for (int x : b1.Minus(b2).Goods()) {
          bool exchanged = false;
          for (int y : b2.Minus(b1).Goods()) {
            if (bases.count(b1.Without(x).With(y))) {
              exchanged = true;
              break;
            }
          }
          if (!exchanged) {
            report.violations.push_back(
                {agent, "basis_exchange",
                 "no exchange for element " + std::to_string(x + 1) +
                     " of " + b1.ToString() + " into " + b2.ToString(),
                 b1, b2});
            return report;
          }
        }
      }
    }
  }

  std::vector<int> rank(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    rank[mask] = matroid.Rank(Bundle(mask));
  }
  if (rank[0] != 0) {
    report.violations.push_back(
        {agent, "rank_empty", "rank of the empty set is nonzero"});
  }
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (int j = 0; j < g; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      if (mask & bit) continue;
      const int step = rank[mask | bit] - rank[mask];
      if (step != 0 && step != 1) {
        report.violations.push_back(
            {agent, "rank_increment",
             "adding one element changes the rank by " + std::to_string(step),
             Bundle(mask), Bundle(mask | bit)});
        return report;
      }
      for (int k = j + 1; k < g; ++k) {
        const std::uint64_t bit2 = std::uint64_t{1} << k;
        if (mask & bit2) continue;
        if (rank[mask] + rank[mask | bit | bit2] >
            rank[mask | bit] + rank[mask | bit2]) {
          report.violations.push_back(
              {agent, "submodularity", "rank fails local submodularity",
               Bundle(mask), Bundle(mask | bit | bit2)});
          return report;
        }
      }
    }
  }
  return report;
}

ValidationReport ValidateValuation(const Valuation& valuation, ItemKind kind,
                                   int agent) {
  ValidationReport report;
  const int m = valuation.num_goods();
  const bool goods = kind == ItemKind::kGoods;

  if (const auto* e = std::get_if<Explicit01Valuation>(&valuation.spec())) {
    for (std::size_t a = 0; a < e->minimal_ones.size(); ++a) {
      for (std::size_t b = 0; b < e->minimal_ones.size(); ++b) {
        if (a != b && e->minimal_ones[a].IsSubsetOf(e->minimal_ones[b])) {
          report.violations.push_back(
              {agent, "antichain",
               "minimal bundle " + e->minimal_ones[a].ToString() +
                   " is contained in " + e->minimal_ones[b].ToString(),
               e->minimal_ones[a], e->minimal_ones[b]});
          return report;
        }
      }
    }
  }
  if (const auto* r = std::get_if<MatroidRankValuation>(&valuation.spec())) {
    Append(report, ValidateMatroid(r->matroid, agent));
    if (!goods) {
      report.violations.push_back(
          {agent, "item_kind", "matroid-rank valuations describe goods"});
    }
    return report;
  }
  if (std::holds_alternative<AdditiveValuation>(valuation.spec()) ||
      std::holds_alternative<UnitDemandValuation>(valuation.spec())) {
    // Nonnegative weights make these structurally monotone.
    if (!goods) {
      report.violations.push_back(
          {agent, "item_kind", valuation.KindName() + " valuations describe goods"});
    }
    return report;
  }
  if (m > DefaultExactCap()) return report;

  const ValueTable table = ValueTable::Build(valuation);
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    const Rational v = table.ValueOfKey(table.key(mask));
    if (goods ? v < 0 : v > 0) {
      report.violations.push_back(
          {agent, "sign",
           "value of " + Bundle(mask).ToString() + " is " + FormatRational(v),
           std::nullopt, Bundle(mask)});
      return report;
    }
  }
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (int j = 0; j < m; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      if (mask & bit) continue;
      const std::int64_t lo = table.key(mask);
      const std::int64_t hi = table.key(mask | bit);
      if (goods ? lo > hi : lo < hi) {
        report.violations.push_back(
            {agent, "monotonicity",
             Bundle(mask).ToString() + " has value " +
                 FormatRational(table.ValueOfKey(lo)) + " but its superset " +
                 Bundle(mask | bit).ToString() + " has value " +
                 FormatRational(table.ValueOfKey(hi)),
             Bundle(mask), Bundle(mask | bit)});
        return report;
      }
    }
  }
  return report;
}

ValidationReport Validate(const Instance& instance) {
  ValidationReport report;
  if (instance.n < 1) {
    report.violations.push_back({-1, "agents", "need at least one agent"});
  }
  if (static_cast<int>(instance.valuations.size()) != instance.n) {
    report.violations.push_back(
        {-1, "agents", "valuation count differs from n"});
  }
  for (std::size_t i = 0; i < instance.valuations.size(); ++i) {
    const Valuation& v = instance.valuations[i];
    if (v.num_goods() != instance.m) {
      report.violations.push_back(
          {static_cast<int>(i), "ground_set",
           "valuation defined on " + std::to_string(v.num_goods()) +
               " goods, instance has " + std::to_string(instance.m)});
      continue;
    }
    Append(report, ValidateValuation(v, instance.kind, static_cast<int>(i)));
  }
  return report;
}

}  // namespace qfair
