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

#include "qfair/veto.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "qfair/boolean_lattice.h"
#include "qfair/errors.h"
#include "qfair/quantile.h"

namespace qfair {
namespace {

constexpr std::size_t kMaxReportedFailures = 10;

void Fail(EquivalenceReport& report, const std::string& what) {
  ++report.failure_count;
  if (report.failures.size() < kMaxReportedFailures) {
    report.failures.push_back(what);
  }
}

std::vector<bool> Membership(const VetoList& list) {
  std::vector<bool> in(std::size_t{1} << list.m, false);
  for (Bundle b : list.zero_bundles) in[b.mask()] = true;
  return in;
}

std::string DescribeProfile(const std::vector<Valuation>& profile) {
  std::ostringstream out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto* e = std::get_if<Explicit01Valuation>(&profile[i].spec());
    out << (i ? " | " : "") << "agent " << i + 1 << ":";
    if (e == nullptr) {
      out << profile[i].KindName();
      continue;
    }
    for (Bundle b : e->minimal_ones) out << " " << b.ToString();
  }
  return out.str();
}

}  // namespace

VetoList VetoList::FromBundles(int owner, int n, int m,
                               std::vector<Bundle> bundles) {
  if (n < 1) throw InvalidArgument("need at least one agent");
  for (Bundle b : bundles) {
    if (!b.FitsIn(m)) {
      throw InvalidArgument("vetoed bundle " + b.ToString() +
                            " outside the good set");
    }
  }
  std::sort(bundles.begin(), bundles.end());
  bundles.erase(std::unique(bundles.begin(), bundles.end()), bundles.end());
  VetoList out;
  out.owner = owner;
  out.n = n;
  out.m = m;
  out.zero_bundles = std::move(bundles);
  return out;
}

BigInt VetoList::Size() const {
  BigInt total = 0;
  for (Bundle b : zero_bundles) total += Power(n - 1, m - b.size());
  return total;
}

bool VetoList::Contains(Bundle b) const {
  return std::binary_search(zero_bundles.begin(), zero_bundles.end(), b);
}

VetoList VetoFromValuation(const Valuation& valuation, int n, const Rational& q,
                           int owner) {
  const Rational share = QuantileShare(valuation, n, q);
  const ValueTable table = ValueTable::Build(valuation);
  std::vector<std::int64_t> distinct = table.keys();
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto it = std::partition_point(
      distinct.begin(), distinct.end(),
      [&](std::int64_t k) { return table.ValueOfKey(k) < share; });
  std::vector<Bundle> below;
  if (it != distinct.begin()) {
    const std::int64_t last_below = *(it - 1);
    for (std::uint64_t s = 0; s < table.keys().size(); ++s) {
      if (table.key(s) <= last_below) below.push_back(Bundle(s));
    }
  }
  return VetoList::FromBundles(owner, n, valuation.num_goods(), std::move(below));
}

bool IsMonotonicityConsistent(const VetoList& list) {
  for (Bundle b : list.zero_bundles) {
    if (!b.FitsIn(list.m)) return false;
    for (int j : b.Goods()) {
      if (!list.Contains(b.Without(j))) return false;
    }
  }
  return true;
}

Valuation ValuationFromVeto(const VetoList& list) {
  if (!IsMonotonicityConsistent(list)) {
    throw InvalidArgument("veto list of agent " + std::to_string(list.owner + 1) +
                          " is not monotonicity-consistent");
  }
  const std::vector<bool> in = Membership(list);
  return Valuation::Explicit01FromPredicate(
      list.m, [&](Bundle b) { return !in[b.mask()]; });
}

AcceptSearchResult FindUnvetoedAllocation(const std::vector<VetoList>& lists,
                                          const SearchOptions& options) {
  if (lists.empty()) throw InvalidArgument("need at least one veto list");
  const int n = static_cast<int>(lists.size());
  const int m = lists[0].m;
  std::vector<AcceptTable> accept;
  for (const VetoList& list : lists) {
    if (list.m != m || list.n != n) {
      throw InvalidArgument("veto lists disagree on n or m");
    }
    const std::vector<bool> in = Membership(list);
    AcceptTable t(in.size());
    for (std::size_t s = 0; s < in.size(); ++s) t[s] = !in[s];
    accept.push_back(std::move(t));
  }
  return FindAcceptedAllocation(n, m, accept, options);
}

void CheckEquivalenceAtLevel(const std::vector<Valuation>& profile,
                             std::uint64_t b, EquivalenceReport& report) {
  const int n = static_cast<int>(profile.size());
  const int m = profile[0].num_goods();
  const std::uint64_t total = PowerU64(n, m);
  const Rational q(b + 1, total);
  ++report.levels;
  auto fail = [&](const std::string& what) {
    Fail(report, what + " at q=" + FormatRational(q) + " for " +
                     DescribeProfile(profile));
  };

  Instance inst;
  inst.n = n;
  inst.m = m;
  inst.valuations = profile;
  const AcceptSearchResult fair = ExhaustiveFairAllocation(inst, q);

  std::vector<VetoList> lists;
  for (int i = 0; i < n; ++i) {
    lists.push_back(VetoFromValuation(profile[i], n, q, i));
    ++report.checks;
    if (!IsMonotonicityConsistent(lists.back())) fail("inconsistent list");
    if (lists.back().Size() > b) fail("list larger than b");
  }
  const AcceptSearchResult unvetoed = FindUnvetoedAllocation(lists);
  ++report.checks;
  if (fair.allocation.has_value() != unvetoed.allocation.has_value() ||
      (fair.allocation && fair.index != unvetoed.index)) {
    fail("fair allocation and unvetoed allocation disagree");
  }

  Instance rebuilt;
  rebuilt.n = n;
  rebuilt.m = m;
  for (const VetoList& list : lists) {
    rebuilt.valuations.push_back(ValuationFromVeto(list));
  }
  const AcceptSearchResult fair01 = ExhaustiveFairAllocation(rebuilt, q);
  ++report.checks;
  if (fair01.allocation.has_value() != unvetoed.allocation.has_value() ||
      (fair01.allocation && fair01.index != unvetoed.index)) {
    fail("rebuilt 0/1 profile and veto lists disagree");
  }

  for (int i = 0; i < n; ++i) {
    const BigInt size = lists[i].Size();
    const Rational level(size + 1, BigInt(total));
    ++report.checks;
    if (!(VetoFromValuation(rebuilt.valuations[i], n, level, i) == lists[i])) {
      fail("round trip changed the list of agent " + std::to_string(i + 1));
    }
  }
}

EquivalenceReport EquivalenceSuite(int n, int m, int trials, std::uint64_t seed) {
  if (n < 1 || m < 1 || m > kMaxLatticeGoods) {
    throw InvalidArgument("equivalence suite needs n >= 1 and 1 <= m <= 6");
  }
  const std::uint64_t total = AllocationCount(n, m, kDefaultAllocationBudget);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> bundle(0, FullMask(m));
  std::uniform_int_distribution<int> generators(0, 2 * m);
  std::uniform_int_distribution<std::uint64_t> level(0, total - 1);
  EquivalenceReport report;
  for (int t = 0; t < trials; ++t) {
    std::vector<Valuation> profile;
    for (int i = 0; i < n; ++i) {
      FamilyBits zeros = 0;
      for (int g = generators(rng); g > 0; --g) {
        zeros |= FamilyBits{1} << bundle(rng);
      }
      profile.push_back(ZeroFamilyValuation(DownClosure(zeros, m), m));
    }
    ++report.profiles;
    Instance inst;
    inst.n = n;
    inst.m = m;
    inst.valuations = profile;
    const Rational q_star = MaximinSatisfactionAllocation(inst).q_star;
    const std::uint64_t critical =
        (q_star * total).convert_to<BigInt>().convert_to<std::uint64_t>() - 1;
    CheckEquivalenceAtLevel(profile, critical, report);
    if (critical + 1 < total) CheckEquivalenceAtLevel(profile, critical + 1, report);
    CheckEquivalenceAtLevel(profile, level(rng), report);
  }
  return report;
}

EquivalenceReport EquivalenceExhaustivePairs(int m) {
  if (m < 1 || m > 4) throw InvalidArgument("exhaustive pairs need 1 <= m <= 4");
  const std::vector<FamilyBits> downsets = EnumerateDownSets(m);
  std::vector<Valuation> valuations;
  for (FamilyBits d : downsets) valuations.push_back(ZeroFamilyValuation(d, m));
  const std::uint64_t total = PowerU64(2, m);
  EquivalenceReport report;
  for (const Valuation& a : valuations) {
    for (const Valuation& b : valuations) {
      ++report.profiles;
      for (std::uint64_t level = 0; level < total; ++level) {
        CheckEquivalenceAtLevel({a, b}, level, report);
      }
    }
  }
  return report;
}

}  // namespace qfair
