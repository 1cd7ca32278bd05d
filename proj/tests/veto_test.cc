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

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "qfair/boolean_lattice.h"
#include "qfair/errors.h"
#include "qfair/instance.h"
#include "test_util.h"

namespace qfair {
namespace {

using testing::ForEachAllocation;

Instance Prop3() {
  return Instance::Identical(3, Valuation::Additive({1, 1, 0, 0, 0, 0}));
}

std::vector<Bundle> Members(FamilyBits family, int m) {
  std::vector<Bundle> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
    if ((family >> s) & 1) out.push_back(Bundle(s));
  }
  return out;
}

VetoList ListOf(FamilyBits family, int n, int m, int owner = 0) {
  return VetoList::FromBundles(owner, n, m, Members(family, m));
}

// Random down-set of 2^[m] as a sorted bundle list, any m <= 63.
std::vector<Bundle> RandomDownSet(int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(0, FullMask(m));
  std::uniform_int_distribution<int> count(0, 3);
  std::vector<Bundle> gens;
  for (int c = count(rng); c > 0; --c) gens.push_back(Bundle(pick(rng)));
  std::vector<Bundle> out;
  for (std::uint64_t s = 0; s <= FullMask(m); ++s) {
    for (Bundle g : gens) {
      if (Bundle(s).IsSubsetOf(g)) {
        out.push_back(Bundle(s));
        break;
      }
    }
  }
  return out;
}

FamilyBits RandomFamily(int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(0, FullMask(m));
  std::uniform_int_distribution<int> count(0, 2 * m);
  FamilyBits f = 0;
  for (int c = count(rng); c > 0; --c) f |= FamilyBits{1} << pick(rng);
  return DownClosure(f, m);
}

// Brute force: some allocation in which every agent's bundle avoids its
// family.
bool NaiveUnvetoedExists(const std::vector<FamilyBits>& families, int m) {
  const int n = static_cast<int>(families.size());
  bool found = false;
  ForEachAllocation(n, m, [&](const std::vector<Bundle>& b) {
    bool vetoed = false;
    for (int i = 0; i < n; ++i) vetoed |= (families[i] >> b[i].mask()) & 1;
    found |= !vetoed;
  });
  return found;
}

// ---- boolean lattice ----

TEST(BooleanLatticeTest, DedekindCounts) {
  const std::vector<std::size_t> expected = {2, 3, 6, 20, 168, 7581};
  for (int m = 0; m <= 5; ++m) {
    const std::vector<FamilyBits> all = EnumerateDownSets(m);
    EXPECT_EQ(all.size(), expected[m]) << m;
    EXPECT_EQ(std::set<FamilyBits>(all.begin(), all.end()).size(), all.size());
    for (FamilyBits f : all) ASSERT_TRUE(IsDownSet(f, m));
  }
}

TEST(BooleanLatticeTest, DownSetsMatchBruteForce) {
  for (int m = 0; m <= 3; ++m) {
    std::size_t count = 0;
    for (std::uint64_t f = 0; f < (std::uint64_t{1} << (1 << m)); ++f) {
      bool down = true;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
        for (int j = 0; j < m; ++j) {
          if (((f >> s) & 1) && ((s >> j) & 1) && !((f >> (s & ~(1ULL << j))) & 1)) {
            down = false;
          }
        }
      }
      EXPECT_EQ(IsDownSet(f, m), down) << m << " " << f;
      count += down;
    }
    EXPECT_EQ(count, EnumerateDownSets(m).size());
  }
}

TEST(BooleanLatticeTest, DownClosure) {
  EXPECT_EQ(DownClosure(0, 3), 0u);
  EXPECT_EQ(DownClosure(FamilyBits{1} << 7, 3), AllBundles(3));
  EXPECT_EQ(DownClosure(FamilyBits{1} << 5, 3), 0b110011u);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const FamilyBits f = rng();
    const FamilyBits d = DownClosure(f, 6);
    EXPECT_TRUE(IsDownSet(d, 6));
    EXPECT_EQ(d & f, f);
  }
}

TEST(BooleanLatticeTest, CanonicalClassCounts) {
  // Monotone Boolean functions up to permutation of variables.
  const std::vector<std::size_t> expected = {2, 3, 5, 10, 30, 210};
  for (int m = 0; m <= 5; ++m) {
    std::set<FamilyBits> classes;
    std::size_t canonical = 0;
    for (FamilyBits f : EnumerateDownSets(m)) {
      classes.insert(CanonicalUnderGoodPermutations(f, m));
      canonical += IsCanonicalUnderGoodPermutations(f, m);
    }
    EXPECT_EQ(classes.size(), expected[m]) << m;
    EXPECT_EQ(canonical, expected[m]) << m;
  }
}

TEST(BooleanLatticeTest, CanonicalIsOrbitMinimum) {
  std::mt19937_64 rng(5);
  for (int m = 1; m <= 5; ++m) {
    std::vector<int> perm(m);
    for (int t = 0; t < 30; ++t) {
      const FamilyBits f = RandomFamily(m, rng);
      FamilyBits least = f;
      std::iota(perm.begin(), perm.end(), 0);
      do {
        least = std::min(least, PermuteGoods(f, m, perm));
      } while (std::next_permutation(perm.begin(), perm.end()));
      EXPECT_EQ(CanonicalUnderGoodPermutations(f, m), least);
    }
  }
}

TEST(BooleanLatticeTest, AllocationWeightCountsAllocations) {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 5; ++m) {
      const FamilyBits f = RandomFamily(m, rng);
      std::uint64_t count = 0;
      ForEachAllocation(n, m, [&](const std::vector<Bundle>& b) {
        count += (f >> b[0].mask()) & 1;
      });
      EXPECT_EQ(AllocationWeight(f, n, m), count);
    }
  }
}

TEST(BooleanLatticeTest, ZeroFamilyRoundTrip) {
  for (FamilyBits f : EnumerateDownSets(4)) {
    const Valuation v = ZeroFamilyValuation(f, 4);
    ASSERT_EQ(ZeroFamily(v), f);
    for (std::uint64_t s = 0; s < 16; ++s) {
      EXPECT_EQ(v.Evaluate(Bundle(s)), ((f >> s) & 1) ? 0 : 1);
    }
  }
  EXPECT_THROW(ZeroFamilyValuation(0b10, 1), InvalidArgument);
  EXPECT_THROW(EnumerateDownSets(7), InvalidArgument);
}

// ---- veto lists ----

TEST(VetoFromValuationTest, Examples) {
  EXPECT_TRUE(VetoFromValuation(Valuation::Additive({1}), 2, Rational(1, 2))
                  .zero_bundles.empty());
  EXPECT_TRUE(VetoFromValuation(Valuation::Constant(4, 3), 3, Rational(1, 2))
                  .zero_bundles.empty());

  const Instance inst = Prop3();
  const VetoList list =
      VetoFromValuation(inst.valuations[0], 3, Rational(4, 9) + Rational(1, 729));
  EXPECT_EQ(list.Size(), 324);
  EXPECT_EQ(list.zero_bundles.size(), 16u);
  for (Bundle b : list.zero_bundles) {
    EXPECT_FALSE(b.contains(0) || b.contains(1)) << b.ToString();
  }
  EXPECT_TRUE(IsMonotonicityConsistent(list));
}

TEST(VetoFromValuationTest, SizeAtMostB) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + t % 2;
    const int m = 1 + t % 5;
    const Valuation v = t % 3 == 0 ? testing::RandomAdditive(m, rng, 4)
                                   : testing::RandomMonotoneTable(m, rng, 2);
    const std::uint64_t total = PowerU64(n, m);
    for (std::uint64_t b = 0; b < total; ++b) {
      const VetoList list = VetoFromValuation(v, n, Rational(b + 1, total));
      ASSERT_TRUE(IsMonotonicityConsistent(list));
      ASSERT_LE(list.Size(), b);
    }
  }
}

TEST(VetoListTest, ConsistencyExamples) {
  EXPECT_TRUE(IsMonotonicityConsistent(
      VetoList::FromBundles(0, 2, 2, {Bundle(), Bundle::Of({0})})));
  EXPECT_FALSE(IsMonotonicityConsistent(
      VetoList::FromBundles(0, 2, 2, {Bundle::Of({0})})));
  EXPECT_TRUE(IsMonotonicityConsistent(VetoList::FromBundles(0, 2, 2, {})));
  EXPECT_THROW(VetoList::FromBundles(0, 2, 2, {Bundle::Of({2})}), InvalidArgument);
}

TEST(VetoListTest, ConsistencyMatchesDownSets) {
  for (int m = 0; m <= 3; ++m) {
    for (std::uint64_t f = 0; f < (std::uint64_t{1} << (1 << m)); ++f) {
      EXPECT_EQ(IsMonotonicityConsistent(ListOf(f, 2, m)), IsDownSet(f, m));
    }
  }
}

TEST(VetoListTest, SizeMatchesBruteForce) {
  std::mt19937_64 rng(13);
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 8; ++m) {
      for (int t = 0; t < 4; ++t) {
        const VetoList list = VetoList::FromBundles(0, n, m, RandomDownSet(m, rng));
        std::uint64_t vetoed = 0;
        ForEachAllocation(n, m, [&](const std::vector<Bundle>& b) {
          vetoed += list.Contains(b[0]);
        });
        EXPECT_EQ(list.Size(), vetoed) << n << " " << m;
      }
    }
  }
}

TEST(ValuationFromVetoTest, Examples) {
  const Valuation one = ValuationFromVeto(VetoList::FromBundles(0, 2, 3, {}));
  EXPECT_TRUE(SameFunction(one, Valuation::Constant(3, 1)));
  const auto* e = std::get_if<Explicit01Valuation>(&one.spec());
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->minimal_ones, std::vector<Bundle>{Bundle()});

  FamilyBits avoid01 = 0;
  for (std::uint64_t s = 0; s < 64; ++s) {
    if ((s & 3) == 0) avoid01 |= FamilyBits{1} << s;
  }
  const Valuation u = ValuationFromVeto(ListOf(avoid01, 3, 6));
  e = std::get_if<Explicit01Valuation>(&u.spec());
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->minimal_ones,
            (std::vector<Bundle>{Bundle::Of({0}), Bundle::Of({1})}));

  const Valuation zero = ValuationFromVeto(ListOf(AllBundles(3), 2, 3));
  EXPECT_TRUE(SameFunction(zero, Valuation::Constant(3, 0)));

  EXPECT_THROW(ValuationFromVeto(VetoList::FromBundles(0, 2, 2, {Bundle::Of({0})})),
               InvalidArgument);
}

TEST(ValuationFromVetoTest, ZeroExactlyOnFamily) {
  for (FamilyBits f : EnumerateDownSets(4)) {
    const Valuation u = ValuationFromVeto(ListOf(f, 2, 4));
    for (std::uint64_t s = 0; s < 16; ++s) {
      ASSERT_EQ(u.Evaluate(Bundle(s)) == 0, ((f >> s) & 1) != 0);
    }
  }
}

TEST(VetoRoundTripTest, IdentityOnDownSets) {
  for (int n = 2; n <= 3; ++n) {
    for (int m = 1; m <= 4; ++m) {
      const std::uint64_t total = PowerU64(n, m);
      for (FamilyBits f : EnumerateDownSets(m)) {
        if (f == AllBundles(m)) continue;
        const VetoList list = ListOf(f, n, m);
        const Rational q(list.Size() + 1, BigInt(total));
        EXPECT_EQ(VetoFromValuation(ValuationFromVeto(list), n, q), list);
      }
    }
  }
}

TEST(FindUnvetoedTest, Examples) {
  const std::vector<VetoList> empty = {VetoList::FromBundles(0, 3, 2, {}),
                                       VetoList::FromBundles(1, 3, 2, {}),
                                       VetoList::FromBundles(2, 3, 2, {})};
  const AcceptSearchResult r = FindUnvetoedAllocation(empty);
  ASSERT_TRUE(r.allocation.has_value());
  EXPECT_EQ(r.index, 0u);
  EXPECT_EQ((*r.allocation)[0], Bundle::Full(2));

  const std::vector<VetoList> both = {VetoList::FromBundles(0, 2, 1, {Bundle()}),
                                      VetoList::FromBundles(1, 2, 1, {Bundle()})};
  EXPECT_FALSE(FindUnvetoedAllocation(both).allocation.has_value());

  EXPECT_THROW(FindUnvetoedAllocation({VetoList::FromBundles(0, 2, 1, {}),
                                       VetoList::FromBundles(1, 2, 2, {})}),
               InvalidArgument);
}

TEST(FindUnvetoedTest, MatchesBruteForce) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 2;
    const int m = 1 + t % 5;
    std::vector<FamilyBits> families;
    std::vector<VetoList> lists;
    for (int i = 0; i < n; ++i) {
      families.push_back(RandomFamily(m, rng));
      lists.push_back(ListOf(families.back(), n, m, i));
    }
    const AcceptSearchResult r = FindUnvetoedAllocation(lists, {.threads = 1 + t % 3});
    ASSERT_EQ(r.allocation.has_value(), NaiveUnvetoedExists(families, m));
    if (r.allocation) {
      for (int i = 0; i < n; ++i) EXPECT_FALSE(lists[i].Contains((*r.allocation)[i]));
    }
  }
}

TEST(FindUnvetoedTest, SmallListsFromValuationsLeaveRoom) {
  std::mt19937_64 rng(19);
  for (int m = 1; m <= 6; ++m) {
    const std::uint64_t total = PowerU64(2, m);
    const auto b = static_cast<std::uint64_t>(std::floor(total / (2 * std::exp(1.0))));
    const Rational q(b + 1, total);
    for (int t = 0; t < 50; ++t) {
      const std::vector<VetoList> lists = {
          VetoFromValuation(testing::RandomMonotoneTable(m, rng, 2), 2, q, 0),
          VetoFromValuation(testing::RandomExplicit01(m, rng), 2, q, 1)};
      ASSERT_LE(lists[0].Size(), b);
      ASSERT_LE(lists[1].Size(), b);
      EXPECT_TRUE(FindUnvetoedAllocation(lists).allocation.has_value()) << m;
    }
  }
}

// Lists each covering fewer than n^(m-1) allocations leave one uncovered.
TEST(UnionBoundTest, ExhaustiveTwoAgents) {
  for (int m = 1; m <= 5; ++m) {
    const FamilyBits all = AllBundles(m);
    const std::uint64_t limit = PowerU64(2, m - 1);
    std::vector<FamilyBits> small;
    for (FamilyBits f : EnumerateDownSets(m)) {
      if (AllocationWeight(f, 2, m) < limit) small.push_back(f);
    }
    // Agent 2's family seen from agent 1's bundle: bit S set iff [m] \ S is in.
    std::vector<FamilyBits> mirrored;
    for (FamilyBits f : small) {
      FamilyBits g = 0;
      for (std::uint64_t s = 0; s <= FullMask(m); ++s) {
        if ((f >> (FullMask(m) ^ s)) & 1) g |= FamilyBits{1} << s;
      }
      mirrored.push_back(g);
    }
    std::uint64_t covered = 0;
    for (FamilyBits a : small) {
      for (FamilyBits g : mirrored) covered += ((a | g) & all) == all;
    }
    EXPECT_EQ(covered, 0u) << m;
  }
}

TEST(UnionBoundTest, ExhaustiveThreeAgents) {
  for (int m = 1; m <= 4; ++m) {
    const std::uint64_t limit = PowerU64(3, m - 1);
    std::vector<FamilyBits> small;
    for (FamilyBits f : EnumerateDownSets(m)) {
      if (AllocationWeight(f, 3, m) < limit) small.push_back(f);
    }
    for (FamilyBits a : small) {
      for (FamilyBits b : small) {
        for (FamilyBits c : small) {
          ASSERT_TRUE(NaiveUnvetoedExists({a, b, c}, m)) << m;
        }
      }
    }
  }
}

TEST(UnionBoundTest, RandomLargerInstances) {
  std::mt19937_64 rng(23);
  for (int n = 2; n <= 3; ++n) {
    for (int m = 5; m <= 6; ++m) {
      const std::uint64_t limit = PowerU64(n, m - 1);
      int tried = 0;
      while (tried < 300) {
        std::vector<VetoList> lists;
        for (int i = 0; i < n; ++i) {
          FamilyBits f = RandomFamily(m, rng);
          // Dropping the largest member keeps the family a down-set.
          while (AllocationWeight(f, n, m) >= limit) {
            f &= ~(FamilyBits{1} << (63 - std::countl_zero(f)));
          }
          lists.push_back(ListOf(f, n, m, i));
        }
        ++tried;
        ASSERT_TRUE(FindUnvetoedAllocation(lists).allocation.has_value());
      }
    }
  }
}

// Without the downward closure requirement, n^(m-1) per list is exactly the
// threshold: at n = 2, m = 2 two lists of two allocations can cover all four,
// while lists of one cannot.
TEST(UnionBoundTest, ArbitraryListsThresholdIsTight) {
  constexpr int kAllocations = 4;
  bool covered_below = false;
  bool covered_at = false;
  for (unsigned a = 0; a < (1u << kAllocations); ++a) {
    for (unsigned b = 0; b < (1u << kAllocations); ++b) {
      if ((a | b) != (1u << kAllocations) - 1) continue;
      const int size = std::max(std::popcount(a), std::popcount(b));
      covered_below |= size < 2;
      covered_at |= size == 2;
    }
  }
  EXPECT_FALSE(covered_below);
  EXPECT_TRUE(covered_at);
}

// ---- equivalence ----

TEST(EquivalenceTest, Prop3CoversEverything) {
  const Instance inst = Prop3();
  const Rational q = Rational(4, 9) + Rational(1, 729);
  std::vector<VetoList> lists;
  for (int i = 0; i < 3; ++i) {
    lists.push_back(VetoFromValuation(inst.valuations[i], 3, q, i));
  }
  std::uint64_t covered = 0;
  ForEachAllocation(3, 6, [&](const std::vector<Bundle>& b) {
    bool vetoed = false;
    for (int i = 0; i < 3; ++i) vetoed |= lists[i].Contains(b[i]);
    covered += vetoed;
  });
  EXPECT_EQ(covered, 729u);
  EXPECT_FALSE(FindUnvetoedAllocation(lists).allocation.has_value());
  EXPECT_FALSE(ExhaustiveFairAllocation(inst, q).allocation.has_value());

  EquivalenceReport report;
  CheckEquivalenceAtLevel(inst.valuations, 324, report);
  CheckEquivalenceAtLevel(inst.valuations, 323, report);
  EXPECT_TRUE(report.ok()) << report.failures[0];
}

TEST(EquivalenceTest, SmallestEdge) {
  const EquivalenceReport report = EquivalenceSuite(2, 1, 20, 1);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.profiles, 20u);
}

TEST(EquivalenceTest, RandomProfiles) {
  for (int n = 2; n <= 3; ++n) {
    for (int m = 1; m <= 6; ++m) {
      const EquivalenceReport report = EquivalenceSuite(n, m, 40, 100 * n + m);
      EXPECT_TRUE(report.ok()) << n << " " << m << ": " << report.failures[0];
      EXPECT_GE(report.levels, 80u);
    }
  }
}

TEST(EquivalenceTest, ExhaustivePairsSmall) {
  for (int m = 1; m <= 3; ++m) {
    const EquivalenceReport report = EquivalenceExhaustivePairs(m);
    EXPECT_TRUE(report.ok()) << report.failures[0];
    const std::uint64_t d = EnumerateDownSets(m).size();
    EXPECT_EQ(report.profiles, d * d);
    EXPECT_EQ(report.levels, d * d * PowerU64(2, m));
  }
}

TEST(EquivalenceTest, NonZeroOneProfiles) {
  std::mt19937_64 rng(29);
  EquivalenceReport report;
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 2;
    const int m = 1 + t % 4;
    std::vector<Valuation> profile;
    for (int i = 0; i < n; ++i) profile.push_back(testing::RandomMonotoneTable(m, rng, 3));
    const std::uint64_t total = PowerU64(n, m);
    for (std::uint64_t b = 0; b < total; ++b) CheckEquivalenceAtLevel(profile, b, report);
  }
  EXPECT_TRUE(report.ok()) << report.failures[0];
}

}  // namespace
}  // namespace qfair
