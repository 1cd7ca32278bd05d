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

#include "qfair/lab.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "qfair/allocate.h"
#include "qfair/errors.h"
#include "qfair/quantile.h"
#include "test_util.h"

namespace qfair {
namespace {

// Whether some profile of down-sets, each within the budget, vetoes every
// allocation. Tries every profile.
bool NaiveCounterexampleExists(int n, int m, const BigInt& budget) {
  std::vector<FamilyBits> small;
  for (FamilyBits f : EnumerateDownSets(m)) {
    if (AllocationWeight(f, n, m) <= budget) small.push_back(f);
  }
  std::vector<std::size_t> pick(n, 0);
  if (small.empty()) return false;
  while (true) {
    bool all_covered = true;
    testing::ForEachAllocation(n, m, [&](const std::vector<Bundle>& b) {
      bool covered = false;
      for (int i = 0; i < n; ++i) covered |= (small[pick[i]] >> b[i].mask()) & 1;
      all_covered &= covered;
    });
    if (all_covered) return true;
    int i = n - 1;
    while (i >= 0 && ++pick[i] == small.size()) pick[i--] = 0;
    if (i < 0) return false;
  }
}

void ExpectValidCounterexample(const SearchResult& r) {
  ASSERT_TRUE(r.counterexample.has_value());
  const Instance inst = ProfileInstance(*r.counterexample, r.m);
  EXPECT_TRUE(Validate(inst).ok());
  for (const Valuation& v : inst.valuations) {
    EXPECT_LE(CountZeroAllocations(v, r.n), r.budget);
  }
  const std::uint64_t total = PowerU64(r.n, r.m);
  const Rational q(r.budget + 1, BigInt(total));
  EXPECT_FALSE(ExhaustiveFairAllocation(inst, q).allocation.has_value());
}

TEST(CriticalBudgetTest, Examples) {
  EXPECT_EQ(CriticalBudget(3, 6), 323);
  EXPECT_EQ(CriticalBudget(3, 4), 35);
  EXPECT_EQ(CriticalBudget(4, 8), 27647);
  EXPECT_EQ(CriticalBudget(2, 2), 1);
  EXPECT_THROW(CriticalBudget(4, 2), InvalidArgument);
}

TEST(SearchTest, Examples) {
  SearchResult r = SearchCounterexample({.n = 3, .m = 4});
  EXPECT_EQ(r.budget, 35);
  EXPECT_FALSE(r.counterexample.has_value());
  EXPECT_GT(r.candidate_families, 0u);

  r = SearchCounterexample({.n = 3, .m = 4, .budget = BigInt(36)});
  ExpectValidCounterexample(r);

  r = SearchCounterexample({.n = 2, .m = 2, .budget = BigInt(1)});
  EXPECT_FALSE(r.counterexample.has_value());
}

TEST(SearchTest, RefusesLargeSizes) {
  EXPECT_THROW(SearchCounterexample({.n = 3, .m = 5}), BudgetExceeded);
  EXPECT_THROW(SearchCounterexample({.n = 4, .m = 4}), BudgetExceeded);
  EXPECT_THROW(SearchCounterexample({.n = 1, .m = 2}), InvalidArgument);
}

TEST(SearchTest, SymmetryBreakingKeepsVerdicts) {
  for (int n = 2; n <= 3; ++n) {
    for (int m = 1; m <= 3; ++m) {
      const std::uint64_t total = PowerU64(n, m);
      for (std::uint64_t b = 0; b < total; ++b) {
        const SearchResult with = SearchCounterexample(
            {.n = n, .m = m, .budget = BigInt(b), .symmetry_breaking = true});
        const SearchResult without = SearchCounterexample(
            {.n = n, .m = m, .budget = BigInt(b), .symmetry_breaking = false});
        ASSERT_EQ(with.counterexample.has_value(), without.counterexample.has_value())
            << n << " " << m << " " << b;
        EXPECT_LE(with.root_families, without.root_families);
        if (with.counterexample) {
          ExpectValidCounterexample(with);
          ExpectValidCounterexample(without);
        }
      }
    }
  }
}

TEST(SearchTest, MatchesNaiveEnumeration) {
  for (int m = 1; m <= 3; ++m) {
    const std::uint64_t total = PowerU64(2, m);
    for (std::uint64_t b = 0; b < total; ++b) {
      const SearchResult r = SearchCounterexample({.n = 2, .m = m, .budget = BigInt(b)});
      EXPECT_EQ(r.counterexample.has_value(), NaiveCounterexampleExists(2, m, BigInt(b)))
          << m << " " << b;
    }
  }
  EXPECT_EQ(SearchCounterexample({.n = 3, .m = 2, .budget = BigInt(4)}).counterexample.has_value(),
            NaiveCounterexampleExists(3, 2, 4));
}

TEST(SearchTest, CriticalBudgetAcrossSizes) {
  for (int n = 2; n <= 3; ++n) {
    for (int m = n - 1; m <= 4; ++m) {
      if (m < 1) continue;
      const BigInt b = CriticalBudget(n, m);
      EXPECT_FALSE(SearchCounterexample({.n = n, .m = m}).counterexample.has_value());
      const SearchResult above = SearchCounterexample({.n = n, .m = m, .budget = b + 1});
      ExpectValidCounterexample(above);
    }
  }
}

TEST(SearchTest, ThreadCountDoesNotChangeWitness) {
  const SearchResult one = SearchCounterexample({.n = 3, .m = 4, .budget = BigInt(40)});
  const SearchResult three =
      SearchCounterexample({.n = 3, .m = 4, .budget = BigInt(40), .threads = 3});
  EXPECT_EQ(one.counterexample, three.counterexample);
  const SearchResult none = SearchCounterexample({.n = 3, .m = 4, .threads = 3});
  EXPECT_FALSE(none.counterexample.has_value());
}

std::string Export(int n, int m, std::optional<BigInt> budget = std::nullopt) {
  std::ostringstream out;
  ExportIp({.n = n, .m = m, .budget = budget}, out);
  return out.str();
}

LpModel Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseLp(in);
}

TEST(ExportTest, Counts) {
  const LpCounts big = ExpectedLpCounts(3, 6);
  EXPECT_EQ(big.variables, 192u);
  EXPECT_EQ(big.monotonicity_rows, 576u);
  EXPECT_EQ(big.threshold_rows, 3u);
  EXPECT_EQ(big.allocation_rows, 729u);
  EXPECT_EQ(Parse(Export(3, 6)).Counts(), big);

  const LpCounts tiny = ExpectedLpCounts(2, 1);
  EXPECT_EQ(tiny, (LpCounts{4, 2, 2, 2}));
  EXPECT_EQ(Parse(Export(2, 1)).Counts(), tiny);

  for (int n = 2; n <= 5; ++n) {
    for (int m = n - 1; m <= 5; ++m) {
      LpCounts closed;
      closed.variables = n * (std::uint64_t{1} << m);
      for (int k = 0; k <= m; ++k) {
        closed.monotonicity_rows += n * k * Binomial(m, k).convert_to<std::uint64_t>();
      }
      closed.threshold_rows = n;
      closed.allocation_rows = PowerU64(n, m);
      EXPECT_EQ(ExpectedLpCounts(n, m), closed);
      EXPECT_EQ(Parse(Export(n, m)).Counts(), closed);
    }
  }
}

TEST(ExportTest, TinyModelText) {
  const std::string text = Export(2, 1);
  EXPECT_NE(text.find(" mono_1_1_1: x_1_1 - x_1_0 >= 0\n"), std::string::npos);
  // B = 2^0 * 1^1 - 1 = 0: the agent never gets value 0.
  EXPECT_NE(text.find(" thr_1: x_1_0 + x_1_1 >= 2\n"), std::string::npos);
  EXPECT_NE(text.find(" alloc_0: x_1_1 + x_2_0 <= 1\n"), std::string::npos);
  EXPECT_NE(text.find(" alloc_1: x_1_0 + x_2_1 <= 1\n"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 4), "End\n");
}

TEST(ExportTest, Deterministic) {
  EXPECT_EQ(Export(3, 4), Export(3, 4));
  EXPECT_NE(Export(3, 4), Export(3, 4, BigInt(36)));
}

TEST(ExportTest, ModelMatchesSearch) {
  const SearchResult r = SearchCounterexample({.n = 3, .m = 4, .budget = BigInt(36)});
  ASSERT_TRUE(r.counterexample.has_value());
  const LpModel relaxed = Parse(Export(3, 4, BigInt(36)));
  const LpModel tight = Parse(Export(3, 4));
  const auto assignment = LpAssignment(*r.counterexample, 4);
  EXPECT_TRUE(relaxed.Satisfied(assignment));
  EXPECT_FALSE(tight.Satisfied(assignment));

  // Everyone at 1 everywhere leaves some allocation unvetoed.
  EXPECT_FALSE(relaxed.Satisfied(LpAssignment({0, 0, 0}, 4)));
}

TEST(ParseLpTest, RejectsMalformed) {
  EXPECT_THROW(Parse("Subject To\n c1: x + y >=\nEnd\n"), InvalidArgument);
  EXPECT_THROW(Parse("Subject To\n c1: x >= 1\n"), InvalidArgument);
  const LpModel ok = Parse("Minimize\n obj: x\nSubject To\n c1: 2 x - 3 y\n  + z <= -4\nBinary\n x y z\nEnd\n");
  ASSERT_EQ(ok.rows.size(), 1u);
  EXPECT_EQ(ok.rows[0].terms.size(), 3u);
  EXPECT_EQ(ok.rows[0].terms[1].second, -3);
  EXPECT_EQ(ok.rows[0].rhs, -4);
  EXPECT_EQ(ok.binaries.size(), 3u);
}

TEST(ExportTest, FileAndBudget) {
  const std::string path = ::testing::TempDir() + "/qfair_model.lp";
  ExportIpToFile({.n = 2, .m = 3}, path);
  std::ifstream in(path);
  EXPECT_EQ(ParseLp(in).Counts(), ExpectedLpCounts(2, 3));
  EXPECT_THROW(Export(5, 12), BudgetExceeded);
  EXPECT_THROW(ExportIpToFile({.n = 2, .m = 1}, "/nonexistent/dir/model.lp"), IoError);
}

TEST(NamedInstanceTest, Examples) {
  const Instance prop3 = NamedInstance("prop3", {.n = 3, .m = 6});
  EXPECT_TRUE(SameFunction(prop3.valuations[2], Valuation::Additive({1, 1, 0, 0, 0, 0})));
  EXPECT_EQ(prop3.n, 3);

  const Instance gap = NamedInstance("mms_gap");
  EXPECT_EQ(MmsValue(gap.valuations[0], 2).value, 1);
  EXPECT_EQ(MmsValue(gap.valuations[1], 2).value, 1);
  bool both_reach_mms = false;
  testing::ForEachAllocation(2, 4, [&](const std::vector<Bundle>& b) {
    both_reach_mms |= gap.valuations[0].Evaluate(b[0]) == 1 && gap.valuations[1].Evaluate(b[1]) == 1;
  });
  EXPECT_FALSE(both_reach_mms);

  const Instance unequal = NamedInstance("unequal_bundles", {.n = 3, .m = 5, .epsilon = Rational(1, 7)});
  EXPECT_EQ(unequal.valuations[0].Evaluate(Bundle::Full(5)), 2 + Rational(3, 7));

  const Instance goods = NamedInstance("identical_goods", {.n = 2, .m = 4});
  EXPECT_EQ(goods.valuations[1].Evaluate(Bundle::Of({0, 3})), 2);

  for (int n = 1; n <= 6; ++n) {
    const Instance chore = NamedInstance("single_chore", {.n = n});
    EXPECT_EQ(chore.kind, ItemKind::kChores);
    EXPECT_EQ(MaximinSatisfactionAllocation(chore).q_star, Rational(1, n));
  }
  EXPECT_THROW(NamedInstance("nope"), InvalidArgument);
  EXPECT_THROW(NamedInstance("prop3", {.n = 4, .m = 2}), InvalidArgument);
  EXPECT_EQ(NamedInstanceNames().size(), 5u);
}

TEST(EqualSizeGapTest, Examples) {
  const EqualSizeGapReport r = EqualSizeGap(3, 6, Rational(1, 100), 0);
  ASSERT_TRUE(r.equal_size_witness.has_value());
  EXPECT_LT(r.equal_size_best, r.unconstrained);
  EXPECT_TRUE(r.gap());
  for (const Bundle& b : r.equal_size_witness->bundles) EXPECT_EQ(b.size(), 2);

  const EqualSizeGapReport loose = EqualSizeGap(3, 6, Rational(1, 100), 6);
  EXPECT_EQ(loose.equal_size_best, loose.unconstrained);
  EXPECT_FALSE(loose.gap());

  // epsilon (m - n + 1) <= 1.
  const EqualSizeGapReport fits = EqualSizeGap(3, 6, Rational(1, 4), 0);
  EXPECT_GT(ToHighPrecision(fits.concentrated), exp(HighPrecision(-1)));
  EXPECT_GE(fits.unconstrained, fits.concentrated);
  EXPECT_EQ(fits.concentrated_allocation[0], Bundle::Of({2, 3, 4, 5}));
}

TEST(EqualSizeGapTest, MatchesNaiveScan) {
  const Instance inst = NamedInstance("unequal_bundles", {.n = 3, .m = 5, .epsilon = Rational(1, 10)});
  Rational best = -1;
  testing::ForEachAllocation(3, 5, [&](const std::vector<Bundle>& b) {
    Rational worst = 2;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(b[i].size() * 3 - 5) > 3) return;
      worst = std::min(worst, Satisfaction(inst.valuations[i], 3, b[i]));
    }
    best = std::max(best, worst);
  });
  EXPECT_EQ(EqualSizeGap(3, 5, Rational(1, 10), 1).equal_size_best, best);
}

}  // namespace
}  // namespace qfair
