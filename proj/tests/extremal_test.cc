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

#include "qfair/extremal.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "qfair/boolean_lattice.h"
#include "qfair/errors.h"

namespace qfair {
namespace {

SetFamily Family(int m, int k, std::vector<std::vector<int>> sets) {
  std::vector<Bundle> bundles;
  for (const auto& s : sets) bundles.push_back(Bundle::FromGoods(s));
  return SetFamily::Make(m, k, std::move(bundles));
}

SetFamily RandomFamily(int m, int k, std::size_t count, std::mt19937_64& rng) {
  const SetFamily layer = SetFamily::Layer(m, k);
  std::vector<Bundle> sets;
  std::sample(layer.sets.begin(), layer.sets.end(), std::back_inserter(sets),
              std::min(count, layer.size()), rng);
  return SetFamily::Make(m, k, std::move(sets));
}

// Largest pairwise disjoint subcollection, by trying every subcollection.
int NaiveMatchingNumber(const SetFamily& f) {
  const std::size_t count = f.size();
  int best = 0;
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << count); ++pick) {
    std::uint64_t used = 0;
    bool disjoint = true;
    for (std::size_t i = 0; i < count && disjoint; ++i) {
      if (!((pick >> i) & 1)) continue;
      disjoint = (used & f.sets[i].mask()) == 0;
      used |= f.sets[i].mask();
    }
    if (disjoint) best = std::max(best, std::popcount(pick));
  }
  return best;
}

bool NaiveRainbow(const std::vector<SetFamily>& families, std::size_t agent = 0,
                  std::uint64_t used = 0) {
  if (agent == families.size()) return true;
  for (Bundle s : families[agent].sets) {
    if ((s.mask() & used) == 0 && NaiveRainbow(families, agent + 1, used | s.mask())) {
      return true;
    }
  }
  return false;
}

std::set<std::uint64_t> NaiveShadow(const SetFamily& f, int kp) {
  std::set<std::uint64_t> out;
  for (std::uint64_t t = 0; t <= FullMask(f.m); ++t) {
    if (std::popcount(t) != kp) continue;
    for (Bundle s : f.sets) {
      if ((t & ~s.mask()) == 0) {
        out.insert(t);
        break;
      }
    }
  }
  return out;
}

TEST(SetFamilyTest, MakeSortsAndValidates) {
  const SetFamily f = Family(5, 2, {{3, 4}, {0, 4}, {1, 2}, {0, 1}, {0, 4}});
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f.sets[0], Bundle::Of({0, 1}));
  EXPECT_EQ(f.sets[1], Bundle::Of({0, 4}));
  EXPECT_EQ(f.sets[2], Bundle::Of({1, 2}));
  EXPECT_EQ(f.sets[3], Bundle::Of({3, 4}));
  EXPECT_TRUE(f.Contains(Bundle::Of({1, 2})));
  EXPECT_FALSE(f.Contains(Bundle::Of({2, 3})));
  EXPECT_THROW(Family(5, 2, {{0}}), InvalidArgument);
  EXPECT_THROW(Family(3, 2, {{2, 3}}), InvalidArgument);
  EXPECT_EQ(SetFamily::Layer(6, 2).size(), 15u);
  EXPECT_THROW(SetFamily::Layer(30, 15, 1000), BudgetExceeded);
}

TEST(MatchingTest, Examples) {
  std::vector<Bundle> star;
  for (int j = 1; j < 5; ++j) star.push_back(Bundle::Of({0, j}));
  EXPECT_EQ(MatchingNumber(SetFamily::Make(5, 2, star)), 1);
  EXPECT_EQ(MatchingNumber(Family(6, 2, {{0, 1}, {2, 3}, {4, 5}})), 3);
  EXPECT_EQ(MatchingNumber(SetFamily::Layer(3, 2)), 1);
  EXPECT_EQ(MatchingNumber(SetFamily::Make(4, 2, {})), 0);
  EXPECT_EQ(MatchingNumber(SetFamily::Layer(12, 3)), 4);
}

TEST(MatchingTest, MatchesNaiveOracle) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 300; ++t) {
    const int m = 4 + t % 6;
    const int k = 1 + t % 3;
    if (k > m) continue;
    const SetFamily f = RandomFamily(m, k, 1 + t % 12, rng);
    const MatchingResult r = MaximumMatching(f);
    ASSERT_EQ(static_cast<int>(r.matching.size()), NaiveMatchingNumber(f));
    std::uint64_t used = 0;
    for (Bundle s : r.matching) {
      ASSERT_TRUE(f.Contains(s));
      ASSERT_EQ(used & s.mask(), 0u);
      used |= s.mask();
    }
  }
}

TEST(MatchingTest, TargetStopsEarly) {
  const SetFamily layer = SetFamily::Layer(12, 2);
  EXPECT_EQ(MaximumMatching(layer, 3).matching.size(), 3u);
  EXPECT_EQ(MaximumMatching(layer).matching.size(), 6u);
  EXPECT_THROW(MaximumMatching(layer, 0, {.family_budget = 10}), BudgetExceeded);
}

TEST(RainbowTest, Examples) {
  const SetFamily layer = SetFamily::Layer(6, 2);
  EXPECT_TRUE(RainbowMatching({layer, layer, layer}).has_value());
  EXPECT_FALSE(RainbowMatching({Family(1, 1, {{0}}), Family(1, 1, {{0}})}).has_value());
  const auto r = RainbowMatching({Family(4, 2, {{0, 1}}), Family(4, 2, {{2, 3}})});
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ((*r)[0], Bundle::Of({0, 1}));
  EXPECT_EQ((*r)[1], Bundle::Of({2, 3}));
}

TEST(RainbowTest, MatchesNaiveAndMatchingNumber) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 300; ++t) {
    const int m = 4 + t % 5;
    const int k = 1 + t % 2;
    const int n = 2 + t % 2;
    std::vector<SetFamily> families;
    for (int i = 0; i < n; ++i) families.push_back(RandomFamily(m, k, 1 + t % 7, rng));
    const auto r = RainbowMatching(families);
    ASSERT_EQ(r.has_value(), NaiveRainbow(families));
    if (r) {
      std::uint64_t used = 0;
      for (int i = 0; i < n; ++i) {
        ASSERT_TRUE(families[i].Contains((*r)[i]));
        ASSERT_EQ(used & (*r)[i].mask(), 0u);
        used |= (*r)[i].mask();
      }
    }
    const std::vector<SetFamily> same(n, families[0]);
    EXPECT_EQ(RainbowMatching(same).has_value(), MatchingNumber(families[0]) >= n);
  }
}

TEST(ShadowTest, Examples) {
  const SetFamily s = Shadow(Family(4, 3, {{0, 1, 2}}), 2);
  EXPECT_EQ(s, Family(4, 2, {{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(Shadow(SetFamily::Layer(6, 4), 2), SetFamily::Layer(6, 2));
  EXPECT_EQ(Shadow(Family(3, 2, {{0, 1}}), 0).size(), 1u);
  EXPECT_THROW(Shadow(SetFamily::Layer(4, 2), 3), InvalidArgument);

  std::mt19937_64 rng(47);
  for (int t = 0; t < 50; ++t) {
    const SetFamily g = RandomFamily(7, 3, 4 + t % 10, rng);
    EXPECT_GE(Shadow(g, 2).size(), 6u);
  }
}

TEST(ShadowTest, MatchesNaiveAndIsMonotone) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 100; ++t) {
    const int m = 5 + t % 5;
    const int k = 2 + t % 3;
    const SetFamily b = RandomFamily(m, k, 1 + t % 15, rng);
    std::vector<Bundle> half(b.sets.begin(), b.sets.begin() + (b.size() + 1) / 2);
    const SetFamily a = SetFamily::Make(m, k, half);
    for (int kp = 0; kp <= k; ++kp) {
      const SetFamily sb = Shadow(b, kp);
      const std::set<std::uint64_t> oracle = NaiveShadow(b, kp);
      ASSERT_EQ(sb.size(), oracle.size());
      for (Bundle s : sb.sets) ASSERT_TRUE(oracle.count(s.mask()));
      for (Bundle s : Shadow(a, kp).sets) ASSERT_TRUE(sb.Contains(s));
    }
    const SetFamily single = SetFamily::Make(m, k, {b.sets[0]});
    for (int kp = 0; kp <= k; ++kp) {
      EXPECT_EQ(BigInt(Shadow(single, kp).size()), Binomial(k, kp));
    }
  }
}

TEST(KruskalKatonaTest, Examples) {
  EXPECT_TRUE(KruskalKatonaCheck(Family(6, 3, {{0, 1, 2}}), 5, 2));
  EXPECT_TRUE(KruskalKatonaCheck(SetFamily::Layer(6, 3), 6, 1));
  const SetFamily full = SetFamily::Layer(5, 3);
  EXPECT_TRUE(KruskalKatonaCheck(SetFamily::Make(8, 3, full.sets), 5, 2));
  EXPECT_EQ(Shadow(SetFamily::Make(8, 3, full.sets), 2).size(), 10u);
  EXPECT_THROW(KruskalKatonaCheck(full, 6, 2), InvalidArgument);
  EXPECT_THROW(KruskalKatonaCheck(full, 2, 2), InvalidArgument);
}

TEST(KruskalKatonaTest, RandomFamilies) {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 1500; ++t) {
    const int m = 3 + t % 10;
    const int k = 1 + t % std::min(m, 5);
    const std::size_t layer = Binomial(m, k).convert_to<std::size_t>();
    const SetFamily g = RandomFamily(m, k, 1 + rng() % layer, rng);
    for (int mp = k; mp <= m; ++mp) {
      for (int kp = 0; kp <= k; ++kp) ASSERT_TRUE(KruskalKatonaCheck(g, mp, kp));
    }
  }
}

TEST(EmcBoundsTest, Examples) {
  EmcBounds b = ComputeEmcBounds(4, 1, 2);
  EXPECT_EQ(b.cover, 1);
  EXPECT_EQ(b.clique, 1);
  EXPECT_EQ(b.max, 1);
  b = ComputeEmcBounds(9, 2, 3);
  EXPECT_EQ(b.cover, 15);
  EXPECT_EQ(b.clique, 10);
  EXPECT_EQ(b.max, 15);
  b = ComputeEmcBounds(5, 0, 3);
  EXPECT_EQ(b.cover, 0);
  EXPECT_EQ(b.clique, 0);
  EXPECT_THROW(ComputeEmcBounds(5, 2, 3), InvalidArgument);
}

TEST(EmcExtremalTest, Examples) {
  EmcExtremal e = EmcExtremalFamilies(6, 1, 3);
  EXPECT_EQ(e.cover, Family(6, 1, {{0}, {1}}));
  e = EmcExtremalFamilies(9, 2, 3);
  EXPECT_EQ(e.clique, SetFamily::Make(9, 2, SetFamily::Layer(5, 2).sets));
  EXPECT_EQ(MatchingNumber(e.clique), 2);
  e = EmcExtremalFamilies(7, 3, 2);
  for (Bundle s : e.cover.sets) EXPECT_TRUE(s.contains(0));
  EXPECT_EQ(BigInt(e.cover.size()), Binomial(6, 2));
}

TEST(EmcExtremalTest, SizesAndMatchingNumbers) {
  for (int n = 2; n <= 4; ++n) {
    for (int k = 1; k <= 3; ++k) {
      for (int m = k * n; m <= k * n + 3 && m <= 12; ++m) {
        const EmcBounds b = ComputeEmcBounds(m, k, n);
        const EmcExtremal e = EmcExtremalFamilies(m, k, n);
        EXPECT_EQ(BigInt(e.cover.size()), b.cover);
        EXPECT_EQ(BigInt(e.clique.size()), b.clique);
        EXPECT_EQ(MatchingNumber(e.cover), n - 1) << m << " " << k << " " << n;
        EXPECT_EQ(MatchingNumber(e.clique), (k * n - 1) / k);
      }
    }
  }
}

TEST(EmcFalsifyTest, Examples) {
  EmcFalsifyResult r = EmcFalsify(6, 1, 3, 200, 1);
  EXPECT_EQ(r.bound, 2);
  EXPECT_EQ(r.trials, 200u);
  EXPECT_FALSE(r.counterexample_trial.has_value());

  r = EmcFalsify(8, 2, 2, 200, 2);
  EXPECT_EQ(r.bound, 7);
  EXPECT_FALSE(r.counterexample_trial.has_value());

  r = EmcFalsify(9, 2, 3, 100, 3, {.rainbow = true});
  EXPECT_FALSE(r.counterexample_trial.has_value());

  const EmcExtremal e = EmcExtremalFamilies(8, 2, 2);
  EXPECT_LT(MatchingNumber(e.cover), 2);
  EXPECT_EQ(e.cover.size(), 7u);
}

TEST(EmcFalsifyTest, ThreadCountDoesNotMatter) {
  const EmcFalsifyResult a = EmcFalsify(7, 2, 3, 300, 9, {.rainbow = true, .threads = 1});
  const EmcFalsifyResult b = EmcFalsify(7, 2, 3, 300, 9, {.rainbow = true, .threads = 3});
  EXPECT_EQ(a.counterexample_trial, b.counterexample_trial);
  EXPECT_EQ(a.trials, b.trials);
}

TEST(BoundChainTest, Examples) {
  const Valuation prop3 = Valuation::Explicit01(6, {Bundle::Of({0}), Bundle::Of({1})});
  BoundChainReport r = BoundChainCheck(prop3, 3);
  EXPECT_EQ(r.k, 1);
  EXPECT_EQ(r.ones_k, 2);
  EXPECT_EQ(r.nu, 2);
  EXPECT_TRUE(r.applies);
  EXPECT_EQ(r.zeros_k, 4);
  EXPECT_TRUE(r.emc_step_ok);
  EXPECT_EQ(r.limit, Rational(4, 9));
  ASSERT_EQ(r.levels.size(), 2u);
  EXPECT_EQ(r.levels[1].ratio, Rational(4, 6));

  r = BoundChainCheck(Valuation::Constant(6, 1), 3);
  EXPECT_FALSE(r.applies);
  EXPECT_TRUE(r.levels.empty());

  r = BoundChainCheck(Valuation::Constant(6, 0), 3);
  EXPECT_TRUE(r.applies);
  EXPECT_EQ(r.zeros_k, 6);
  for (const ChainLevel& level : r.levels) {
    EXPECT_EQ(level.zeros, level.layer);
    EXPECT_TRUE(level.ok && level.ratio_ok);
  }

  EXPECT_THROW(BoundChainCheck(prop3, 4), InvalidArgument);
  EXPECT_THROW(BoundChainCheck(Valuation::Additive({1, 2, 0, 0, 0, 0}), 3),
               InvalidArgument);
}

// The chain is invariant under renaming goods, so one valuation per class
// covers every monotone 0/1 valuation on six goods.
TEST(BoundChainTest, NoViolationOnSixGoods) {
  std::uint64_t applied = 0;
  std::uint64_t classes = 0;
  ForEachDownSet(6, [&](FamilyBits zeros) {
    if (!IsCanonicalUnderGoodPermutations(zeros, 6)) return;
    ++classes;
    const BoundChainReport r = BoundChainCheck(ZeroFamilyValuation(zeros, 6), 3);
    ASSERT_FALSE(r.emc_violation);
    if (!r.applies) return;
    ++applied;
    for (const ChainLevel& level : r.levels) {
      ASSERT_TRUE(level.ok);
      ASSERT_TRUE(level.ratio_ok);
    }
  });
  EXPECT_EQ(classes, 16353u);
  EXPECT_GT(applied, 0u);
}

Rational NaiveBinomialBelow(int trials, int n, int t) {
  Rational sum = 0;
  const Rational p(1, n);
  for (int j = 0; j < t && j <= trials; ++j) {
    Rational term = Rational(Binomial(trials, j));
    for (int a = 0; a < j; ++a) term *= p;
    for (int a = j; a < trials; ++a) term *= 1 - p;
    sum += term;
  }
  return sum;
}

TEST(BinomialQnTest, Examples) {
  EXPECT_EQ(BinomialBelow(2, 3, 1), Rational(4, 9));
  EXPECT_EQ(BinomialBelow(1, 2, 1), Rational(1, 2));
  const BinomialQnResult r = BinomialQn(3, 1);
  EXPECT_EQ(r.estimate, Rational(4, 9));
  EXPECT_EQ(r.conjecture_gap, 0);
  EXPECT_NEAR(r.bound.convert_to<double>(), 1 / std::exp(1.0) - 1 / (2 * std::sqrt(6.0)),
              1e-15);
  EXPECT_NEAR(r.bound.convert_to<double>(), 0.163755, 1e-6);
  EXPECT_EQ(r.bound_holds, Tri::kTrue);
  EXPECT_EQ(BinomialQn(2, 1).estimate, Rational(1, 2));
}

TEST(BinomialQnTest, MatchesNaive) {
  for (int n = 2; n <= 5; ++n) {
    for (int trials = 0; trials <= 12; ++trials) {
      for (int t = 0; t <= trials + 1; ++t) {
        ASSERT_EQ(BinomialBelow(trials, n, t), NaiveBinomialBelow(trials, n, t));
      }
    }
  }
}

TEST(BinomialQnTest, AboveBound) {
  for (int n = 2; n <= 16; ++n) {
    const BinomialQnResult r = BinomialQn(n, 40);
    EXPECT_EQ(r.bound_holds, Tri::kTrue) << n;
    EXPECT_LE(r.conjecture_gap, 0);
    EXPECT_GE(r.argmin, 1);
  }
}

TEST(PoissonTest, Examples) {
  EXPECT_NEAR(PoissonBelowMean(1).convert_to<double>(), 2 / std::exp(1.0), 1e-15);
  EXPECT_NEAR(PoissonBelowMean(Rational(1, 1000000)).convert_to<double>(), 1, 1e-5);
  EXPECT_NEAR(PoissonBelowMean(10).convert_to<double>(), 0.583, 1e-3);
  EXPECT_THROW(PoissonBelowMean(0), InvalidArgument);
  for (int num = 1; num <= 200; ++num) {
    EXPECT_EQ(PoissonAboveInverseE(Rational(num, 4)), Tri::kTrue) << num;
  }
}

TEST(Lemma9Test, Examples) {
  EXPECT_TRUE(Lemma9Check(2, 1));
  EXPECT_EQ(Binomial(4, 1) - Binomial(3, 1), Binomial(1, 1));
  EXPECT_TRUE(Lemma9Check(3, 2));
  EXPECT_EQ(Binomial(9, 2) - Binomial(7, 2), 15);
  EXPECT_THROW(Lemma9Check(1, 1), InvalidArgument);
  const Lemma9SweepResult sweep = Lemma9Sweep(20, 50);
  EXPECT_TRUE(sweep.ok());
  EXPECT_EQ(sweep.checked, 19u * 50u);
}

}  // namespace
}  // namespace qfair
