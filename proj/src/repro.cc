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

#include "qfair/repro.h"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "qfair/allocate.h"
#include "qfair/boolean_lattice.h"
#include "qfair/errors.h"
#include "qfair/extremal.h"
#include "qfair/lab.h"
#include "qfair/quantile.h"
#include "qfair/veto.h"

namespace qfair {
namespace {

std::mt19937_64 Rng(const ReproOptions& options, std::uint64_t salt) {
  return std::mt19937_64(options.seed * 0x9E3779B97F4A7C15ULL + salt);
}

int Uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Rational Pow(const Rational& base, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

std::vector<Rational> RandomWeights(std::mt19937_64& rng, int m, int style) {
  std::vector<Rational> w(m);
  for (int j = 0; j < m; ++j) {
    switch (style % 4) {
      case 0: w[j] = Uniform(rng, 0, 10); break;
      case 1: w[j] = Uniform(rng, 1, 1000000); break;
      case 2: w[j] = Rational(BigInt(1) << Uniform(rng, 0, 20)); break;
      default: w[j] = j == 0 ? Rational(1000 * m) : Rational(Uniform(rng, 0, 3)); break;
    }
  }
  return w;
}

Valuation RandomMonotoneTable(std::mt19937_64& rng, int m) {
  const std::uint64_t size = std::uint64_t{1} << m;
  std::vector<Rational> values(size);
  std::vector<std::uint64_t> order(size);
  for (std::uint64_t s = 0; s < size; ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(),
                   [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });
  for (std::uint64_t s : order) {
    Rational base = 0;
    for (int j = 0; j < m; ++j) {
      if ((s >> j) & 1) base = std::max(base, values[s & ~(std::uint64_t{1} << j)]);
    }
    values[s] = base + Uniform(rng, 0, 3);
  }
  return Valuation::Table(m, std::move(values));
}

Json Prop3(const ReproOptions& options, bool& pass) {
  Json out;
  const Instance inst = NamedInstance("prop3", {.n = 3, .m = 6});
  const MaximinResult r = MaximinSatisfactionAllocation(inst, {.threads = options.threads});
  PutRational(out, "q_star", r.q_star);
  out["allocation"] = AllocationToJson(r.allocation);
  pass = r.q_star == Rational(4, 9);
  return out;
}

Json Corollary1(const ReproOptions&, bool& pass) {
  Json out = Json::array();
  pass = true;
  for (int m = 1; m <= 4; ++m) {
    const Rational half(1, 2);
    const Rational above = half + Rational(BigInt(1), Power(2, m));
    std::vector<std::vector<bool>> fair_half, fair_above;
    const std::vector<FamilyBits> families = EnumerateDownSets(m);
    for (FamilyBits f : families) {
      const SatisfactionTable t = SatisfactionTable::Build(ZeroFamilyValuation(f, m), 2);
      fair_half.push_back(t.FairMask(half));
      fair_above.push_back(t.FairMask(above));
    }
    const std::uint64_t full = FullMask(m);
    auto feasible = [&](const std::vector<bool>& a, const std::vector<bool>& b) {
      for (std::uint64_t s = 0; s <= full; ++s) {
        if (a[s] && b[full ^ s]) return true;
      }
      return false;
    };
    std::uint64_t profiles = 0, infeasible_half = 0, infeasible_above = 0;
    for (std::size_t a = 0; a < families.size(); ++a) {
      for (std::size_t b = 0; b < families.size(); ++b) {
        ++profiles;
        if (!feasible(fair_half[a], fair_half[b])) ++infeasible_half;
        if (!feasible(fair_above[a], fair_above[b])) ++infeasible_above;
      }
    }
    Json row;
    row["m"] = m;
    row["profiles"] = profiles;
    row["infeasible_at_half"] = infeasible_half;
    PutRational(row, "above", above);
    row["infeasible_above"] = infeasible_above;
    out.push_back(row);
    pass = pass && infeasible_half == 0 && infeasible_above > 0;
  }
  Json wrapped;
  wrapped["n"] = 2;
  std::uint64_t profiles = 0, infeasible_half = 0;
  std::uint64_t above_min = std::numeric_limits<std::uint64_t>::max();
  for (const Json& row : out) {
    profiles += row["profiles"].get<std::uint64_t>();
    infeasible_half += row["infeasible_at_half"].get<std::uint64_t>();
    above_min = std::min(above_min, row["infeasible_above"].get<std::uint64_t>());
  }
  wrapped["profiles"] = profiles;
  wrapped["infeasible_at_half"] = infeasible_half;
  wrapped["min_infeasible_above_per_m"] = above_min;
  wrapped["sweep"] = out;
  return wrapped;
}

bool CounterexampleHolds(const SearchResult& r) {
  if (!r.counterexample) return false;
  const Instance inst = ProfileInstance(*r.counterexample, r.m);
  if (!Validate(inst).ok()) return false;
  for (const Valuation& v : inst.valuations) {
    if (CountZeroAllocations(v, r.n) > r.budget) return false;
  }
  const Rational q(r.budget + 1, Power(r.n, r.m));
  return !ExhaustiveFairAllocation(inst, q).allocation.has_value();
}

Json ThresholdSearch(const ReproOptions& options, bool& pass) {
  Json out;
  const SearchResult at = SearchCounterexample({.n = 3, .m = 4, .threads = options.threads});
  const SearchResult above = SearchCounterexample(
      {.n = 3, .m = 4, .budget = at.budget + 1, .threads = options.threads});
  out["budget"] = at.budget.str();
  out["exhausted"] = !at.counterexample.has_value();
  out["candidate_families"] = at.candidate_families;
  out["nodes"] = at.nodes;
  out["witness_budget"] = above.budget.str();
  const bool witness_ok = CounterexampleHolds(above);
  out["witness_verified"] = witness_ok;
  pass = !at.counterexample && witness_ok;

  Json exports = Json::array();
  std::vector<std::pair<int, int>> sizes;
  for (int m = 4; m <= 9; ++m) sizes.emplace_back(3, m);
  for (int n = 4; n <= 5; ++n) {
    for (int m = n - 1; m <= 8; ++m) sizes.emplace_back(n, m);
  }
  for (auto [n, m] : sizes) {
    std::stringstream text;
    ExportIp({.n = n, .m = m}, text);
    const LpCounts parsed = ParseLp(text).Counts();
    const LpCounts closed{n * (std::uint64_t{1} << m),
                          static_cast<std::uint64_t>(n) * m * (std::uint64_t{1} << (m - 1)),
                          static_cast<std::uint64_t>(n), PowerU64(n, m)};
    const bool ok = parsed == closed && ExpectedLpCounts(n, m) == closed;
    Json row;
    row["n"] = n;
    row["m"] = m;
    row["variables"] = parsed.variables;
    row["monotonicity_rows"] = parsed.monotonicity_rows;
    row["threshold_rows"] = parsed.threshold_rows;
    row["allocation_rows"] = parsed.allocation_rows;
    row["matches_closed_form"] = ok;
    exports.push_back(row);
    pass = pass && ok;
  }
  out["exports"] = exports;
  return out;
}

Json RoundRobinAdditive(const ReproOptions& options, bool& pass) {
  std::mt19937_64 rng = Rng(options, 3);
  const int kInstances = 1000;
  Rational worst_ratio = -1;
  std::uint64_t failures = 0;
  for (int t = 0; t < kInstances; ++t) {
    const int n = 2 + t % 3;
    const int m = 1 + t % 14;
    Instance inst;
    inst.n = n;
    inst.m = m;
    for (int i = 0; i < n; ++i) {
      inst.valuations.push_back(Valuation::Additive(RandomWeights(rng, m, t / 14 + i)));
    }
    const Allocation a = RoundRobin(inst);
    const Rational step = 1 - Rational(1, n);
    for (int i = 0; i < n; ++i) {
      const Rational s = Satisfaction(inst.valuations[i], n, a[i]);
      const Rational bound = Rational(7, 50) * Pow(step, i + 1);
      if (s < bound) ++failures;
      const Rational ratio = s / bound;
      if (worst_ratio < 0 || ratio < worst_ratio) worst_ratio = ratio;
    }
    const Valuation& first = inst.valuations[0];
    if (first.Evaluate(a[0]) * n < first.Evaluate(Bundle::Full(m))) ++failures;
  }
  Json out;
  out["instances"] = kInstances;
  out["failures"] = failures;
  PutRational(out, "min_satisfaction_over_bound", worst_ratio);
  pass = failures == 0;
  return out;
}

Json RoundRobinUnitDemand(const ReproOptions& options, bool& pass) {
  std::mt19937_64 rng = Rng(options, 4);
  const int kInstances = 1000;
  Rational worst_ratio = -1;
  std::uint64_t failures = 0;
  for (int t = 0; t < kInstances; ++t) {
    const int n = 2 + t % 4;
    const int m = 1 + t % 14;
    Instance inst;
    inst.n = n;
    inst.m = m;
    for (int i = 0; i < n; ++i) {
      std::vector<Rational> w(m);
      const int top = t % 2 == 0 ? 3 : 100;
      for (Rational& x : w) x = Uniform(rng, 0, top);
      inst.valuations.push_back(Valuation::UnitDemand(std::move(w)));
    }
    const Allocation a = RoundRobin(inst);
    const Rational step = 1 - Rational(1, n);
    for (int i = 0; i < n; ++i) {
      const Rational s = Satisfaction(inst.valuations[i], n, a[i]);
      const Rational bound = Pow(step, i);
      if (s < bound) ++failures;
      const Rational ratio = s / bound;
      if (worst_ratio < 0 || ratio < worst_ratio) worst_ratio = ratio;
    }
  }
  Json out;
  out["instances"] = kInstances;
  out["failures"] = failures;
  PutRational(out, "min_satisfaction_over_bound", worst_ratio);
  pass = failures == 0;
  return out;
}

std::vector<Matroid> MatroidGrid() {
  std::vector<Matroid> grid;
  for (int g = 1; g <= 10; ++g) {
    for (int r = 0; r <= g; ++r) grid.push_back(Matroid::Uniform(g, r));
  }
  // Consecutive blocks, at most three, with capacity 1 or 2.
  for (int g = 1; g <= 10; ++g) {
    for (int c1 = 1; c1 <= g; ++c1) {
      for (int c2 = 0; c1 + c2 <= g; ++c2) {
        const int c3 = g - c1 - c2;
        if (c2 == 0 && c3 > 0) continue;
        std::vector<int> sizes = {c1};
        if (c2 > 0) sizes.push_back(c2);
        if (c3 > 0) sizes.push_back(c3);
        const int blocks = static_cast<int>(sizes.size());
        for (int caps = 0; caps < (1 << blocks); ++caps) {
          std::vector<Bundle> parts;
          std::vector<int> capacities;
          int start = 0;
          bool duplicate = false;
          for (int b = 0; b < blocks; ++b) {
            std::uint64_t mask = 0;
            for (int j = 0; j < sizes[b]; ++j) mask |= std::uint64_t{1} << (start + j);
            start += sizes[b];
            parts.push_back(Bundle(mask));
            const int cap = 1 + ((caps >> b) & 1);
            if (cap > sizes[b]) duplicate = true;
            capacities.push_back(cap);
          }
          if (!duplicate) grid.push_back(Matroid::Partition(g, parts, capacities));
        }
      }
    }
  }
  // Every nonempty subgraph of K5.
  std::vector<std::pair<int, int>> k5;
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) k5.emplace_back(a, b);
  }
  for (int mask = 1; mask < (1 << 10); ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (int e = 0; e < 10; ++e) {
      if ((mask >> e) & 1) edges.push_back(k5[e]);
    }
    grid.push_back(Matroid::Graphic(5, std::move(edges)));
  }
  grid.push_back(Matroid::Graphic(3, {{0, 0}, {0, 1}, {1, 2}, {2, 0}}));
  grid.push_back(Matroid::Graphic(2, {{0, 1}, {0, 1}, {1, 1}, {0, 1}}));
  return grid;
}

Json MatroidRankCheck(const ReproOptions&, bool& pass) {
  pass = true;
  const std::vector<Matroid> grid = MatroidGrid();
  std::uint64_t checks = 0, mms_mismatch = 0, quantile_failures = 0;
  HighPrecision worst_margin = 1;
  for (const Matroid& mat : grid) {
    const Valuation v = Valuation::MatroidRank(mat);
    for (int n = 2; n <= 3; ++n) {
      ++checks;
      const MmsResult fast = MatroidMms(mat, n);
      if (fast.value != MmsValue(v, n).value) ++mms_mismatch;
      const Rational q = MmsQuantile(v, n, {.matroid_fast = true});
      const HighPrecision bound =
          exp(HighPrecision(-1)) - 1 / (2 * sqrt(HighPrecision(n * (n - 1))));
      const HighPrecision margin = ToHighPrecision(q) - bound;
      if (margin < -HighPrecision("1e-12")) ++quantile_failures;
      worst_margin = std::min(worst_margin, margin);
    }
  }
  std::uint64_t tight_checks = 0, tight_failures = 0;
  for (int n = 2; n <= 4; ++n) {
    for (int t = 1; t * n - 1 <= 12; ++t) {
      ++tight_checks;
      const Valuation v = Valuation::MatroidRank(Matroid::Uniform(t * n - 1, t));
      if (MmsQuantile(v, n) != BinomialBelow(t * n - 1, n, t)) ++tight_failures;
    }
  }
  Json out;
  out["matroids"] = grid.size();
  out["checks"] = checks;
  out["mms_mismatches"] = mms_mismatch;
  out["quantile_failures"] = quantile_failures;
  out["min_quantile_margin_approx"] = worst_margin.convert_to<double>();
  out["tight_checks"] = tight_checks;
  out["tight_failures"] = tight_failures;
  pass = mms_mismatch == 0 && quantile_failures == 0 && tight_failures == 0;
  return out;
}

Json Lemma4(const ReproOptions& options, bool& pass) {
  std::mt19937_64 rng = Rng(options, 6);
  const int kVectors = 10000;
  const std::vector<Rational> ps = {Rational(1, 2), Rational(1, 3), Rational(1, 4),
                                    Rational(1, 5)};
  std::uint64_t checks = 0, failures = 0;
  Rational worst = 2;
  for (int t = 0; t < kVectors; ++t) {
    const int m = 1 + t % 20;
    const std::vector<Rational> w = RandomWeights(rng, m, t / 20);
    for (const Rational& p : ps) {
      ++checks;
      const BernoulliCheck c = BernoulliDeviationCheck(w, p);
      if (!c.ok) ++failures;
      worst = std::min(worst, Rational(c.probability - c.bound));
    }
  }
  Json out;
  out["vectors"] = kVectors;
  out["checks"] = checks;
  out["failures"] = failures;
  PutRational(out, "min_margin", worst);
  pass = failures == 0;
  return out;
}

Json Equivalence(const ReproOptions& options, bool& pass) {
  pass = true;
  Json out;
  Json exhaustive = Json::array();
  for (int m = 1; m <= 4; ++m) {
    const EquivalenceReport r = EquivalenceExhaustivePairs(m);
    Json row;
    row["m"] = m;
    row["profiles"] = r.profiles;
    row["levels"] = r.levels;
    row["checks"] = r.checks;
    row["failures"] = r.failure_count;
    exhaustive.push_back(row);
    pass = pass && r.ok() && r.profiles > 0;
  }
  std::uint64_t exhaustive_profiles = 0;
  for (const Json& row : exhaustive) exhaustive_profiles += row["profiles"].get<std::uint64_t>();
  out["exhaustive_profiles"] = exhaustive_profiles;
  out["exhaustive_n2"] = exhaustive;
  Json random = Json::array();
  std::uint64_t profiles = 0;
  for (int m = 1; m <= 6; ++m) {
    const EquivalenceReport r = EquivalenceSuite(3, m, 170, options.seed * 31 + m);
    Json row;
    row["m"] = m;
    row["profiles"] = r.profiles;
    row["checks"] = r.checks;
    row["failures"] = r.failure_count;
    random.push_back(row);
    profiles += r.profiles;
    pass = pass && r.ok();
  }
  out["random_n3"] = random;
  out["random_profiles"] = profiles;
  pass = pass && profiles >= 1000;
  return out;
}

Json Identical(const ReproOptions& options, bool& pass) {
  std::uint64_t checks = 0, failures = 0;
  const SearchOptions search{.threads = options.threads};
  auto check = [&](const Valuation& v, int n) {
    ++checks;
    const Instance inst = Instance::Identical(n, v);
    const Rational q_star = MaximinSatisfactionAllocation(inst, search).q_star;
    if (MmsQuantile(v, n) != q_star) ++failures;
  };
  for (int n = 2; n <= 3; ++n) {
    for (int m = 1; m <= 5; ++m) {
      for (FamilyBits f : EnumerateDownSets(m)) check(ZeroFamilyValuation(f, m), n);
    }
    ForEachDownSet(6, [&](FamilyBits f) {
      if (IsCanonicalUnderGoodPermutations(f, 6)) check(ZeroFamilyValuation(f, 6), n);
    });
  }
  const std::uint64_t sweep = checks;
  std::mt19937_64 rng = Rng(options, 8);
  for (int t = 0; t < 400; ++t) check(RandomMonotoneTable(rng, 1 + t % 8), 2 + t % 2);
  Json out;
  out["zero_one_checks"] = sweep;
  out["table_checks"] = checks - sweep;
  out["failures"] = failures;
  pass = failures == 0;
  return out;
}

Json MmsGap(const ReproOptions&, bool& pass) {
  const Instance inst = NamedInstance("mms_gap");
  const Rational a = MmsValue(inst.valuations[0], 2).value;
  const Rational b = MmsValue(inst.valuations[1], 2).value;
  std::uint64_t someone_zero = 0;
  const std::uint64_t total = PowerU64(2, inst.m);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const Allocation alloc = AllocationAtIndex(idx, 2, inst.m);
    if (inst.valuations[0].Evaluate(alloc[0]) == 0 || inst.valuations[1].Evaluate(alloc[1]) == 0) {
      ++someone_zero;
    }
  }
  Json out;
  PutRational(out, "mms_agent1", a);
  PutRational(out, "mms_agent2", b);
  out["allocations"] = total;
  out["allocations_with_a_zero"] = someone_zero;
  pass = a == 1 && b == 1 && someone_zero == total;
  return out;
}

Json Lemma9(const ReproOptions&, bool& pass) {
  const Lemma9SweepResult r = Lemma9Sweep(20, 50);
  Json out;
  out["checked"] = r.checked;
  out["failures"] = r.failures.size();
  out["equality_at_k1"] = r.equality_at_k1;
  out["monotone_in_k"] = r.monotone_in_k;
  pass = r.ok() && r.checked == 19 * 50;
  return out;
}

Json Extremal(const ReproOptions& options, bool& pass) {
  pass = true;
  Json out;
  std::mt19937_64 rng = Rng(options, 11);
  const int kFamilies = 10000;
  std::uint64_t nonvacuous = 0, kk_failures = 0;
  for (int t = 0; t < kFamilies; ++t) {
    const int m = 1 + t % 12;
    const int k = Uniform(rng, 1, m);
    const int mp = Uniform(rng, k, m);
    const int kp = Uniform(rng, 0, k);
    std::vector<Bundle> layer = SetFamily::Layer(m, k).sets;
    const std::size_t threshold = Binomial(mp, k).convert_to<std::size_t>();
    const std::size_t lo = t % 2 == 0 ? threshold : 1;
    const std::size_t size = lo + rng() % (layer.size() - lo + 1);
    std::shuffle(layer.begin(), layer.end(), rng);
    layer.resize(size);
    const SetFamily f = SetFamily::Make(m, k, std::move(layer));
    if (size >= threshold) ++nonvacuous;
    if (!KruskalKatonaCheck(f, mp, kp)) ++kk_failures;
  }
  out["kk_families"] = kFamilies;
  out["kk_nonvacuous"] = nonvacuous;
  out["kk_failures"] = kk_failures;
  pass = pass && kk_failures == 0;

  std::uint64_t extremal_checks = 0, extremal_failures = 0;
  for (int n = 2; n <= 4; ++n) {
    for (int k = 1; k <= 3; ++k) {
      for (int m = k * n; m <= k * n + 3; ++m) {
        ++extremal_checks;
        const EmcBounds b = ComputeEmcBounds(m, k, n);
        const EmcExtremal e = EmcExtremalFamilies(m, k, n);
        if (BigInt(e.cover.size()) != b.cover || BigInt(e.clique.size()) != b.clique ||
            MatchingNumber(e.cover) != n - 1 || MatchingNumber(e.clique) != n - 1) {
          ++extremal_failures;
        }
      }
    }
  }
  out["extremal_checks"] = extremal_checks;
  out["extremal_failures"] = extremal_failures;
  pass = pass && extremal_failures == 0;

  Json runs = Json::array();
  std::uint64_t trials[2] = {0, 0};
  for (int k = 1; k <= 2; ++k) {
    int m_max = k;
    while (m_max < kMaxGoods && Binomial(m_max + 1, k) <= 1000) ++m_max;
    for (int n = 2; n <= 3; ++n) {
      for (int m : {k * n, k * n + 1, k * n + 3, m_max}) {
        for (int rainbow = 0; rainbow <= 1; ++rainbow) {
          const EmcFalsifyResult r = EmcFalsify(
              m, k, n, 1000, options.seed * 131 + m * 7 + n * 3 + k,
              {.rainbow = rainbow == 1, .threads = options.threads});
          trials[rainbow] += r.trials;
          Json row;
          row["m"] = m;
          row["k"] = k;
          row["n"] = n;
          row["rainbow"] = rainbow == 1;
          row["trials"] = r.trials;
          row["counterexample"] = r.counterexample_trial.has_value();
          runs.push_back(row);
          pass = pass && !r.counterexample_trial;
        }
      }
    }
  }
  out["falsify_runs"] = runs;
  out["falsify_trials"] = trials[0];
  out["rainbow_trials"] = trials[1];
  pass = pass && trials[0] >= 10000 && trials[1] >= 10000;
  return out;
}

Json Qn(const ReproOptions&, bool& pass) {
  pass = true;
  Json rows = Json::array();
  HighPrecision worst = 1;
  for (int n = 2; n <= 64; ++n) {
    const BinomialQnResult r = BinomialQn(n, 200, HighPrecision("1e-12"));
    Json row;
    row["n"] = n;
    row["argmin"] = r.argmin;
    row["estimate_approx"] = ToDouble(r.estimate);
    row["conjecture_gap_approx"] = ToDouble(r.conjecture_gap);
    row["bound_holds"] = TriName(r.bound_holds);
    rows.push_back(row);
    worst = std::min(worst, ToHighPrecision(r.estimate) - r.bound);
    pass = pass && r.bound_holds == Tri::kTrue;
  }
  Json out;
  out["t_max"] = 200;
  out["min_margin_approx"] = worst.convert_to<double>();
  out["per_n"] = rows;
  return out;
}

Json Chores(const ReproOptions& options, bool& pass) {
  pass = true;
  Json rows = Json::array();
  for (int n = 1; n <= 6; ++n) {
    const Instance inst = NamedInstance("single_chore", {.n = n});
    const Rational q_star =
        MaximinSatisfactionAllocation(inst, {.threads = options.threads}).q_star;
    bool above_infeasible = true;
    if (n > 1) {
      above_infeasible =
          !ExhaustiveFairAllocation(inst, Rational(1, n) + Rational(1, 2 * n)).allocation;
    }
    Json row;
    row["n"] = n;
    PutRational(row, "q_star", q_star);
    row["above_infeasible"] = above_infeasible;
    rows.push_back(row);
    pass = pass && q_star == Rational(1, n) && above_infeasible;
  }
  Json out;
  out["per_n"] = rows;
  return out;
}

Json EqualSize(const ReproOptions& options, bool& pass) {
  const EqualSizeGapReport r =
      EqualSizeGap(3, 6, Rational(1, 100), 0, {.threads = options.threads});
  Json out;
  out["n"] = 3;
  out["m"] = 6;
  PutRational(out, "epsilon", r.epsilon);
  PutRational(out, "equal_size_best", r.equal_size_best);
  PutRational(out, "unconstrained", r.unconstrained);
  out["unconstrained_allocation"] = AllocationToJson(r.unconstrained_witness);
  pass = r.gap();
  return out;
}

using Runner = Json (*)(const ReproOptions&, bool&);

struct Entry {
  ReproTarget target;
  Runner run;
};

const std::vector<Entry>& Entries() {
  static const std::vector<Entry> entries = {
      {{"prop3", "critical quantile 4/9 on the three-agent instance"}, Prop3},
      {{"corollary1", "two agents: 1/2 feasible, 1/2 + 1/2^m not (m <= 4)"}, Corollary1},
      {{"threshold_search", "exhaustive search at n=3, m=4 and LP export counts"},
       ThresholdSearch},
      {{"round_robin", "round robin on additive valuations"}, RoundRobinAdditive},
      {{"unit_demand", "round robin on unit-demand valuations"}, RoundRobinUnitDemand},
      {{"matroid_rank", "matroid maximin share and its quantile"}, MatroidRankCheck},
      {{"lemma4", "Bernoulli sums fall below their mean"}, Lemma4},
      {{"equivalence", "fair allocations, veto lists and 0/1 profiles agree"}, Equivalence},
      {{"identical", "identical valuations: critical quantile equals MMS quantile"},
       Identical},
      {{"mms_gap", "maximin share infeasible for two agents on four goods"}, MmsGap},
      {{"lemma9", "binomial inequality for n <= 20, k <= 50"}, Lemma9},
      {{"extremal", "shadows, matching bounds and falsification search"}, Extremal},
      {{"qn", "binomial estimate of q_n for n <= 64"}, Qn},
      {{"chores", "one chore: critical quantile 1/n"}, Chores},
      {{"equal_size_gap", "equal-size bundles lose to unequal ones"}, EqualSize},
  };
  return entries;
}

}  // namespace

const std::vector<ReproTarget>& ReproTargets() {
  static const std::vector<ReproTarget> targets = [] {
    std::vector<ReproTarget> out;
    for (const Entry& e : Entries()) out.push_back(e.target);
    return out;
  }();
  return targets;
}

ReproReport RunRepro(const std::string& target, const ReproOptions& options) {
  for (const Entry& e : Entries()) {
    if (e.target.name != target) continue;
    ReproReport report;
    report.target = e.target.name;
    report.title = e.target.title;
    report.measured = e.run(options, report.pass);
    return report;
  }
  throw InvalidArgument("unknown repro target '" + target + "'");
}

std::string ReproLine(const ReproReport& report) {
  std::string line = (report.pass ? "PASS " : "FAIL ") + report.target + ": " + report.title;
  for (const auto& [key, value] : report.measured.items()) {
    if (value.is_structured()) continue;
    line += " " + key + "=" + (value.is_string() ? value.get<std::string>() : value.dump());
  }
  return line;
}

}  // namespace qfair
