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

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "qfair/errors.h"

namespace qfair {
namespace {

int LeastElement(Bundle b) { return b.empty() ? -1 : std::countr_zero(b.mask()); }

void CheckBudget(std::uint64_t count, std::uint64_t budget, const char* what) {
  if (count > budget) {
    throw BudgetExceeded(std::string(what) + " has " + std::to_string(count) +
                         " sets, budget " + std::to_string(budget));
  }
}

// Calls fn on every size-r subset of `mask`.
void ForEachSubsetOfSize(std::uint64_t mask, int r,
                         const std::function<void(std::uint64_t)>& fn) {
  std::vector<std::uint64_t> bits;
  for (std::uint64_t rest = mask; rest; rest &= rest - 1) bits.push_back(rest & -rest);
  const int size = static_cast<int>(bits.size());
  if (r < 0 || r > size) return;
  std::vector<int> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::uint64_t s = 0;
    for (int i : idx) s |= bits[i];
    fn(s);
    int i = r - 1;
    while (i >= 0 && idx[i] == size - r + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

class PackingSearch {
 public:
  PackingSearch(const SetFamily& family, int target, std::uint64_t node_budget)
      : family_(family), target_(target), node_budget_(node_budget) {
    const int m = family.m;
    group_begin_.assign(m + 1, family.sets.size());
    for (std::size_t i = family.sets.size(); i-- > 0;) {
      group_begin_[LeastElement(family.sets[i])] = i;
    }
    for (int e = m - 1; e >= 0; --e) {
      group_begin_[e] = std::min(group_begin_[e], group_begin_[e + 1]);
    }
  }

  MatchingResult Run() {
    Greedy();
    if (!Done()) Recurse(0);
    if (Done()) best_.resize(target_);
    MatchingResult out;
    out.matching = best_;
    out.nodes = nodes_;
    return out;
  }

 private:
  bool Done() const {
    return target_ > 0 && static_cast<int>(best_.size()) >= target_;
  }

  void Greedy() {
    std::uint64_t used = 0;
    for (Bundle s : family_.sets) {
      if ((s.mask() & used) == 0) {
        best_.push_back(s);
        used |= s.mask();
      }
    }
  }

  void Recurse(std::uint64_t blocked) {
    if (++nodes_ > node_budget_) {
      throw BudgetExceeded("matching search exceeded " +
                           std::to_string(node_budget_) + " nodes");
    }
    if (current_.size() > best_.size()) best_ = current_;
    if (Done()) return;
    std::uint64_t avail = 0;
    for (Bundle s : family_.sets) {
      if ((s.mask() & blocked) == 0) avail |= s.mask();
    }
    const std::size_t bound =
        current_.size() + std::popcount(avail) / static_cast<unsigned>(family_.k);
    if (avail == 0 || bound <= best_.size()) return;
    const int e = std::countr_zero(avail);
    for (std::size_t i = group_begin_[e]; i < group_begin_[e + 1]; ++i) {
      const Bundle s = family_.sets[i];
      if (s.mask() & blocked) continue;
      current_.push_back(s);
      Recurse(blocked | s.mask());
      current_.pop_back();
      if (Done()) return;
    }
    Recurse(blocked | (std::uint64_t{1} << e));
  }

  const SetFamily& family_;
  const int target_;
  const std::uint64_t node_budget_;
  // Sets with least element e occupy [group_begin_[e], group_begin_[e + 1]).
  std::vector<std::size_t> group_begin_;
  std::vector<Bundle> current_;
  std::vector<Bundle> best_;
  std::uint64_t nodes_ = 0;
};

class RainbowSearch {
 public:
  RainbowSearch(const std::vector<SetFamily>& families, std::uint64_t node_budget)
      : families_(families), node_budget_(node_budget), failed_(families.size()) {}

  bool Run(std::vector<Bundle>& out) {
    out.clear();
    return Recurse(0, 0, out);
  }

 private:
  bool Recurse(std::size_t agent, std::uint64_t blocked, std::vector<Bundle>& out) {
    if (agent == families_.size()) return true;
    if (failed_[agent].count(blocked)) return false;
    if (++nodes_ > node_budget_) {
      throw BudgetExceeded("rainbow matching search exceeded " +
                           std::to_string(node_budget_) + " nodes");
    }
    for (Bundle s : families_[agent].sets) {
      if (s.mask() & blocked) continue;
      out.push_back(s);
      if (Recurse(agent + 1, blocked | s.mask(), out)) return true;
      out.pop_back();
    }
    failed_[agent].insert(blocked);
    return false;
  }

  const std::vector<SetFamily>& families_;
  const std::uint64_t node_budget_;
  std::vector<std::unordered_set<std::uint64_t>> failed_;
  std::uint64_t nodes_ = 0;
};

void CheckEmcParameters(int m, int k, int n) {
  if (n < 1 || k < 0 || m < 0 || m > kMaxGoods) {
    throw InvalidArgument("need n >= 1, k >= 0 and 0 <= m <= 63");
  }
  if (static_cast<std::int64_t>(m) < static_cast<std::int64_t>(k) * n) {
    throw InvalidArgument("need m >= kn, got m=" + std::to_string(m) +
                          " k=" + std::to_string(k) + " n=" + std::to_string(n));
  }
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// (1 - 1/n)^(n-1).
Rational LimitRatio(int n) {
  Rational r = 1;
  for (int i = 1; i < n; ++i) r *= Rational(n - 1, n);
  return r;
}

// C(kn - 1, k) / C(kn + n, k) + C(kn + 1, k) / C(kn + n, k).
Rational Lemma9RatioSum(int n, int k) {
  const std::int64_t kn = static_cast<std::int64_t>(k) * n;
  return Rational(Binomial(kn - 1, k) + Binomial(kn + 1, k), Binomial(kn + n, k));
}

HighPrecision InverseE() { return exp(HighPrecision(-1)); }

}  // namespace

bool FamilyOrder(Bundle a, Bundle b) {
  const int la = LeastElement(a);
  const int lb = LeastElement(b);
  if (la != lb) return la < lb;
  return a.mask() < b.mask();
}

SetFamily SetFamily::Make(int m, int k, std::vector<Bundle> sets) {
  if (m < 0 || m > kMaxGoods || k < 0 || k > m) {
    throw InvalidArgument("set family needs 0 <= k <= m <= 63");
  }
  for (Bundle s : sets) {
    if (s.size() != k || !s.FitsIn(m)) {
      throw InvalidArgument("set " + s.ToString() + " is not a " +
                            std::to_string(k) + "-subset of [" +
                            std::to_string(m) + "]");
    }
  }
  std::sort(sets.begin(), sets.end(), FamilyOrder);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  SetFamily out;
  out.m = m;
  out.k = k;
  out.sets = std::move(sets);
  return out;
}

SetFamily SetFamily::Layer(int m, int k, std::uint64_t budget) {
  if (m < 0 || m > kMaxGoods || k < 0 || k > m) {
    throw InvalidArgument("layer needs 0 <= k <= m <= 63");
  }
  const BigInt count = Binomial(m, k);
  if (count > budget) {
    throw BudgetExceeded("layer C(" + std::to_string(m) + "," + std::to_string(k) +
                         ") exceeds budget " + std::to_string(budget));
  }
  std::vector<Bundle> sets;
  ForEachSubsetOfSize(FullMask(m), k, [&](std::uint64_t s) { sets.push_back(Bundle(s)); });
  return Make(m, k, std::move(sets));
}

bool SetFamily::Contains(Bundle b) const {
  return std::binary_search(sets.begin(), sets.end(), b, FamilyOrder);
}

MatchingResult MaximumMatching(const SetFamily& family, int target,
                               const MatchingOptions& options) {
  CheckBudget(family.size(), options.family_budget, "family");
  if (family.k == 0) {
    MatchingResult out;
    out.matching = family.sets;
    return out;
  }
  return PackingSearch(family, target, options.node_budget).Run();
}

int MatchingNumber(const SetFamily& family, const MatchingOptions& options) {
  return static_cast<int>(MaximumMatching(family, 0, options).matching.size());
}

std::optional<std::vector<Bundle>> RainbowMatching(
    const std::vector<SetFamily>& families, const MatchingOptions& options) {
  for (const SetFamily& f : families) {
    CheckBudget(f.size(), options.family_budget, "family");
    if (f.m != families[0].m) throw InvalidArgument("families disagree on m");
  }
  std::vector<Bundle> out;
  if (RainbowSearch(families, options.node_budget).Run(out)) return out;
  return std::nullopt;
}

SetFamily Shadow(const SetFamily& family, int k_prime) {
  if (k_prime < 0 || k_prime > family.k) {
    throw InvalidArgument("shadow level " + std::to_string(k_prime) +
                          " outside [0, " + std::to_string(family.k) + "]");
  }
  std::unordered_set<std::uint64_t> seen;
  for (Bundle s : family.sets) {
    ForEachSubsetOfSize(s.mask(), k_prime, [&](std::uint64_t t) { seen.insert(t); });
  }
  std::vector<Bundle> sets;
  for (std::uint64_t t : seen) sets.push_back(Bundle(t));
  return SetFamily::Make(family.m, k_prime, std::move(sets));
}

bool KruskalKatonaCheck(const SetFamily& family, int m_prime, int k_prime) {
  if (k_prime < 0 || k_prime > family.k || family.k > m_prime || m_prime > family.m) {
    throw InvalidArgument("Kruskal-Katona check needs k' <= k <= m' <= m");
  }
  if (BigInt(family.size()) < Binomial(m_prime, family.k)) return true;
  return BigInt(Shadow(family, k_prime).size()) >= Binomial(m_prime, k_prime);
}

EmcBounds ComputeEmcBounds(int m, int k, int n) {
  CheckEmcParameters(m, k, n);
  EmcBounds out;
  if (k == 0) {
    out.cover = out.clique = out.max = 0;
    return out;
  }
  out.cover = Binomial(m, k) - Binomial(m - n + 1, k);
  out.clique = Binomial(static_cast<std::int64_t>(k) * n - 1, k);
  out.max = std::max(out.cover, out.clique);
  return out;
}

EmcExtremal EmcExtremalFamilies(int m, int k, int n, const MatchingOptions& options) {
  CheckEmcParameters(m, k, n);
  if (k < 1) throw InvalidArgument("extremal families need k >= 1");
  const EmcBounds bounds = ComputeEmcBounds(m, k, n);
  const SetFamily layer = SetFamily::Layer(m, k, options.family_budget);
  const std::uint64_t hub = FullMask(n - 1);
  const std::uint64_t small = FullMask(k * n - 1);
  std::vector<Bundle> cover;
  std::vector<Bundle> clique;
  for (Bundle s : layer.sets) {
    if (s.mask() & hub) cover.push_back(s);
    if ((s.mask() & ~small) == 0) clique.push_back(s);
  }
  EmcExtremal out{SetFamily::Make(m, k, std::move(cover)),
                  SetFamily::Make(m, k, std::move(clique))};
  if (BigInt(out.cover.size()) != bounds.cover ||
      BigInt(out.clique.size()) != bounds.clique) {
    throw std::logic_error("extremal family size differs from its bound");
  }
  if (static_cast<int>(MaximumMatching(out.cover, n, options).matching.size()) >= n ||
      static_cast<int>(MaximumMatching(out.clique, n, options).matching.size()) >= n) {
    throw std::logic_error("extremal family contains an n-matching");
  }
  return out;
}

EmcFalsifyResult EmcFalsify(int m, int k, int n, std::uint64_t trials,
                            std::uint64_t seed, const EmcFalsifyOptions& options) {
  CheckEmcParameters(m, k, n);
  if (k < 1) throw InvalidArgument("falsification needs k >= 1");
  if (Binomial(m, k) > options.matching.family_budget) {
    throw InvalidArgument("C(m,k) exceeds the family budget");
  }
  EmcFalsifyResult result;
  result.m = m;
  result.k = k;
  result.n = n;
  result.bound = ComputeEmcBounds(m, k, n).max;
  const SetFamily layer = SetFamily::Layer(m, k, options.matching.family_budget);
  const std::uint64_t size = result.bound.convert_to<std::uint64_t>() + 1;
  if (size > layer.size()) return result;
  result.trials = trials;

  const EmcExtremal extremal = EmcExtremalFamilies(m, k, n, options.matching);
  const SetFamily& base =
      extremal.cover.size() >= extremal.clique.size() ? extremal.cover : extremal.clique;
  std::vector<Bundle> outside;
  for (Bundle s : layer.sets) {
    if (!base.Contains(s)) outside.push_back(s);
  }
  const int count = options.rainbow ? n : 1;

  auto draw = [&](std::uint64_t trial) {
    std::mt19937_64 rng(SplitMix64(seed ^ SplitMix64(trial)));
    std::vector<SetFamily> families;
    for (int f = 0; f < count; ++f) {
      std::vector<Bundle> sets;
      if (rng() & 1) {
        sets = base.sets;
        sets.push_back(outside[std::uniform_int_distribution<std::size_t>(
            0, outside.size() - 1)(rng)]);
      } else {
        std::sample(layer.sets.begin(), layer.sets.end(), std::back_inserter(sets),
                    size, rng);
      }
      families.push_back(SetFamily::Make(m, k, std::move(sets)));
    }
    return families;
  };
  auto refutes = [&](const std::vector<SetFamily>& families) {
    if (options.rainbow) return !RainbowMatching(families, options.matching);
    return static_cast<int>(
               MaximumMatching(families[0], n, options.matching).matching.size()) < n;
  };

  std::atomic<std::uint64_t> first{trials};
  auto work = [&](std::uint64_t start, std::uint64_t stride) {
    for (std::uint64_t t = start; t < trials && t < first.load(); t += stride) {
      if (refutes(draw(t))) {
        std::uint64_t cur = first.load();
        while (t < cur && !first.compare_exchange_weak(cur, t)) {
        }
        return;
      }
    }
  };
  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    for (std::thread& t : pool) t.join();
  }
  if (first.load() < trials) {
    result.counterexample_trial = first.load();
    result.counterexample = draw(first.load());
  }
  return result;
}

BoundChainReport BoundChainCheck(const Valuation& valuation, int n,
                                     const MatchingOptions& options) {
  const int m = valuation.num_goods();
  if (n < 2 || m % n != 0 || m / n - 1 < 1) {
    throw InvalidArgument("chain check needs n >= 2, n | m and m/n - 1 >= 1");
  }
  const int k = m / n - 1;
  if (Binomial(m, k) > options.family_budget) {
    throw BudgetExceeded("C(m, m/n - 1) exceeds the family budget");
  }
  const ValueTable table = ValueTable::Build(valuation);
  for (std::int64_t key : table.keys()) {
    const Rational value = table.ValueOfKey(key);
    if (value != 0 && value != 1) {
      throw InvalidArgument("chain check needs a 0/1 valuation");
    }
  }
  if (!table.IsMonotone()) throw InvalidArgument("chain check needs a monotone valuation");
  const bool has_zero = table.ValueOfKey(table.key(0)) == 0;
  const std::int64_t zero_key = table.key(0);
  auto is_zero = [&](std::uint64_t s) { return has_zero && table.key(s) == zero_key; };

  BoundChainReport report;
  report.n = n;
  report.m = m;
  report.k = k;
  report.limit = LimitRatio(n);

  std::vector<Bundle> ones;
  for (Bundle s : SetFamily::Layer(m, k, options.family_budget).sets) {
    if (!is_zero(s.mask())) ones.push_back(s);
  }
  const SetFamily f_k = SetFamily::Make(m, k, std::move(ones));
  report.ones_k = f_k.size();
  report.zeros_k = Binomial(m, k) - report.ones_k;
  report.nu = static_cast<int>(MaximumMatching(f_k, n, options).matching.size());
  report.applies = report.nu < n;
  if (!report.applies) return report;

  report.emc_step_ok = report.zeros_k >= Binomial(m - n + 1, k);
  report.emc_violation = !report.emc_step_ok;
  std::vector<BigInt> zeros_by_size(k + 1, 0);
  for (std::uint64_t s = 0; s <= FullMask(m); ++s) {
    const int size = std::popcount(s);
    if (size <= k && is_zero(s)) ++zeros_by_size[size];
  }
  for (int kp = 0; kp <= k; ++kp) {
    ChainLevel level;
    level.k_prime = kp;
    level.zeros = zeros_by_size[kp];
    level.required = Binomial(m - n + 1, kp);
    level.layer = Binomial(m, kp);
    level.ok = level.zeros >= level.required;
    level.ratio = Rational(level.zeros, level.layer);
    level.ratio_ok = level.ratio >= report.limit;
    report.levels.push_back(level);
  }
  return report;
}

Rational BinomialBelow(int trials, int n, int t) {
  if (n < 2 || trials < 0) throw InvalidArgument("need n >= 2 and trials >= 0");
  BigInt term = Power(n - 1, trials);
  BigInt sum = 0;
  for (int j = 0; j < t && j <= trials; ++j) {
    sum += term;
    term = term * (trials - j) / (BigInt(j + 1) * (n - 1));
  }
  return Rational(sum, Power(n, trials));
}

BinomialQnResult BinomialQn(int n, int t_max, const HighPrecision& precision) {
  if (n < 2 || t_max < 1) throw InvalidArgument("need n >= 2 and t_max >= 1");
  BinomialQnResult out;
  out.n = n;
  out.t_max = t_max;
  for (int t = 1; t <= t_max; ++t) {
    const Rational p = BinomialBelow(t * n - 1, n, t);
    if (t == 1 || p < out.estimate) {
      out.estimate = p;
      out.argmin = t;
    }
  }
  out.bound = InverseE() - 1 / (2 * sqrt(HighPrecision(n) * (n - 1)));
  out.bound_holds = CompareAtLeast(ToHighPrecision(out.estimate), out.bound, precision);
  out.conjecture_gap = out.estimate - LimitRatio(n);
  return out;
}

HighPrecision PoissonBelowMean(const Rational& lambda) {
  if (lambda <= 0) throw InvalidArgument("Poisson mean must be positive");
  const BigInt top = numerator(lambda) / denominator(lambda);
  Rational term = 1;
  Rational sum = 0;
  for (BigInt j = 0; j <= top; ++j) {
    sum += term;
    term = term * lambda / Rational(j + 1);
  }
  return ToHighPrecision(sum) * exp(-ToHighPrecision(lambda));
}

Tri PoissonAboveInverseE(const Rational& lambda, const HighPrecision& precision) {
  return CompareAtLeast(PoissonBelowMean(lambda), InverseE(), precision);
}

bool Lemma9Check(int n, int k) {
  if (n < 2 || k < 1) throw InvalidArgument("Lemma check needs n >= 2 and k >= 1");
  const std::int64_t kn = static_cast<std::int64_t>(k) * n;
  const std::int64_t m = kn + n;
  const BigInt lhs = Binomial(m, k) - Binomial(m - n + 1, k);
  const BigInt rhs = Binomial(kn - 1, k);
  if (lhs < rhs || (k == 1 && lhs != rhs)) return false;

  Rational first = 1;
  Rational second = 1;
  for (int i = 0; i <= n; ++i) {
    const Rational factor(kn + i - k, kn + i);
    first *= factor;
    if (i >= 2) second *= factor;
  }
  const BigInt whole = Binomial(m, k);
  return first == Rational(rhs, whole) &&
         second == Rational(Binomial(kn + 1, k), whole) && first + second <= 1;
}

Lemma9SweepResult Lemma9Sweep(int n_max, int k_max) {
  Lemma9SweepResult out;
  for (int n = 2; n <= n_max; ++n) {
    Rational previous;
    for (int k = 1; k <= k_max; ++k) {
      ++out.checked;
      if (!Lemma9Check(n, k)) out.failures.emplace_back(n, k);
      if (k == 1) {
        out.equality_at_k1 &= Binomial(2 * n, 1) - Binomial(n + 1, 1) == Binomial(n - 1, 1);
      }
      const Rational sum = Lemma9RatioSum(n, k);
      if (k > 1 && sum > previous) out.monotone_in_k = false;
      previous = sum;
    }
  }
  return out;
}

}  // namespace qfair
