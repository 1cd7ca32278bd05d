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

#include "qfair/allocate.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <deque>
#include <limits>
#include <mutex>
#include <thread>

#include "qfair/errors.h"
#include "qfair/quantile.h"

namespace qfair {
namespace {

enum class Closure { kNone, kUp, kDown };

// kUp when t[S] <= t[S + j] everywhere, kDown when t[S] >= t[S + j].
template <typename T>
Closure ClosureOf(const std::vector<T>& t, int m) {
  bool up = true;
  bool down = true;
  for (std::uint64_t mask = 0; mask < t.size() && (up || down); ++mask) {
    for (int j = 0; j < m; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      if (mask & bit) continue;
      if (t[mask] > t[mask | bit]) up = false;
      if (t[mask] < t[mask | bit]) down = false;
    }
  }
  if (up) return Closure::kUp;
  if (down) return Closure::kDown;
  return Closure::kNone;
}

void CheckAgents(int n) {
  if (n < 1) throw InvalidArgument("need at least one agent");
}

// Number of leading goods fixed per work item when sharding.
int ShardDepth(int n, int m, int threads) {
  if (threads <= 1 || n <= 1) return 0;
  int depth = 0;
  std::uint64_t items = 1;
  while (depth < m && items < static_cast<std::uint64_t>(threads) * 8) {
    items *= n;
    ++depth;
  }
  return depth;
}

// Runs `work(t)` on `threads` workers and joins them.
template <typename Work>
void RunWorkers(int threads, Work work) {
  if (threads <= 1) {
    work(0);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
  for (std::thread& th : pool) th.join();
}

// Digits of `prefix` (base n, `depth` digits) placed on goods 0..depth-1.
void ApplyPrefix(std::uint64_t prefix, int n, int depth,
                 std::vector<std::uint64_t>& cur, std::vector<int>& digits) {
  for (int j = depth - 1; j >= 0; --j) {
    const int a = static_cast<int>(prefix % n);
    prefix /= n;
    digits[j] = a;
    cur[a] |= std::uint64_t{1} << j;
  }
}

std::uint64_t IndexOfDigits(const std::vector<int>& digits, int n) {
  std::uint64_t index = 0;
  for (int d : digits) index = index * n + d;
  return index;
}

class AcceptSearch {
 public:
  AcceptSearch(int n, int m, const std::vector<AcceptTable>& accept,
               const std::vector<Closure>& closure)
      : n_(n), m_(m), accept_(accept), closure_(closure), cur_(n, 0),
        digits_(m, 0) {}

  bool Run(std::uint64_t prefix, int depth) {
    std::fill(cur_.begin(), cur_.end(), 0);
    ApplyPrefix(prefix, n_, depth, cur_, digits_);
    const std::uint64_t rest = FullMask(m_) & ~FullMask(depth);
    return Alive(rest) && Dfs(depth, rest);
  }
  const std::vector<int>& digits() const { return digits_; }

 private:
  bool Alive(std::uint64_t rest) const {
    for (int i = 0; i < n_; ++i) {
      switch (closure_[i]) {
        case Closure::kUp:
          if (!accept_[i][cur_[i] | rest]) return false;
          break;
        case Closure::kDown:
          if (!accept_[i][cur_[i]]) return false;
          break;
        case Closure::kNone:
          if (rest == 0 && !accept_[i][cur_[i]]) return false;
          break;
      }
    }
    return true;
  }

  bool Dfs(int j, std::uint64_t rest) {
    if (j == m_) return true;
    const std::uint64_t bit = std::uint64_t{1} << j;
    const std::uint64_t next = rest & ~bit;
    for (int a = 0; a < n_; ++a) {
      cur_[a] |= bit;
      digits_[j] = a;
      if (Alive(next) && Dfs(j + 1, next)) return true;
      cur_[a] &= ~bit;
    }
    return false;
  }

  int n_;
  int m_;
  const std::vector<AcceptTable>& accept_;
  const std::vector<Closure>& closure_;
  std::vector<std::uint64_t> cur_;
  std::vector<int> digits_;
};

class MaximinSearch {
 public:
  MaximinSearch(int n, int m, const std::vector<const std::vector<std::uint64_t>*>& num,
                const std::vector<Closure>& closure)
      : n_(n), m_(m), num_(num), closure_(closure), cur_(n, 0), digits_(m, 0),
        best_digits_(m, 0) {}

  void Run(std::uint64_t prefix, int depth) {
    std::fill(cur_.begin(), cur_.end(), 0);
    ApplyPrefix(prefix, n_, depth, cur_, digits_);
    const std::uint64_t rest = FullMask(m_) & ~FullMask(depth);
    if (Promising(rest)) Dfs(depth, rest);
  }
  bool found() const { return found_; }
  std::uint64_t best() const { return best_; }
  const std::vector<int>& best_digits() const { return best_digits_; }

 private:
  bool Promising(std::uint64_t rest) const {
    if (!found_) return true;
    for (int i = 0; i < n_; ++i) {
      std::uint64_t ub = std::numeric_limits<std::uint64_t>::max();
      if (closure_[i] == Closure::kUp) {
        ub = (*num_[i])[cur_[i] | rest];
      } else if (closure_[i] == Closure::kDown) {
        ub = (*num_[i])[cur_[i]];
      }
      if (ub <= best_) return false;
    }
    return true;
  }

  void Dfs(int j, std::uint64_t rest) {
    if (j == m_) {
      std::uint64_t score = std::numeric_limits<std::uint64_t>::max();
      for (int i = 0; i < n_; ++i) score = std::min(score, (*num_[i])[cur_[i]]);
      if (!found_ || score > best_) {
        found_ = true;
        best_ = score;
        best_digits_ = digits_;
      }
      return;
    }
    const std::uint64_t bit = std::uint64_t{1} << j;
    const std::uint64_t next = rest & ~bit;
    for (int a = 0; a < n_; ++a) {
      cur_[a] |= bit;
      digits_[j] = a;
      if (Promising(next)) Dfs(j + 1, next);
      cur_[a] &= ~bit;
    }
  }

  int n_;
  int m_;
  const std::vector<const std::vector<std::uint64_t>*>& num_;
  const std::vector<Closure>& closure_;
  std::vector<std::uint64_t> cur_;
  std::vector<int> digits_;
  bool found_ = false;
  std::uint64_t best_ = 0;
  std::vector<int> best_digits_;
};

CoverageCertificate MakeCertificate(int n, int m,
                                    const std::vector<AcceptTable>& accept,
                                    std::uint64_t total) {
  CoverageCertificate cert;
  for (int i = 0; i < n; ++i) {
    BigInt covered = 0;
    for (std::uint64_t mask = 0; mask < accept[i].size(); ++mask) {
      if (!accept[i][mask]) covered += Power(n - 1, m - std::popcount(mask));
    }
    cert.coverage.push_back(covered);
  }
  if (total > kViolatorListLimit) return cert;
  cert.violators.reserve(total);
  std::vector<int> digits(m, 0);
  std::vector<std::uint64_t> bundles(n);
  for (std::uint64_t x = 0; x < total; ++x) {
    std::fill(bundles.begin(), bundles.end(), 0);
    for (int j = 0; j < m; ++j) bundles[digits[j]] |= std::uint64_t{1} << j;
    int violator = -1;
    for (int i = 0; i < n && violator < 0; ++i) {
      if (!accept[i][bundles[i]]) violator = i;
    }
    cert.violators.push_back(violator);
    for (int j = m - 1; j >= 0; --j) {
      if (++digits[j] < n) break;
      digits[j] = 0;
    }
  }
  return cert;
}

struct IntersectionState {
  Bundle independent;
  // Elements reachable from X1 in the final exchange graph.
  Bundle reachable;
};

// Augments `start` along shortest paths until none remains.
IntersectionState Augment(const Matroid& m1, const Matroid& m2, Bundle start) {
  const int g = m1.ground_size();
  std::uint64_t in = start.mask();
  while (true) {
    auto indep1 = [&](std::uint64_t s) { return m1.IsIndependent(Bundle(s)); };
    auto indep2 = [&](std::uint64_t s) { return m2.IsIndependent(Bundle(s)); };
    std::vector<int> parent(g, -2);
    std::vector<bool> sink(g, false);
    std::deque<int> queue;
    for (int y = 0; y < g; ++y) {
      const std::uint64_t bit = std::uint64_t{1} << y;
      if (in & bit) continue;
      if (indep2(in | bit)) sink[y] = true;
      if (indep1(in | bit)) {
        parent[y] = -1;
        queue.push_back(y);
      }
    }
    int end = -1;
    while (!queue.empty() && end < 0) {
      const int u = queue.front();
      queue.pop_front();
      if (sink[u]) {
        end = u;
        break;
      }
      const std::uint64_t ubit = std::uint64_t{1} << u;
      for (int w = 0; w < g; ++w) {
        if (parent[w] != -2) continue;
        const std::uint64_t wbit = std::uint64_t{1} << w;
        bool edge = false;
        if ((in & ubit) && !(in & wbit)) {
          edge = indep1((in & ~ubit) | wbit);
        } else if (!(in & ubit) && (in & wbit)) {
          edge = indep2((in & ~wbit) | ubit);
        }
        if (edge) {
          parent[w] = u;
          queue.push_back(w);
        }
      }
    }
    if (end < 0) {
      std::uint64_t reach = 0;
      for (int v = 0; v < g; ++v) {
        if (parent[v] != -2) reach |= std::uint64_t{1} << v;
      }
      return {Bundle(in), Bundle(reach)};
    }
    for (int v = end; v >= 0; v = parent[v]) in ^= std::uint64_t{1} << v;
  }
}

void CheckSameGround(const Matroid& m1, const Matroid& m2) {
  if (m1.ground_size() != m2.ground_size()) {
    throw InvalidArgument("matroids have ground sizes " +
                          std::to_string(m1.ground_size()) + " and " +
                          std::to_string(m2.ground_size()));
  }
}

int EdmondsBound(const Matroid& m1, const Matroid& m2, Bundle a) {
  const Bundle ground = Bundle::Full(m1.ground_size());
  return m1.Rank(a) + m2.Rank(ground.Minus(a));
}

std::vector<Rational> CheckedWeights(const Valuation& v, const char* what) {
  if (const auto* a = std::get_if<AdditiveValuation>(&v.spec())) return a->weights;
  if (const auto* u = std::get_if<UnitDemandValuation>(&v.spec())) {
    return u->weights;
  }
  throw InvalidArgument(std::string(what) +
                        " needs additive or unit-demand valuations, got " +
                        v.KindName());
}

}  // namespace

std::uint64_t AllocationCount(int n, int m, std::uint64_t budget) {
  CheckAgents(n);
  const std::uint64_t total = PowerU64(n, m);
  if (total > budget) {
    throw BudgetExceeded(std::to_string(n) + "^" + std::to_string(m) +
                         " allocations exceed the budget of " +
                         std::to_string(budget));
  }
  return total;
}

std::uint64_t AllocationIndex(const Allocation& allocation, int m) {
  return IndexOfDigits(allocation.AgentOfGood(m), allocation.num_agents());
}

Allocation AllocationAtIndex(std::uint64_t index, int n, int m) {
  std::vector<int> digits(m, 0);
  for (int j = m - 1; j >= 0; --j) {
    digits[j] = static_cast<int>(index % n);
    index /= n;
  }
  return Allocation::FromDigits(digits, n);
}

AcceptSearchResult FindAcceptedAllocation(int n, int m,
                                          const std::vector<AcceptTable>& accept,
                                          const SearchOptions& options) {
  const std::uint64_t total = AllocationCount(n, m, options.budget);
  if (static_cast<int>(accept.size()) != n) {
    throw InvalidArgument("need one acceptance table per agent");
  }
  std::vector<Closure> closure;
  for (const AcceptTable& t : accept) {
    if (t.size() != (std::uint64_t{1} << m)) {
      throw InvalidArgument("acceptance tables must cover all 2^m bundles");
    }
    closure.push_back(ClosureOf(t, m));
  }
  const int threads = std::max(1, options.threads);
  const int depth = ShardDepth(n, m, threads);
  const std::uint64_t prefixes = PowerU64(n, depth);
  std::atomic<std::uint64_t> best_prefix{prefixes};
  std::mutex mu;
  std::optional<std::vector<int>> best_digits;
  RunWorkers(threads, [&](int t) {
    AcceptSearch search(n, m, accept, closure);
    for (std::uint64_t p = t; p < prefixes; p += threads) {
      if (p > best_prefix.load()) return;
      if (!search.Run(p, depth)) continue;
      std::lock_guard<std::mutex> lock(mu);
      if (p < best_prefix.load()) {
        best_prefix = p;
        best_digits = search.digits();
      }
      return;
    }
  });
  AcceptSearchResult result;
  if (best_digits) {
    result.allocation = Allocation::FromDigits(*best_digits, n);
    result.index = IndexOfDigits(*best_digits, n);
  } else {
    result.certificate = MakeCertificate(n, m, accept, total);
  }
  return result;
}

Allocation RoundRobin(const Instance& instance) {
  instance.CheckShape();
  std::vector<std::vector<Rational>> weights;
  for (const Valuation& v : instance.valuations) {
    weights.push_back(CheckedWeights(v, "round robin"));
  }
  Allocation out;
  out.bundles.assign(instance.n, Bundle());
  std::uint64_t remaining = FullMask(instance.m);
  for (int t = 0; remaining != 0; ++t) {
    const int agent = t % instance.n;
    int pick = -1;
    for (int j = 0; j < instance.m; ++j) {
      if (!((remaining >> j) & 1)) continue;
      if (pick < 0 || weights[agent][j] > weights[agent][pick]) pick = j;
    }
    out.bundles[agent] = out.bundles[agent].With(pick);
    remaining &= ~(std::uint64_t{1} << pick);
  }
  return out;
}

AcceptSearchResult ExhaustiveFairAllocation(const Instance& instance,
                                            const Rational& q,
                                            const SearchOptions& options) {
  CheckQuantileLevel(q);
  instance.CheckShape();
  AllocationCount(instance.n, instance.m, options.budget);
  std::vector<AcceptTable> accept;
  for (const Valuation& v : instance.valuations) {
    const std::vector<bool> fair =
        SatisfactionTable::Build(v, instance.n).FairMask(q);
    accept.emplace_back(fair.begin(), fair.end());
  }
  return FindAcceptedAllocation(instance.n, instance.m, accept, options);
}

MaximinResult MaximinSatisfactionAllocation(const Instance& instance,
                                            const SearchOptions& options) {
  instance.CheckShape();
  const int n = instance.n;
  const int m = instance.m;
  AllocationCount(n, m, options.budget);
  std::vector<SatisfactionTable> tables;
  std::vector<const std::vector<std::uint64_t>*> num;
  std::vector<Closure> closure;
  for (const Valuation& v : instance.valuations) {
    tables.push_back(SatisfactionTable::Build(v, n));
  }
  for (const SatisfactionTable& t : tables) {
    num.push_back(&t.numerators());
    closure.push_back(ClosureOf(t.numerators(), m));
  }
  const int threads = std::max(1, options.threads);
  const int depth = ShardDepth(n, m, threads);
  const std::uint64_t prefixes = PowerU64(n, depth);
  std::vector<MaximinSearch> workers;
  for (int t = 0; t < threads; ++t) workers.emplace_back(n, m, num, closure);
  RunWorkers(threads, [&](int t) {
    for (std::uint64_t p = t; p < prefixes; p += threads) workers[t].Run(p, depth);
  });
  const MaximinSearch* best = nullptr;
  std::uint64_t best_index = 0;
  for (const MaximinSearch& w : workers) {
    if (!w.found()) continue;
    const std::uint64_t index = IndexOfDigits(w.best_digits(), n);
    if (best == nullptr || w.best() > best->best() ||
        (w.best() == best->best() && index < best_index)) {
      best = &w;
      best_index = index;
    }
  }
  MaximinResult out;
  out.allocation = Allocation::FromDigits(best->best_digits(), n);
  out.index = best_index;
  out.q_star = Rational(best->best()) / Rational(tables[0].denominator());
  return out;
}

BigInt PartitionCount(int m, int n) {
  // stirling[k] = S(j, k) after processing j goods.
  std::vector<BigInt> stirling(n + 1, 0);
  stirling[0] = 1;
  for (int j = 0; j < m; ++j) {
    for (int k = n; k >= 1; --k) stirling[k] = stirling[k] * k + stirling[k - 1];
    stirling[0] = 0;
  }
  BigInt total = 0;
  for (const BigInt& s : stirling) total += s;
  return total;
}

MmsResult MmsValue(const Valuation& valuation, int n,
                   const MmsOptions& options) {
  CheckAgents(n);
  if (options.matroid_fast) {
    if (const auto* r = std::get_if<MatroidRankValuation>(&valuation.spec())) {
      return MatroidMms(r->matroid, n);
    }
  }
  const int m = valuation.num_goods();
  const BigInt partitions = PartitionCount(m, n);
  if (partitions > options.partition_budget) {
    throw BudgetExceeded("splitting " + std::to_string(m) + " goods into " +
                         std::to_string(n) + " bundles takes " +
                         partitions.str() + " partitions, above the budget");
  }
  const ValueTable table = ValueTable::Build(valuation, options.exact_cap);
  const bool monotone = table.IsMonotone();
  std::vector<std::uint64_t> blocks(n, 0);
  std::vector<std::uint64_t> best_blocks(n, 0);
  bool found = false;
  std::int64_t best = 0;

  auto promising = [&](std::uint64_t rest) {
    if (!found || !monotone) return true;
    for (int b = 0; b < n; ++b) {
      if (table.key(blocks[b] | rest) <= best) return false;
    }
    return true;
  };
  // Restricted growth strings: good j joins a used block or opens the next.
  auto dfs = [&](auto&& self, int j, int used) -> void {
    if (j == m) {
      std::int64_t score = std::numeric_limits<std::int64_t>::max();
      for (int b = 0; b < n; ++b) score = std::min(score, table.key(blocks[b]));
      if (!found || score > best) {
        found = true;
        best = score;
        best_blocks = blocks;
      }
      return;
    }
    const std::uint64_t bit = std::uint64_t{1} << j;
    const std::uint64_t rest = FullMask(m) & ~FullMask(j + 1);
    const int limit = std::min(used + 1, n);
    for (int b = 0; b < limit; ++b) {
      blocks[b] |= bit;
      if (promising(rest)) self(self, j + 1, std::max(used, b + 1));
      blocks[b] &= ~bit;
    }
  };
  dfs(dfs, 0, 0);

  MmsResult out;
  out.value = table.ValueOfKey(best);
  for (std::uint64_t b : best_blocks) out.witness.bundles.push_back(Bundle(b));
  out.method = "brute_force";
  return out;
}

Bundle MatroidIntersection(const Matroid& m1, const Matroid& m2) {
  CheckSameGround(m1, m2);
  return Augment(m1, m2, Bundle()).independent;
}

EdmondsCertificate CertifyIntersection(const Matroid& m1, const Matroid& m2,
                                       Bundle independent,
                                       std::optional<Bundle> supplied) {
  CheckSameGround(m1, m2);
  const int g = m1.ground_size();
  EdmondsCertificate cert;
  if (!independent.FitsIn(g)) {
    cert.reason = "set reaches outside the ground set";
    return cert;
  }
  if (!m1.IsIndependent(independent)) {
    cert.reason = "set is not independent in the first matroid";
    return cert;
  }
  if (!m2.IsIndependent(independent)) {
    cert.reason = "set is not independent in the second matroid";
    return cert;
  }
  const IntersectionState state = Augment(m1, m2, independent);
  cert.max_size = state.independent.size();
  if (independent.size() < cert.max_size) {
    cert.reason = "a common independent set of size " +
                  std::to_string(cert.max_size) + " exists";
    return cert;
  }
  if (supplied) {
    if (!supplied->FitsIn(g)) {
      cert.reason = "supplied A reaches outside the ground set";
      return cert;
    }
    cert.a = *supplied;
    cert.bound = EdmondsBound(m1, m2, cert.a);
    cert.certified = cert.bound == independent.size();
    if (!cert.certified) cert.reason = "supplied A gives a larger bound";
    return cert;
  }
  if (g <= 20) {
    for (std::uint64_t a = 0; a <= FullMask(g); ++a) {
      const int bound = EdmondsBound(m1, m2, Bundle(a));
      if (bound == independent.size()) {
        cert.a = Bundle(a);
        cert.bound = bound;
        cert.certified = true;
        return cert;
      }
    }
    throw std::logic_error("no set attains the min-max bound");
  }
  cert.a = Bundle::Full(g).Minus(state.reachable);
  cert.bound = EdmondsBound(m1, m2, cert.a);
  cert.certified = cert.bound == independent.size();
  if (!cert.certified) throw std::logic_error("exchange graph bound mismatch");
  return cert;
}

MmsResult MatroidMms(const Matroid& matroid, int n) {
  CheckAgents(n);
  const int g = matroid.ground_size();
  if (static_cast<std::int64_t>(n) * g > kMaxGoods) {
    throw BudgetExceeded("n * m = " + std::to_string(n * g) +
                         " exceeds the 63-element ground of the direct sum");
  }
  MmsResult out;
  out.method = "matroid_intersection";
  out.value = 0;
  out.witness.bundles.assign(n, Bundle());
  out.witness.bundles[0] = Bundle::Full(g);
  std::vector<Bundle> blocks;
  for (int j = 0; j < g; ++j) {
    std::uint64_t block = 0;
    for (int i = 0; i < n; ++i) block |= std::uint64_t{1} << (i * g + j);
    blocks.push_back(Bundle(block));
  }
  const Matroid one_per_good =
      Matroid::Partition(n * g, blocks, std::vector<int>(g, 1));
  for (int k = 1; n * k <= g; ++k) {
    const Matroid truncated = Matroid::Truncation(matroid, k);
    const Matroid copies =
        Matroid::DirectSum(std::vector<Matroid>(n, truncated));
    const Bundle common = MatroidIntersection(copies, one_per_good);
    if (common.size() < n * k) break;
    std::vector<Bundle> bundles(n);
    std::uint64_t used = 0;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t part = (common.mask() >> (i * g)) & FullMask(g);
      bundles[i] = Bundle(part);
      used |= part;
    }
    bundles[0] = bundles[0] | Bundle(FullMask(g) & ~used);
    out.value = k;
    out.witness.bundles = std::move(bundles);
  }
  return out;
}

Rational MmsQuantile(const Valuation& valuation, int n,
                     const MmsOptions& options) {
  const MmsResult mms = MmsValue(valuation, n, options);
  return ExactDistribution(valuation, n, options.exact_cap).Cdf(mms.value);
}

BernoulliCheck BernoulliDeviationCheck(const std::vector<Rational>& weights,
                                       const Rational& p) {
  const int m = static_cast<int>(weights.size());
  if (m > kBernoulliCap) {
    throw BudgetExceeded("exact Bernoulli enumeration is capped at " +
                         std::to_string(kBernoulliCap) + " weights");
  }
  if (p < 0 || p > 1) throw InvalidArgument("p must lie in [0, 1]");
  BigInt lcm = 1;
  for (const Rational& w : weights) {
    if (w < 0) throw InvalidArgument("weights must be nonnegative");
    const BigInt& d = boost::multiprecision::denominator(w);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  std::vector<BigInt> exact;
  BigInt total = 0;
  for (const Rational& w : weights) {
    exact.push_back(boost::multiprecision::numerator(w) * lcm /
                    boost::multiprecision::denominator(w));
    total += exact.back();
  }
  if (total > BigInt(std::numeric_limits<std::int64_t>::max() / 4)) {
    throw InvalidArgument("weights too large for exact enumeration");
  }
  std::vector<std::int64_t> scaled;
  for (const BigInt& s : exact) scaled.push_back(s.convert_to<std::int64_t>());
  const std::int64_t w_total = total.convert_to<std::int64_t>();
  const std::int64_t a = boost::multiprecision::numerator(p).convert_to<std::int64_t>();
  const std::int64_t b =
      boost::multiprecision::denominator(p).convert_to<std::int64_t>();
  const __int128 rhs = static_cast<__int128>(a) * w_total;
  // counts[k]: outcomes with k successes meeting the threshold.
  std::vector<std::uint64_t> counts(m + 1, 0);
  std::uint64_t state = 0;
  std::int64_t sum = 0;
  int ones = 0;
  if (0 <= rhs) ++counts[0];
  const std::uint64_t outcomes = std::uint64_t{1} << m;
  for (std::uint64_t i = 1; i < outcomes; ++i) {
    const int j = std::countr_zero(i);
    const std::uint64_t bit = std::uint64_t{1} << j;
    state ^= bit;
    if (state & bit) {
      sum += scaled[j];
      ++ones;
    } else {
      sum -= scaled[j];
      --ones;
    }
    if (static_cast<__int128>(sum) * b <= rhs) ++counts[ones];
  }
  BigInt numer = 0;
  for (int k = 0; k <= m; ++k) {
    if (counts[k] != 0) numer += Power(a, k) * Power(b - a, m - k) * counts[k];
  }
  BernoulliCheck out;
  out.probability = Rational(numer, Power(b, m));
  out.bound = Rational(14, 100) * (1 - p);
  out.ok = out.probability >= out.bound;
  return out;
}

BernoulliCheck ProportionalQuantileCheck(const std::vector<Rational>& weights,
                                         int n) {
  CheckAgents(n);
  return BernoulliDeviationCheck(weights, Rational(1, n));
}

}  // namespace qfair
