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

#include "qfair/boolean_lattice.h"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>

#include "qfair/errors.h"

namespace qfair {
namespace {

// kWith[j]: truth-table positions S with good j in S.
constexpr std::array<FamilyBits, 6> kWith = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

void CheckGoods(int m) {
  if (m < 0 || m > kMaxLatticeGoods) {
    throw InvalidArgument("truth-table families need 0 <= m <= 6, got " +
                          std::to_string(m));
  }
}

// Exchanges the roles of goods i < j.
FamilyBits SwapGoods(FamilyBits t, int i, int j) {
  const int delta = (1 << j) - (1 << i);
  const FamilyBits low = kWith[i] & ~kWith[j];
  const FamilyBits moved = ((t >> delta) ^ t) & low;
  return t ^ moved ^ (moved << delta);
}

// Adjacent transpositions (k, k+1) visiting every permutation of m goods
// once (Steinhaus-Johnson-Trotter).
std::vector<int> AdjacentSwapSequence(int m) {
  std::vector<int> out;
  if (m < 2) return out;
  std::vector<int> perm(m);
  std::vector<int> dir(m, -1);
  std::iota(perm.begin(), perm.end(), 0);
  while (true) {
    int mobile = -1;
    int pos = -1;
    for (int k = 0; k < m; ++k) {
      const int next = k + dir[perm[k]];
      if (next < 0 || next >= m || perm[next] > perm[k]) continue;
      if (perm[k] > mobile) {
        mobile = perm[k];
        pos = k;
      }
    }
    if (mobile < 0) return out;
    const int next = pos + dir[mobile];
    out.push_back(std::min(pos, next));
    std::swap(perm[pos], perm[next]);
    for (int k = 0; k < m; ++k) {
      if (perm[k] > mobile) dir[perm[k]] = -dir[perm[k]];
    }
  }
}

const std::vector<int>& SwapSequence(int m) {
  static const std::array<std::vector<int>, kMaxLatticeGoods + 1> kSequences =
      [] {
        std::array<std::vector<int>, kMaxLatticeGoods + 1> out;
        for (int k = 0; k <= kMaxLatticeGoods; ++k) {
          out[k] = AdjacentSwapSequence(k);
        }
        return out;
      }();
  return kSequences[m];
}

}  // namespace

bool IsDownSet(FamilyBits family, int m) {
  CheckGoods(m);
  if (family & ~AllBundles(m)) return false;
  for (int j = 0; j < m; ++j) {
    if (((family & kWith[j]) >> (1 << j)) & ~family) return false;
  }
  return true;
}

FamilyBits DownClosure(FamilyBits family, int m) {
  CheckGoods(m);
  family &= AllBundles(m);
  for (int j = 0; j < m; ++j) family |= (family & kWith[j]) >> (1 << j);
  return family;
}

void ForEachDownSet(int m, const std::function<void(FamilyBits)>& fn) {
  CheckGoods(m);
  if (m == 0) {
    fn(0);
    fn(1);
    return;
  }
  // A down-set splits into D0 (bundles without the top good) and D1 (the
  // rest, with the top good removed), both down-sets, with D1 inside D0.
  const std::vector<FamilyBits> lower = EnumerateDownSets(m - 1);
  const int shift = 1 << (m - 1);
  for (FamilyBits d0 : lower) {
    for (FamilyBits d1 : lower) {
      if ((d1 & ~d0) == 0) fn(d0 | (d1 << shift));
    }
  }
}

std::vector<FamilyBits> EnumerateDownSets(int m) {
  std::vector<FamilyBits> out;
  ForEachDownSet(m, [&](FamilyBits f) { out.push_back(f); });
  return out;
}

FamilyBits PermuteGoods(FamilyBits family, int m, const std::vector<int>& perm) {
  CheckGoods(m);
  if (static_cast<int>(perm.size()) != m) {
    throw InvalidArgument("permutation length differs from m");
  }
  FamilyBits out = 0;
  for (FamilyBits rest = family & AllBundles(m); rest; rest &= rest - 1) {
    const int s = std::countr_zero(rest);
    int image = 0;
    for (int j = 0; j < m; ++j) {
      if ((s >> j) & 1) image |= 1 << perm[j];
    }
    out |= FamilyBits{1} << image;
  }
  return out;
}

FamilyBits CanonicalUnderGoodPermutations(FamilyBits family, int m) {
  CheckGoods(m);
  FamilyBits best = family;
  FamilyBits t = family;
  for (int k : SwapSequence(m)) {
    t = SwapGoods(t, k, k + 1);
    best = std::min(best, t);
  }
  return best;
}

bool IsCanonicalUnderGoodPermutations(FamilyBits family, int m) {
  CheckGoods(m);
  FamilyBits t = family;
  for (int k : SwapSequence(m)) {
    t = SwapGoods(t, k, k + 1);
    if (t < family) return false;
  }
  return true;
}

BigInt AllocationWeight(FamilyBits family, int n, int m) {
  CheckGoods(m);
  std::array<int, kMaxLatticeGoods + 1> by_size{};
  for (FamilyBits rest = family & AllBundles(m); rest; rest &= rest - 1) {
    ++by_size[std::popcount(static_cast<unsigned>(std::countr_zero(rest)))];
  }
  BigInt total = 0;
  for (int k = 0; k <= m; ++k) {
    if (by_size[k]) total += Power(n - 1, m - k) * by_size[k];
  }
  return total;
}

Valuation ZeroFamilyValuation(FamilyBits zeros, int m) {
  CheckGoods(m);
  if (!IsDownSet(zeros, m)) {
    throw InvalidArgument("zero family is not closed under subsets");
  }
  return Valuation::Explicit01FromPredicate(
      m, [&](Bundle b) { return !((zeros >> b.mask()) & 1); });
}

FamilyBits ZeroFamily(const Valuation& valuation) {
  const int m = valuation.num_goods();
  CheckGoods(m);
  const ValueTable table = ValueTable::Build(valuation);
  FamilyBits out = 0;
  for (std::uint64_t s = 0; s < table.keys().size(); ++s) {
    if (table.ValueOfKey(table.key(s)) == 0) out |= FamilyBits{1} << s;
  }
  return out;
}

}  // namespace qfair
