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

#ifndef QFAIR_BUNDLE_H_
#define QFAIR_BUNDLE_H_

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace qfair {

inline constexpr int kMaxGoods = 63;

inline constexpr std::uint64_t FullMask(int m) {
  return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
}

// A set of goods over [0, m). Goods are 0-indexed here; file formats and the
// CLI use 1-indexed labels.
class Bundle {
 public:
  constexpr Bundle() = default;
  constexpr explicit Bundle(std::uint64_t mask) : mask_(mask) {}

  // 0-indexed goods.
  static Bundle Of(std::initializer_list<int> goods);
  static Bundle FromGoods(const std::vector<int>& goods);
  // 1-indexed labels, as read from files.
  static Bundle FromLabels(const std::vector<int>& labels, int m);
  static constexpr Bundle Full(int m) { return Bundle(FullMask(m)); }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool contains(int good) const { return (mask_ >> good) & 1; }
  constexpr bool IsSubsetOf(Bundle other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr bool Intersects(Bundle other) const {
    return (mask_ & other.mask_) != 0;
  }
  constexpr bool FitsIn(int m) const { return (mask_ & ~FullMask(m)) == 0; }

  constexpr Bundle With(int good) const {
    return Bundle(mask_ | (std::uint64_t{1} << good));
  }
  constexpr Bundle Without(int good) const {
    return Bundle(mask_ & ~(std::uint64_t{1} << good));
  }
  constexpr Bundle operator|(Bundle o) const { return Bundle(mask_ | o.mask_); }
  constexpr Bundle operator&(Bundle o) const { return Bundle(mask_ & o.mask_); }
  constexpr Bundle Minus(Bundle o) const { return Bundle(mask_ & ~o.mask_); }

  std::vector<int> Goods() const;
  std::vector<int> Labels() const;
  // "{1,2}" with 1-indexed labels.
  std::string ToString() const;

  constexpr auto operator<=>(const Bundle&) const = default;

 private:
  std::uint64_t mask_ = 0;
};

// n pairwise-disjoint bundles that together cover [m].
struct Allocation {
  std::vector<Bundle> bundles;

  int num_agents() const { return static_cast<int>(bundles.size()); }
  const Bundle& operator[](int agent) const { return bundles[agent]; }
  bool operator==(const Allocation&) const = default;

  // Throws InvalidArgument when bundles overlap, leave a good unallocated, or
  // reach outside [m].
  void Validate(int m) const;
  // Base-n digit string (good 1 most significant) decoded to an allocation.
  static Allocation FromDigits(const std::vector<int>& agent_of_good, int n);
  std::vector<int> AgentOfGood(int m) const;
};

}  // namespace qfair

#endif  // QFAIR_BUNDLE_H_
