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

#ifndef QFAIR_INSTANCE_H_
#define QFAIR_INSTANCE_H_

#include <optional>
#include <string>
#include <vector>

#include "qfair/bundle.h"
#include "qfair/matroid.h"
#include "qfair/valuation.h"

namespace qfair {

// Goods have monotone nondecreasing nonnegative valuations; chores have
// nonincreasing nonpositive ones.
enum class ItemKind { kGoods, kChores };

struct Instance {
  int n = 0;
  int m = 0;
  ItemKind kind = ItemKind::kGoods;
  std::vector<Valuation> valuations;

  // n copies of one valuation.
  static Instance Identical(int n, const Valuation& v,
                            ItemKind kind = ItemKind::kGoods);
  // Throws InvalidArgument on shape errors (wrong count, mismatched m).
  void CheckShape() const;
};

struct Violation {
  // -1 when the violation is not tied to an agent.
  int agent = -1;
  std::string kind;
  std::string detail;
  std::optional<Bundle> smaller;
  std::optional<Bundle> larger;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Exhaustive monotonicity checks run for m <= exact cap; matroid axiom
// checks (unit increase, submodularity, basis exchange) for ground <= 12.
ValidationReport Validate(const Instance& instance);
ValidationReport ValidateValuation(const Valuation& valuation,
                                   ItemKind kind = ItemKind::kGoods,
                                   int agent = -1);
ValidationReport ValidateMatroid(const Matroid& matroid, int agent = -1);

}  // namespace qfair

#endif  // QFAIR_INSTANCE_H_
