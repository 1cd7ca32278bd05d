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

#include <gtest/gtest.h>

#include <set>

#include "qfair/errors.h"

namespace qfair {
namespace {

TEST(ReproTest, TargetsAreUnique) {
  std::set<std::string> names;
  for (const ReproTarget& t : ReproTargets()) {
    EXPECT_TRUE(names.insert(t.name).second) << t.name;
    EXPECT_FALSE(t.title.empty());
  }
  EXPECT_EQ(names.size(), 15u);
  EXPECT_TRUE(names.count("prop3"));
  EXPECT_TRUE(names.count("corollary1"));
  EXPECT_TRUE(names.count("lemma9"));
}

TEST(ReproTest, QuickTargets) {
  const ReproReport prop3 = RunRepro("prop3");
  EXPECT_TRUE(prop3.pass);
  EXPECT_EQ(prop3.measured["q_star"], "4/9");
  EXPECT_EQ(ReproLine(prop3).substr(0, 11), "PASS prop3:");

  const ReproReport gap = RunRepro("mms_gap");
  EXPECT_TRUE(gap.pass);
  EXPECT_EQ(gap.measured["allocations_with_a_zero"], 16);

  const ReproReport chores = RunRepro("chores");
  EXPECT_TRUE(chores.pass);
  EXPECT_EQ(chores.measured["per_n"].size(), 6u);
}

TEST(ReproTest, SeedIsReproducible) {
  const ReproReport a = RunRepro("round_robin", {.seed = 4});
  const ReproReport b = RunRepro("round_robin", {.seed = 4});
  EXPECT_EQ(a.measured, b.measured);
  EXPECT_TRUE(a.pass);
}

TEST(ReproTest, UnknownTarget) {
  EXPECT_THROW(RunRepro("prop99"), InvalidArgument);
}

}  // namespace
}  // namespace qfair
