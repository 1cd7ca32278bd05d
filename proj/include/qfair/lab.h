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

// Threshold experiments: searching for monotone 0/1 profiles in which every
// agent has few zero-valued allocations yet no allocation satisfies all
// agents, the equivalent integer program in LP format, and named instances.

#ifndef QFAIR_LAB_H_
#define QFAIR_LAB_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qfair/allocate.h"
#include "qfair/boolean_lattice.h"
#include "qfair/instance.h"
#include "qfair/numeric.h"

namespace qfair {

// n^(m-n+1) * (n-1)^(n-1) - 1. Throws InvalidArgument unless n >= 1 and
// m >= n - 1.
BigInt CriticalBudget(int n, int m);

struct SearchSpec {
  int n = 0;
  int m = 0;
  // Per-agent cap on zero-valued allocations; CriticalBudget(n, m) if unset.
  std::optional<BigInt> budget;
  bool symmetry_breaking = true;
  // Wall-clock limit in seconds; 0 for none.
  double time_limit = 0;
  int threads = 1;

  BigInt ResolvedBudget() const;
};

struct SearchResult {
  int n = 0;
  int m = 0;
  BigInt budget;
  bool symmetry_breaking = true;
  // Zero families, one per agent, when a counterexample exists.
  std::optional<std::vector<FamilyBits>> counterexample;
  // Certificate data: how many monotone families fit the budget, how many
  // of those open the search after symmetry reduction, and nodes visited.
  std::uint64_t candidate_families = 0;
  std::uint64_t root_families = 0;
  std::uint64_t nodes = 0;
};

// Exhaustive search over profiles of down-sets. Supports n = 2, 3 with
// m <= 4; larger sizes throw BudgetExceeded pointing at the LP export. The
// time limit also throws BudgetExceeded.
SearchResult SearchCounterexample(const SearchSpec& spec);

// Profile of monotone 0/1 valuations that are 0 exactly on the families.
Instance ProfileInstance(const std::vector<FamilyBits>& zeros, int m);

inline constexpr std::uint64_t kMaxExportRows = 20000000;

struct LpCounts {
  std::uint64_t variables = 0;
  std::uint64_t monotonicity_rows = 0;
  std::uint64_t threshold_rows = 0;
  std::uint64_t allocation_rows = 0;
  bool operator==(const LpCounts&) const = default;
};

// n 2^m, n sum_k k C(m, k), n and n^m.
LpCounts ExpectedLpCounts(int n, int m);

// Writes the integer program in LP format. Variables x_<agent>_<mask> use
// 1-indexed agents and zero-padded hex masks; x = 1 means value 1. Throws
// BudgetExceeded when n^m exceeds kMaxExportRows.
void ExportIp(const SearchSpec& spec, std::ostream& out);
void ExportIpToFile(const SearchSpec& spec, const std::string& path);

struct LpRow {
  std::string name;
  std::vector<std::pair<std::string, BigInt>> terms;
  std::string sense;  // "<=", ">=" or "="
  BigInt rhs;
};

struct LpModel {
  std::vector<LpRow> rows;
  std::vector<std::string> binaries;

  LpCounts Counts() const;
  // Whether the 0/1 assignment satisfies every row; missing variables are 0.
  bool Satisfied(const std::map<std::string, int>& assignment) const;
};

// Reads the subset of LP format that ExportIp writes. Throws
// InvalidArgument on malformed input.
LpModel ParseLp(std::istream& in);

// Assignment x_<agent>_<mask> = 1 off the zero families.
std::map<std::string, int> LpAssignment(const std::vector<FamilyBits>& zeros, int m);

// "prop3", "unequal_bundles", "mms_gap", "identical_goods", "single_chore".
// Parameters not used by an instance are ignored. Throws InvalidArgument
// for unknown names or bad parameters.
struct NamedInstanceParams {
  int n = 3;
  int m = 6;
  Rational epsilon = Rational(1, 100);
};
Instance NamedInstance(const std::string& name, const NamedInstanceParams& params = {});
std::vector<std::string> NamedInstanceNames();

struct EqualSizeGapReport {
  int n = 0;
  int m = 0;
  Rational epsilon;
  int slack = 0;
  // Best least satisfaction over allocations with every bundle size within
  // slack of m/n.
  Rational equal_size_best;
  std::optional<Allocation> equal_size_witness;
  Rational unconstrained;
  Allocation unconstrained_witness;
  // All epsilon goods to agent 1, one unit good to each other agent.
  Rational concentrated;
  Allocation concentrated_allocation;
  bool gap() const { return equal_size_best < unconstrained; }
};

// Scans the unequal_bundles instance. Throws InvalidArgument unless
// 2 <= n <= m + 1 and 0 < epsilon.
EqualSizeGapReport EqualSizeGap(int n, int m, const Rational& epsilon, int slack,
                                const SearchOptions& options = {});

}  // namespace qfair

#endif  // QFAIR_LAB_H_
