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

#include <algorithm>
#include <atomic>
#include <bit>
#include <bitset>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "qfair/errors.h"
#include "qfair/quantile.h"

namespace qfair {
namespace {

constexpr int kMaxSearchGoods = 4;
// 3^4 allocations at the largest built-in size.
using Coverage = std::bitset<128>;

std::string HexMask(std::uint64_t mask, int m) {
  const int width = std::max(1, (m + 3) / 4);
  std::ostringstream out;
  out << std::hex;
  out.width(width);
  out.fill('0');
  out << mask;
  return out.str();
}

std::string Var(int agent, std::uint64_t mask, int m) {
  return "x_" + std::to_string(agent + 1) + "_" + HexMask(mask, m);
}

class ProfileSearch {
 public:
  ProfileSearch(const SearchSpec& spec, SearchResult& result)
      : n_(spec.n), m_(spec.m), budget_(result.budget), result_(result) {
    if (spec.time_limit > 0) {
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(spec.time_limit));
    }
    for (FamilyBits f : EnumerateDownSets(m_)) {
      if (AllocationWeight(f, n_, m_) <= budget_) candidates_.push_back(f);
    }
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
      if (!spec.symmetry_breaking || IsCanonicalUnderGoodPermutations(candidates_[c], m_)) {
        roots_.push_back(c);
      }
    }
    allocations_ = PowerU64(n_, m_);
    bundles_.assign(allocations_, std::vector<std::uint64_t>(n_));
    for (std::uint64_t a = 0; a < allocations_; ++a) {
      const Allocation alloc = AllocationAtIndex(a, n_, m_);
      for (int i = 0; i < n_; ++i) bundles_[a][i] = alloc[i].mask();
    }
    cover_.assign(n_, std::vector<Coverage>(candidates_.size()));
    for (int i = 0; i < n_; ++i) {
      for (std::size_t c = 0; c < candidates_.size(); ++c) {
        for (std::uint64_t a = 0; a < allocations_; ++a) {
          if ((candidates_[c] >> bundles_[a][i]) & 1) cover_[i][c].set(a);
        }
      }
    }
    result_.candidate_families = candidates_.size();
    result_.root_families = roots_.size();
  }

  void Run(int threads) {
    best_root_ = roots_.size();
    auto work = [&](std::size_t start, std::size_t stride) {
      std::uint64_t nodes = 0;
      try {
        for (std::size_t r = start; r < roots_.size() && r < best_root_.load(); r += stride) {
          std::vector<FamilyBits> chosen = {candidates_[roots_[r]]};
          if (Recurse(1, cover_[0][roots_[r]], chosen, nodes)) {
            Record(r, chosen);
            break;
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (!error_) error_ = std::current_exception();
      }
      nodes_ += nodes;
    };
    if (threads <= 1) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
      for (std::thread& t : pool) t.join();
    }
    if (error_) std::rethrow_exception(error_);
    result_.nodes = nodes_.load();
    if (witness_) result_.counterexample = *witness_;
  }

 private:
  bool Recurse(int agent, const Coverage& covered, std::vector<FamilyBits>& chosen,
               std::uint64_t& nodes) {
    ++nodes;
    if (deadline_ && (nodes & 1023) == 0 &&
        std::chrono::steady_clock::now() > *deadline_) {
      throw BudgetExceeded("search time limit reached");
    }
    if (agent == n_ - 1) {
      // The last agent must veto every allocation still uncovered; the
      // smallest family doing so is the down-closure of those bundles.
      FamilyBits forced = 0;
      for (std::uint64_t a = 0; a < allocations_; ++a) {
        if (!covered.test(a)) forced |= FamilyBits{1} << bundles_[a][agent];
      }
      forced = DownClosure(forced, m_);
      if (AllocationWeight(forced, n_, m_) > budget_) return false;
      chosen.push_back(forced);
      return true;
    }
    for (std::size_t c = 0; c < candidates_.size(); ++c) {
      chosen.push_back(candidates_[c]);
      if (Recurse(agent + 1, covered | cover_[agent][c], chosen, nodes)) return true;
      chosen.pop_back();
    }
    return false;
  }

  void Record(std::size_t root, const std::vector<FamilyBits>& chosen) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (root < best_root_.load()) {
      best_root_ = root;
      witness_ = chosen;
    }
  }

  const int n_;
  const int m_;
  const BigInt budget_;
  SearchResult& result_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::vector<FamilyBits> candidates_;
  std::vector<std::size_t> roots_;
  std::uint64_t allocations_ = 0;
  std::vector<std::vector<std::uint64_t>> bundles_;
  std::vector<std::vector<Coverage>> cover_;
  std::atomic<std::size_t> best_root_{0};
  std::atomic<std::uint64_t> nodes_{0};
  std::mutex mutex_;
  std::optional<std::vector<FamilyBits>> witness_;
  std::exception_ptr error_;
};

void WriteTerms(std::ostream& out, const std::vector<std::pair<BigInt, std::string>>& terms) {
  bool first = true;
  int on_line = 0;
  for (const auto& [coef, var] : terms) {
    if (coef == 0) continue;
    if (on_line == 8) {
      out << "\n  ";
      on_line = 0;
    }
    if (!first) out << (coef < 0 ? " - " : " + ");
    else if (coef < 0) out << "- ";
    const BigInt mag = abs(coef);
    if (mag != 1) out << mag << " ";
    out << var;
    first = false;
    ++on_line;
  }
}

bool IsNumber(const std::string& token) {
  if (token.empty()) return false;
  std::size_t i = (token[0] == '-' || token[0] == '+') ? 1 : 0;
  if (i == token.size()) return false;
  return std::all_of(token.begin() + i, token.end(), [](char c) { return std::isdigit(c); });
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

LpRow ParseRow(const std::string& name, const std::vector<std::string>& tokens) {
  LpRow row;
  row.name = name;
  BigInt sign = 1;
  std::optional<BigInt> coef;
  std::size_t i = 0;
  for (; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>") break;
    if (t == "+") {
      sign = 1;
    } else if (t == "-") {
      sign = -1;
    } else if (IsNumber(t)) {
      coef = BigInt(t[0] == '+' ? t.substr(1) : t);
    } else {
      row.terms.emplace_back(t, sign * coef.value_or(1));
      sign = 1;
      coef.reset();
    }
  }
  if (i + 1 >= tokens.size()) throw InvalidArgument("LP row " + name + " has no right-hand side");
  row.sense = tokens[i] == "=<" ? "<=" : tokens[i] == "=>" ? ">=" : tokens[i];
  std::string rhs;
  for (std::size_t j = i + 1; j < tokens.size(); ++j) rhs += tokens[j];
  if (!IsNumber(rhs)) throw InvalidArgument("LP row " + name + " has a bad right-hand side");
  row.rhs = BigInt(rhs[0] == '+' ? rhs.substr(1) : rhs);
  return row;
}

}  // namespace

BigInt CriticalBudget(int n, int m) {
  if (n < 1 || m < n - 1) throw InvalidArgument("critical budget needs n >= 1 and m >= n - 1");
  return Power(n, m - n + 1) * Power(n - 1, n - 1) - 1;
}

BigInt SearchSpec::ResolvedBudget() const {
  return budget ? *budget : CriticalBudget(n, m);
}

SearchResult SearchCounterexample(const SearchSpec& spec) {
  if (spec.n < 2 || spec.m < 1) throw InvalidArgument("search needs n >= 2 and m >= 1");
  if (spec.n > 3 || spec.m > kMaxSearchGoods) {
    throw BudgetExceeded("built-in search covers n <= 3 and m <= 4; use `lab export` "
                         "and an external IP solver for n=" + std::to_string(spec.n) +
                         ", m=" + std::to_string(spec.m));
  }
  SearchResult result;
  result.n = spec.n;
  result.m = spec.m;
  result.budget = spec.ResolvedBudget();
  result.symmetry_breaking = spec.symmetry_breaking;
  if (result.budget < 0) throw InvalidArgument("budget must be nonnegative");
  ProfileSearch search(spec, result);
  search.Run(spec.threads);
  return result;
}

Instance ProfileInstance(const std::vector<FamilyBits>& zeros, int m) {
  Instance inst;
  inst.n = static_cast<int>(zeros.size());
  inst.m = m;
  for (FamilyBits f : zeros) inst.valuations.push_back(ZeroFamilyValuation(f, m));
  return inst;
}

LpCounts ExpectedLpCounts(int n, int m) {
  LpCounts c;
  c.variables = static_cast<std::uint64_t>(n) << m;
  c.monotonicity_rows = static_cast<std::uint64_t>(n) * m * (std::uint64_t{1} << (m - 1));
  c.threshold_rows = n;
  c.allocation_rows = PowerU64(n, m);
  return c;
}

void ExportIp(const SearchSpec& spec, std::ostream& out) {
  const int n = spec.n;
  const int m = spec.m;
  if (n < 1 || m < 1 || m > 30) throw InvalidArgument("export needs n >= 1 and 1 <= m <= 30");
  const BigInt rows = Power(n, m);
  if (rows > kMaxExportRows || (static_cast<std::uint64_t>(n) << m) > kMaxExportRows) {
    throw BudgetExceeded("model would have " + rows.str() + " allocation rows, limit " +
                         std::to_string(kMaxExportRows));
  }
  const BigInt budget = spec.ResolvedBudget();
  const std::uint64_t subsets = std::uint64_t{1} << m;

  out << "\\ Quantile-share threshold model n=" << n << " m=" << m << " B=" << budget << "\n";
  out << "\\ x_<agent>_<mask> = 1 when the agent values the bundle at 1\n";
  out << "Minimize\n obj: 0 " << Var(0, 0, m) << "\n";
  out << "Subject To\n";
  for (int i = 0; i < n; ++i) {
    for (std::uint64_t s = 1; s < subsets; ++s) {
      for (int j = 0; j < m; ++j) {
        if (!((s >> j) & 1)) continue;
        out << " mono_" << i + 1 << "_" << HexMask(s, m) << "_" << j + 1 << ": "
            << Var(i, s, m) << " - " << Var(i, s & ~(std::uint64_t{1} << j), m) << " >= 0\n";
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    // sum_S w_S (1 - x_S) <= B, with sum_S w_S = n^m.
    std::vector<std::pair<BigInt, std::string>> terms;
    for (std::uint64_t s = 0; s < subsets; ++s) {
      terms.emplace_back(Power(n - 1, m - std::popcount(s)), Var(i, s, m));
    }
    out << " thr_" << i + 1 << ": ";
    WriteTerms(out, terms);
    out << " >= " << rows - budget << "\n";
  }
  const std::uint64_t count = rows.convert_to<std::uint64_t>();
  std::vector<int> digits(m, 0);
  for (std::uint64_t a = 0; a < count; ++a) {
    std::vector<std::uint64_t> masks(n, 0);
    for (int j = 0; j < m; ++j) masks[digits[j]] |= std::uint64_t{1} << j;
    std::vector<std::pair<BigInt, std::string>> terms;
    for (int i = 0; i < n; ++i) terms.emplace_back(1, Var(i, masks[i], m));
    out << " alloc_" << a << ": ";
    WriteTerms(out, terms);
    out << " <= " << n - 1 << "\n";
    for (int j = m - 1; j >= 0; --j) {
      if (++digits[j] < n) break;
      digits[j] = 0;
    }
  }
  out << "Binary\n";
  for (int i = 0; i < n; ++i) {
    for (std::uint64_t s = 0; s < subsets; ++s) out << " " << Var(i, s, m) << "\n";
  }
  out << "End\n";
}

void ExportIpToFile(const SearchSpec& spec, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  ExportIp(spec, file);
  if (!file) throw IoError("failed writing " + path);
}

LpCounts LpModel::Counts() const {
  LpCounts c;
  c.variables = binaries.size();
  for (const LpRow& row : rows) {
    if (row.name.rfind("mono_", 0) == 0) ++c.monotonicity_rows;
    if (row.name.rfind("thr_", 0) == 0) ++c.threshold_rows;
    if (row.name.rfind("alloc_", 0) == 0) ++c.allocation_rows;
  }
  return c;
}

bool LpModel::Satisfied(const std::map<std::string, int>& assignment) const {
  for (const LpRow& row : rows) {
    BigInt lhs = 0;
    for (const auto& [var, coef] : row.terms) {
      const auto it = assignment.find(var);
      if (it != assignment.end()) lhs += coef * it->second;
    }
    const bool ok = row.sense == "<=" ? lhs <= row.rhs
                    : row.sense == ">=" ? lhs >= row.rhs
                                        : lhs == row.rhs;
    if (!ok) return false;
  }
  return true;
}

LpModel ParseLp(std::istream& in) {
  enum class Section { kNone, kObjective, kConstraints, kBinary, kEnd };
  LpModel model;
  Section section = Section::kNone;
  std::string pending_name;
  std::vector<std::string> pending;
  auto flush = [&] {
    if (!pending_name.empty()) model.rows.push_back(ParseRow(pending_name, pending));
    pending_name.clear();
    pending.clear();
  };
  std::string line;
  while (std::getline(in, line)) {
    if (const auto cut = line.find('\\'); cut != std::string::npos) line.resize(cut);
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string t; words >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    const std::string head = Lower(tokens[0]);
    const std::string two = tokens.size() > 1 ? head + " " + Lower(tokens[1]) : head;
    if (head == "minimize" || head == "maximize" || head == "min" || head == "max") {
      section = Section::kObjective;
      continue;
    }
    if (two == "subject to" || head == "st" || head == "s.t.") {
      section = Section::kConstraints;
      continue;
    }
    if (head == "binary" || head == "binaries" || head == "bin") {
      flush();
      section = Section::kBinary;
      continue;
    }
    if (head == "end") {
      flush();
      section = Section::kEnd;
      continue;
    }
    switch (section) {
      case Section::kConstraints:
        for (const std::string& t : tokens) {
          if (t.size() > 1 && t.back() == ':') {
            flush();
            pending_name = t.substr(0, t.size() - 1);
          } else {
            if (pending_name.empty()) throw InvalidArgument("LP constraint without a name");
            pending.push_back(t);
          }
        }
        break;
      case Section::kBinary:
        for (const std::string& t : tokens) model.binaries.push_back(t);
        break;
      case Section::kObjective:
        break;
      default:
        throw InvalidArgument("LP content outside any section: " + line);
    }
  }
  if (section != Section::kEnd) throw InvalidArgument("LP file does not end with End");
  return model;
}

std::map<std::string, int> LpAssignment(const std::vector<FamilyBits>& zeros, int m) {
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
      out[Var(static_cast<int>(i), s, m)] = ((zeros[i] >> s) & 1) ? 0 : 1;
    }
  }
  return out;
}

std::vector<std::string> NamedInstanceNames() {
  return {"prop3", "unequal_bundles", "mms_gap", "identical_goods", "single_chore"};
}

Instance NamedInstance(const std::string& name, const NamedInstanceParams& params) {
  const int n = params.n;
  const int m = params.m;
  if (name == "prop3" || name == "unequal_bundles") {
    if (n < 2 || m < n - 1 || m > kMaxGoods) {
      throw InvalidArgument(name + " needs n >= 2 and n - 1 <= m <= 63");
    }
    if (name == "unequal_bundles" && params.epsilon <= 0) {
      throw InvalidArgument("unequal_bundles needs epsilon > 0");
    }
    const Rational rest = name == "prop3" ? Rational(0) : params.epsilon;
    std::vector<Rational> w(m, rest);
    for (int j = 0; j < n - 1; ++j) w[j] = 1;
    return Instance::Identical(n, Valuation::Additive(std::move(w)));
  }
  if (name == "mms_gap") {
    auto pairs = [](Bundle a, Bundle b) {
      return Valuation::Explicit01FromPredicate(
          4, [=](Bundle x) { return x.size() >= 3 || x == a || x == b; });
    };
    Instance inst;
    inst.n = 2;
    inst.m = 4;
    inst.valuations = {pairs(Bundle::Of({0, 1}), Bundle::Of({2, 3})),
                       pairs(Bundle::Of({0, 2}), Bundle::Of({1, 3}))};
    return inst;
  }
  if (name == "identical_goods") {
    if (n < 1 || m < 0 || m > kMaxGoods) throw InvalidArgument("identical_goods needs n >= 1");
    return Instance::Identical(n, Valuation::Additive(std::vector<Rational>(m, 1)));
  }
  if (name == "single_chore") {
    if (n < 1) throw InvalidArgument("single_chore needs n >= 1");
    return Instance::Identical(n, Valuation::Table(1, {0, -1}), ItemKind::kChores);
  }
  throw InvalidArgument("unknown instance '" + name + "'");
}

EqualSizeGapReport EqualSizeGap(int n, int m, const Rational& epsilon, int slack,
                                const SearchOptions& options) {
  if (n < 2 || m < n - 1 || epsilon <= 0 || slack < 0) {
    throw InvalidArgument("equal-size report needs 2 <= n <= m + 1, epsilon > 0, slack >= 0");
  }
  NamedInstanceParams params;
  params.n = n;
  params.m = m;
  params.epsilon = epsilon;
  const Instance inst = NamedInstance("unequal_bundles", params);
  const std::uint64_t count = AllocationCount(n, m, options.budget);
  const SatisfactionTable table = SatisfactionTable::Build(inst.valuations[0], n);

  EqualSizeGapReport report;
  report.n = n;
  report.m = m;
  report.epsilon = epsilon;
  report.slack = slack;

  // |size * n - m| <= slack * n.
  std::optional<std::uint64_t> best;
  std::uint64_t best_index = 0;
  std::vector<int> digits(m, 0);
  for (std::uint64_t a = 0; a < count; ++a) {
    std::vector<std::uint64_t> masks(n, 0);
    for (int j = 0; j < m; ++j) masks[digits[j]] |= std::uint64_t{1} << j;
    bool balanced = true;
    std::uint64_t worst = table.denominator();
    for (int i = 0; i < n && balanced; ++i) {
      const std::int64_t off = static_cast<std::int64_t>(std::popcount(masks[i])) * n - m;
      balanced = std::abs(off) <= static_cast<std::int64_t>(slack) * n;
      worst = std::min(worst, table.numerator(masks[i]));
    }
    if (balanced && (!best || worst > *best)) {
      best = worst;
      best_index = a;
    }
    for (int j = m - 1; j >= 0; --j) {
      if (++digits[j] < n) break;
      digits[j] = 0;
    }
  }
  if (best) {
    report.equal_size_best = Rational(*best) / Rational(table.denominator());
    report.equal_size_witness = AllocationAtIndex(best_index, n, m);
  }

  const MaximinResult maximin = MaximinSatisfactionAllocation(inst, options);
  report.unconstrained = maximin.q_star;
  report.unconstrained_witness = maximin.allocation;

  std::vector<Bundle> bundles(n);
  for (int j = n - 1; j < m; ++j) bundles[0] = bundles[0].With(j);
  for (int i = 1; i < n; ++i) bundles[i] = Bundle::Of({i - 1});
  report.concentrated_allocation = Allocation{bundles};
  report.concentrated = MakeAllocationReport(inst, report.concentrated_allocation, 1)
                            .min_satisfaction;
  return report;
}

}  // namespace qfair
