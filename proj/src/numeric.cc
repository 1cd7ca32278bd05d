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

#include "qfair/numeric.h"

#include <cctype>
#include <limits>
#include <sstream>

#include "qfair/errors.h"

namespace qfair {
namespace {

bool IsInteger(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  const auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!IsInteger(num) || !IsInteger(den) || den[0] == '-' || den[0] == '+') {
    throw InvalidArgument("not an exact rational: '" + std::string(text) + "'");
  }
  std::string num_str(num.front() == '+' ? num.substr(1) : num);
  BigInt p(num_str);
  BigInt q{std::string(den)};
  if (q == 0) {
    throw InvalidArgument("zero denominator: '" + std::string(text) + "'");
  }
  return Rational(p, q);
}

std::string FormatRational(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1) {
    return boost::multiprecision::numerator(value).str();
  }
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

double ToDouble(const Rational& value) { return value.convert_to<double>(); }

HighPrecision ToHighPrecision(const Rational& value) {
  return HighPrecision(value);
}

BigInt Power(std::int64_t base, int exponent) {
  if (exponent < 0) throw InvalidArgument("negative exponent");
  return boost::multiprecision::pow(BigInt(base),
                                    static_cast<unsigned>(exponent));
}

BigInt Binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

std::uint64_t PowerU64(std::uint64_t base, int exponent) {
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 &&
        result > std::numeric_limits<std::uint64_t>::max() / base) {
      throw BudgetExceeded(std::to_string(base) + "^" +
                           std::to_string(exponent) +
                           " does not fit in 64 bits");
    }
    result *= base;
  }
  return result;
}

Tri CompareAtLeast(const HighPrecision& lhs, const HighPrecision& rhs,
                   const HighPrecision& tolerance) {
  const HighPrecision diff = lhs - rhs;
  if (diff >= tolerance) return Tri::kTrue;
  if (diff <= -tolerance) return Tri::kFalse;
  return Tri::kWithinPrecision;
}

std::string TriName(Tri t) {
  switch (t) {
    case Tri::kTrue:
      return "true";
    case Tri::kFalse:
      return "false";
    case Tri::kWithinPrecision:
      return "within_precision";
  }
  return "unknown";
}

std::string FormatHighPrecision(const HighPrecision& value, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << value;
  return os.str();
}

}  // namespace qfair
