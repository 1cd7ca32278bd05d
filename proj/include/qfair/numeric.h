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

#ifndef QFAIR_NUMERIC_H_
#define QFAIR_NUMERIC_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace qfair {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
// 100 decimal digits; every comparison against a closed-form bound goes
// through CompareWithin() with an explicit tolerance.
using HighPrecision = boost::multiprecision::mpfr_float_100;

// Parses "p/q", "p" or "-p/q". Throws InvalidArgument on anything else,
// including decimal notation.
Rational ParseRational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string FormatRational(const Rational& value);
double ToDouble(const Rational& value);
HighPrecision ToHighPrecision(const Rational& value);

BigInt Power(std::int64_t base, int exponent);
// Binomial coefficient; zero when k < 0, n < 0 or k > n.
BigInt Binomial(std::int64_t n, std::int64_t k);
// n^m when it fits in 64 bits; throws BudgetExceeded otherwise.
std::uint64_t PowerU64(std::uint64_t base, int exponent);

// Three-valued outcome of a comparison carried out at finite precision.
enum class Tri { kFalse, kTrue, kWithinPrecision };

// kTrue when lhs >= rhs + tolerance, kFalse when lhs <= rhs - tolerance,
// kWithinPrecision in between.
Tri CompareAtLeast(const HighPrecision& lhs, const HighPrecision& rhs,
                   const HighPrecision& tolerance);
std::string TriName(Tri t);
std::string FormatHighPrecision(const HighPrecision& value, int digits = 20);

}  // namespace qfair

#endif  // QFAIR_NUMERIC_H_
