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

#ifndef QFAIR_ERRORS_H_
#define QFAIR_ERRORS_H_

#include <stdexcept>
#include <string>

namespace qfair {

// Malformed input: out-of-range bundles, bad rationals, unsupported
// valuation variants, broken preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// q outside (0, 1] and similar mathematical domain violations.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A size cap or enumeration budget would be exceeded. Callers that can
// escalate (sampling, LP export) say so in the message.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Files that cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qfair

#endif  // QFAIR_ERRORS_H_
