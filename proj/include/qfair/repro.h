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

// Named end-to-end checks. Each target runs a fixed, seeded experiment and
// reports PASS or FAIL with the quantities it measured.

#ifndef QFAIR_REPRO_H_
#define QFAIR_REPRO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "qfair/json_io.h"

namespace qfair {

struct ReproOptions {
  std::uint64_t seed = 0;
  int threads = 1;
};

struct ReproReport {
  std::string target;
  std::string title;
  bool pass = false;
  Json measured = Json::object();
};

struct ReproTarget {
  std::string name;
  std::string title;
};

const std::vector<ReproTarget>& ReproTargets();

// Throws InvalidArgument for unknown targets.
ReproReport RunRepro(const std::string& target, const ReproOptions& options = {});

// "PASS <target>: <title> <key=value ...>" on one line.
std::string ReproLine(const ReproReport& report);

}  // namespace qfair

#endif  // QFAIR_REPRO_H_
