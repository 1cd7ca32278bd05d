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

// JSON encodings of instances, valuations, matroids and allocations. Goods,
// vertices and agents are 1-indexed on the wire.

#ifndef QFAIR_JSON_IO_H_
#define QFAIR_JSON_IO_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "qfair/bundle.h"
#include "qfair/instance.h"
#include "qfair/matroid.h"
#include "qfair/numeric.h"
#include "qfair/valuation.h"

namespace qfair {

using Json = nlohmann::ordered_json;

Rational RationalFromJson(const Json& j);
// "p/q" string.
Json RationalToJson(const Rational& r);
// {"<key>": "p/q", "<key>_approx": double}
void PutRational(Json& out, const std::string& key, const Rational& r);

Bundle BundleFromJson(const Json& j, int m);
Json BundleToJson(Bundle b);
Json BundlesToJson(const std::vector<Bundle>& bundles);
Json AllocationToJson(const Allocation& a);
Allocation AllocationFromJson(const Json& j, int m);

Matroid MatroidFromJson(const Json& j);
Json MatroidToJson(const Matroid& matroid);

// `m` is the instance's good count; matroid valuations infer it.
Valuation ValuationFromJson(const Json& j, int m);
Json ValuationToJson(const Valuation& v);

Instance InstanceFromJson(const Json& j);
Json InstanceToJson(const Instance& instance);

Instance ReadInstanceFile(const std::string& path);
Json ReadJsonFile(const std::string& path);

}  // namespace qfair

#endif  // QFAIR_JSON_IO_H_
