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

#include "qfair/json_io.h"

#include <fstream>
#include <map>
#include <sstream>

#include "qfair/errors.h"

namespace qfair {
namespace {

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

int IntField(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_number_integer()) {
    throw InvalidArgument(std::string("field '") + key +
                          "' must be an integer");
  }
  return v.get<int>();
}

std::vector<Rational> RationalList(const Json& j) {
  if (!j.is_array()) throw InvalidArgument("expected a list of rationals");
  std::vector<Rational> out;
  for (const Json& x : j) out.push_back(RationalFromJson(x));
  return out;
}

std::vector<Bundle> BundleList(const Json& j, int m) {
  if (!j.is_array()) throw InvalidArgument("expected a list of good lists");
  std::vector<Bundle> out;
  for (const Json& x : j) out.push_back(BundleFromJson(x, m));
  return out;
}

// "" for the empty bundle, "1,3" otherwise.
std::string TableKey(Bundle b) {
  std::string out;
  for (int label : b.Labels()) {
    if (!out.empty()) out += ",";
    out += std::to_string(label);
  }
  return out;
}

Bundle ParseTableKey(const std::string& key, int m) {
  std::vector<int> labels;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      std::size_t used = 0;
      labels.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw InvalidArgument("bad table key '" + key + "'");
    }
  }
  return Bundle::FromLabels(labels, m);
}

}  // namespace

Rational RationalFromJson(const Json& j) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Rational(j.get<std::uint64_t>())
                                  : Rational(j.get<std::int64_t>());
  }
  if (j.is_string()) return ParseRational(j.get<std::string>());
  throw InvalidArgument("rationals are integers or \"p/q\" strings, got " +
                        j.dump());
}

Json RationalToJson(const Rational& r) { return FormatRational(r); }

void PutRational(Json& out, const std::string& key, const Rational& r) {
  out[key] = FormatRational(r);
  out[key + "_approx"] = ToDouble(r);
}

Bundle BundleFromJson(const Json& j, int m) {
  if (!j.is_array()) throw InvalidArgument("a bundle is a list of goods");
  std::vector<int> labels;
  for (const Json& x : j) {
    if (!x.is_number_integer()) {
      throw InvalidArgument("good labels are integers");
    }
    labels.push_back(x.get<int>());
  }
  return Bundle::FromLabels(labels, m);
}

Json BundleToJson(Bundle b) { return Json(b.Labels()); }

Json BundlesToJson(const std::vector<Bundle>& bundles) {
  Json out = Json::array();
  for (const Bundle& b : bundles) out.push_back(BundleToJson(b));
  return out;
}

Json AllocationToJson(const Allocation& a) { return BundlesToJson(a.bundles); }

Allocation AllocationFromJson(const Json& j, int m) {
  Allocation a;
  a.bundles = BundleList(j, m);
  return a;
}

Matroid MatroidFromJson(const Json& j) {
  const std::string type = Field(j, "type").get<std::string>();
  if (type == "uniform") {
    return Matroid::Uniform(IntField(j, "ground"), IntField(j, "rank"));
  }
  if (type == "partition") {
    const int ground = IntField(j, "ground");
    std::vector<int> caps = Field(j, "capacities").get<std::vector<int>>();
    return Matroid::Partition(ground, BundleList(Field(j, "blocks"), ground),
                              std::move(caps));
  }
  if (type == "graphic") {
    const int vertices = IntField(j, "vertices");
    std::vector<std::pair<int, int>> edges;
    for (const Json& e : Field(j, "edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw InvalidArgument("graphic edges are [u, v] pairs");
      }
      edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
    }
    return Matroid::Graphic(vertices, std::move(edges));
  }
  if (type == "explicit_bases") {
    const int ground = IntField(j, "ground");
    return Matroid::ExplicitBases(ground, BundleList(Field(j, "bases"), ground));
  }
  if (type == "truncation") {
    return Matroid::Truncation(MatroidFromJson(Field(j, "inner")),
                               IntField(j, "cap"));
  }
  if (type == "direct_sum") {
    std::vector<Matroid> parts;
    for (const Json& p : Field(j, "parts")) parts.push_back(MatroidFromJson(p));
    return Matroid::DirectSum(std::move(parts));
  }
  if (type == "relabel") {
    std::vector<int> perm = Field(j, "permutation").get<std::vector<int>>();
    for (int& p : perm) --p;
    return Matroid::Relabel(MatroidFromJson(Field(j, "inner")),
                            std::move(perm));
  }
  throw InvalidArgument("unknown matroid type '" + type + "'");
}

Json MatroidToJson(const Matroid& matroid) {
  Json out;
  out["type"] = matroid.KindName();
  const Matroid::Spec& spec = matroid.spec();
  if (const auto* u = std::get_if<UniformMatroid>(&spec)) {
    out["ground"] = matroid.ground_size();
    out["rank"] = u->rank;
  } else if (const auto* p = std::get_if<PartitionMatroid>(&spec)) {
    out["ground"] = matroid.ground_size();
    out["blocks"] = BundlesToJson(p->blocks);
    out["capacities"] = p->capacities;
  } else if (const auto* g = std::get_if<GraphicMatroid>(&spec)) {
    out["vertices"] = g->num_vertices;
    Json edges = Json::array();
    for (const auto& [u, v] : g->edges) edges.push_back({u + 1, v + 1});
    out["edges"] = edges;
  } else if (const auto* e = std::get_if<ExplicitBasesMatroid>(&spec)) {
    out["ground"] = matroid.ground_size();
    out["bases"] = BundlesToJson(e->bases);
  } else if (const auto* t = std::get_if<TruncatedMatroid>(&spec)) {
    out["inner"] = MatroidToJson(t->inner);
    out["cap"] = t->cap;
  } else if (const auto* d = std::get_if<DirectSumMatroid>(&spec)) {
    Json parts = Json::array();
    for (const Matroid& p : d->parts) parts.push_back(MatroidToJson(p));
    out["parts"] = parts;
  } else if (const auto* r = std::get_if<RelabeledMatroid>(&spec)) {
    out["inner"] = MatroidToJson(r->inner);
    std::vector<int> perm = r->permutation;
    for (int& p : perm) ++p;
    out["permutation"] = perm;
  }
  return out;
}

Valuation ValuationFromJson(const Json& j, int m) {
  const std::string type = Field(j, "type").get<std::string>();
  if (type == "additive" || type == "unit_demand") {
    std::vector<Rational> w = RationalList(Field(j, "weights"));
    if (static_cast<int>(w.size()) != m) {
      throw InvalidArgument(type + " valuation needs " + std::to_string(m) +
                            " weights, got " + std::to_string(w.size()));
    }
    return type == "additive" ? Valuation::Additive(std::move(w))
                              : Valuation::UnitDemand(std::move(w));
  }
  if (type == "matroid_rank") {
    return Valuation::MatroidRank(MatroidFromJson(Field(j, "matroid")));
  }
  if (type == "explicit01") {
    return Valuation::Explicit01(m, BundleList(Field(j, "minimal_ones"), m));
  }
  if (type == "table") {
    const Json& values = Field(j, "values");
    if (!values.is_object()) {
      throw InvalidArgument("table values are an object keyed by goods");
    }
    std::map<Bundle, Rational> entries;
    for (const auto& [key, value] : values.items()) {
      entries[ParseTableKey(key, m)] = RationalFromJson(value);
    }
    return Valuation::TableFromMap(m, entries);
  }
  throw InvalidArgument("unknown valuation type '" + type + "'");
}

Json ValuationToJson(const Valuation& v) {
  Json out;
  out["type"] = v.KindName();
  const Valuation::Spec& spec = v.spec();
  auto weights = [](const std::vector<Rational>& w) {
    Json arr = Json::array();
    for (const Rational& x : w) arr.push_back(RationalToJson(x));
    return arr;
  };
  if (const auto* a = std::get_if<AdditiveValuation>(&spec)) {
    out["weights"] = weights(a->weights);
  } else if (const auto* u = std::get_if<UnitDemandValuation>(&spec)) {
    out["weights"] = weights(u->weights);
  } else if (const auto* r = std::get_if<MatroidRankValuation>(&spec)) {
    out["matroid"] = MatroidToJson(r->matroid);
  } else if (const auto* e = std::get_if<Explicit01Valuation>(&spec)) {
    out["minimal_ones"] = BundlesToJson(e->minimal_ones);
  } else if (const auto* t = std::get_if<TableValuation>(&spec)) {
    Json values = Json::object();
    for (std::size_t mask = 0; mask < t->values.size(); ++mask) {
      values[TableKey(Bundle(mask))] = RationalToJson(t->values[mask]);
    }
    out["values"] = values;
  }
  return out;
}

Instance InstanceFromJson(const Json& j) {
  Instance inst;
  inst.n = IntField(j, "n");
  inst.m = IntField(j, "m");
  if (j.contains("items")) {
    const std::string items = j.at("items").get<std::string>();
    if (items == "goods") {
      inst.kind = ItemKind::kGoods;
    } else if (items == "chores") {
      inst.kind = ItemKind::kChores;
    } else {
      throw InvalidArgument("items must be \"goods\" or \"chores\"");
    }
  }
  if (inst.m < 0 || inst.m > kMaxGoods) {
    throw InvalidArgument("m must be in [0, 63]");
  }
  for (const Json& v : Field(j, "valuations")) {
    inst.valuations.push_back(ValuationFromJson(v, inst.m));
  }
  inst.CheckShape();
  return inst;
}

Json InstanceToJson(const Instance& instance) {
  Json out;
  out["n"] = instance.n;
  out["m"] = instance.m;
  if (instance.kind == ItemKind::kChores) out["items"] = "chores";
  Json vals = Json::array();
  for (const Valuation& v : instance.valuations) {
    vals.push_back(ValuationToJson(v));
  }
  out["valuations"] = vals;
  return out;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

Instance ReadInstanceFile(const std::string& path) {
  try {
    return InstanceFromJson(ReadJsonFile(path));
  } catch (const Json::exception& e) {
    throw InvalidArgument("malformed instance '" + path + "': " + e.what());
  }
}

}  // namespace qfair
