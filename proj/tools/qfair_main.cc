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

// qfair: command-line front end.
//
// Exit codes: 0 success, 1 semantic negative (nothing found, check failed),
// 2 usage or input error, 3 budget refusal.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qfair/allocate.h"
#include "qfair/errors.h"
#include "qfair/extremal.h"
#include "qfair/json_io.h"
#include "qfair/lab.h"
#include "qfair/quantile.h"
#include "qfair/repro.h"
#include "qfair/veto.h"

namespace qfair {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Outcome {
  Json result = Json::object();
  int exit_code = kExitOk;
};

// Accepts a bare document or a previous qfair output wrapping it.
Json Unwrap(Json j) {
  if (j.is_object() && j.contains("result") && j.contains("command")) return j["result"];
  return j;
}

Instance LoadInstance(const std::string& path) {
  try {
    return InstanceFromJson(Unwrap(ReadJsonFile(path)));
  } catch (const Json::exception& e) {
    throw InvalidArgument("malformed instance '" + path + "': " + e.what());
  }
}

const Valuation& AgentValuation(const Instance& inst, int agent) {
  if (agent < 1 || agent > inst.n) {
    throw InvalidArgument("--agent must be in 1.." + std::to_string(inst.n));
  }
  return inst.valuations[agent - 1];
}

Json ReportToJson(const AllocationReport& report, const Allocation& allocation,
                  bool with_fairness) {
  Json out;
  if (with_fairness) PutRational(out, "q", report.q);
  Json verdicts = Json::array();
  for (const Verdict& v : report.verdicts) {
    Json row;
    row["agent"] = v.agent + 1;
    row["bundle"] = BundleToJson(allocation[v.agent]);
    PutRational(row, "bundle_value", v.bundle_value);
    PutRational(row, "satisfaction", v.satisfaction);
    if (with_fairness) {
      PutRational(row, "quantile_share", v.quantile_share);
      row["fair"] = v.fair;
    }
    verdicts.push_back(row);
  }
  out["verdicts"] = verdicts;
  PutRational(out, "min_satisfaction", report.min_satisfaction);
  if (with_fairness) out["all_fair"] = report.all_fair;
  return out;
}

Json CertificateToJson(const CoverageCertificate& c) {
  Json out;
  Json coverage = Json::array();
  for (const BigInt& x : c.coverage) coverage.push_back(x.str());
  out["coverage"] = coverage;
  if (!c.violators.empty()) {
    Json violators = Json::array();
    for (int v : c.violators) violators.push_back(v + 1);
    out["violators"] = violators;
  }
  return out;
}

SetFamily LoadFamily(const Json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("sets")) {
    throw InvalidArgument("a family is {\"m\": M, \"sets\": [[goods], ...]}");
  }
  const int m = j.at("m").get<int>();
  std::vector<Bundle> sets;
  for (const Json& s : j.at("sets")) sets.push_back(BundleFromJson(s, m));
  int k = j.contains("k") ? j.at("k").get<int>() : (sets.empty() ? 0 : sets[0].size());
  return SetFamily::Make(m, k, std::move(sets));
}

Json FamilyToJson(const SetFamily& f) {
  Json out;
  out["m"] = f.m;
  out["k"] = f.k;
  out["size"] = f.size();
  out["sets"] = BundlesToJson(f.sets);
  return out;
}

std::vector<VetoList> LoadLists(const std::string& path) {
  const Json j = Unwrap(ReadJsonFile(path));
  try {
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const Json& lists = j.at("lists");
    if (!lists.is_array() || static_cast<int>(lists.size()) != n) {
      throw InvalidArgument("\"lists\" needs one family per agent");
    }
    std::vector<VetoList> out;
    for (int i = 0; i < n; ++i) {
      std::vector<Bundle> bundles;
      for (const Json& b : lists[i]) bundles.push_back(BundleFromJson(b, m));
      out.push_back(VetoList::FromBundles(i, n, m, std::move(bundles)));
    }
    return out;
  } catch (const Json::exception& e) {
    throw InvalidArgument("malformed lists '" + path + "': " + e.what());
  }
}

Json ListsToJson(const std::vector<VetoList>& lists) {
  Json out = Json::array();
  for (const VetoList& l : lists) out.push_back(BundlesToJson(l.zero_bundles));
  return out;
}

Json ZeroFamilyToJson(FamilyBits family, int m) {
  std::vector<Bundle> bundles;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
    if ((family >> s) & 1) bundles.push_back(Bundle(s));
  }
  return BundlesToJson(bundles);
}

void Flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      Flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (j.is_array() && !j.empty() && j.front().is_structured()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      Flatten(j[i], prefix + "." + std::to_string(i), out);
    }
  } else {
    out << prefix << '\t' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

Json TypedValue(const std::string& text) {
  const Json parsed = Json::parse(text, nullptr, false);
  if (parsed.is_number_integer() || parsed.is_number_float() || parsed.is_boolean()) {
    if (!parsed.is_number_float() || text.find_first_of(".eE") != std::string::npos) return parsed;
  }
  return text;
}

// Every option of the invoked command with its effective value.
void EchoOptions(const CLI::App* app, Json& config) {
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->get_expected_min() == 0) {
      config[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& results = opt->results();
      if (results.size() == 1) {
        config[name] = TypedValue(results[0]);
      } else {
        Json values = Json::array();
        for (const std::string& r : results) values.push_back(TypedValue(r));
        config[name] = values;
      }
    } else if (!opt->get_default_str().empty()) {
      config[name] = TypedValue(opt->get_default_str());
    } else {
      config[name] = nullptr;
    }
  }
}

std::string CommandPath(const CLI::App* app, std::vector<const CLI::App*>& chain) {
  std::string path;
  const CLI::App* current = app;
  while (true) {
    const std::vector<CLI::App*> subs = current->get_subcommands();
    if (subs.empty()) break;
    current = subs.front();
    chain.push_back(current);
    path += (path.empty() ? "" : " ") + current->get_name();
  }
  return path;
}

struct Global {
  std::uint64_t seed = 0;
  int threads = 1;
  std::optional<int> exact_cap;
  std::string output = "-";
  std::string format = "json";
};

int Run(int argc, char** argv) {
  CLI::App app{"Quantile-share fair division toolkit", "qfair"};
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 256));
  app.add_option("--exact-cap", g.exact_cap, "Largest m enumerated exactly (QFAIR_EXACT_CAP)")
      ->check(CLI::Range(0, 63));
  app.add_option("--output,-o", g.output, "Output path, - for stdout");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "tsv"}));

  std::function<Outcome()> action;

  // quantile
  struct {
    std::string instance, q, bundle;
    int agent = 1;
    std::uint64_t samples = 0;
    double delta = 0.05;
    bool exact = false, atoms = false;
  } qo;
  CLI::App* quantile = app.add_subcommand("quantile", "Quantile share and bundle satisfaction");
  quantile->add_option("--instance", qo.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  quantile->add_option("--agent", qo.agent, "Agent, 1-indexed")->required();
  quantile->add_option("--q", qo.q, "Quantile level p/r")->required();
  quantile->add_option("--bundle", qo.bundle, "Goods as a JSON list, e.g. [1,2]");
  auto* exact_flag = quantile->add_flag("--exact", qo.exact, "Exact enumeration (default)");
  quantile->add_option("--samples", qo.samples, "Monte Carlo samples for --bundle")
      ->excludes(exact_flag);
  quantile->add_option("--delta", qo.delta, "Confidence parameter for sampling")
      ->check(CLI::Range(1e-12, 1.0));
  quantile->add_flag("--atoms", qo.atoms, "Include the value distribution");
  quantile->callback([&] {
    action = [&] {
      const Instance inst = LoadInstance(qo.instance);
      const Valuation& v = AgentValuation(inst, qo.agent);
      const Rational q = ParseRational(qo.q);
      Outcome o;
      o.result["agent"] = qo.agent;
      o.result["n"] = inst.n;
      o.result["m"] = inst.m;
      PutRational(o.result, "q", q);
      std::optional<Bundle> bundle;
      if (!qo.bundle.empty()) {
        try {
          bundle = BundleFromJson(Json::parse(qo.bundle), inst.m);
        } catch (const Json::exception&) {
          throw InvalidArgument("--bundle must be a JSON list of goods");
        }
      }
      if (qo.samples > 0) {
        if (!bundle) throw InvalidArgument("--samples needs --bundle");
        const SampleEstimate e = SampleSatisfaction(v, inst.n, *bundle, qo.samples, qo.delta, g.seed);
        o.result["mode"] = "sampled";
        o.result["bundle"] = BundleToJson(*bundle);
        o.result["satisfaction_estimate"] = e.estimate;
        o.result["half_width"] = e.half_width;
        o.result["hits"] = e.hits;
        o.result["samples"] = e.samples;
        o.result["fair_estimate"] = ToDouble(q) <= e.estimate;
        return o;
      }
      o.result["mode"] = "exact";
      const ValueDistribution d = ExactDistribution(v, inst.n);
      PutRational(o.result, "quantile_share", d.Quantile(q));
      if (qo.atoms) {
        Json atoms = Json::array();
        for (const Atom& a : d.atoms) {
          Json row;
          PutRational(row, "value", a.value);
          row["weight"] = a.weight.str();
          atoms.push_back(row);
        }
        o.result["denominator"] = d.denominator().str();
        o.result["atoms"] = atoms;
      }
      if (bundle) {
        Json verdict;
        verdict["bundle"] = BundleToJson(*bundle);
        const Rational value = v.Evaluate(*bundle);
        PutRational(verdict, "bundle_value", value);
        PutRational(verdict, "satisfaction", d.Cdf(value));
        verdict["fair"] = value >= d.Quantile(q);
        o.result["verdict"] = verdict;
      }
      return o;
    };
  });

  // allocate
  struct {
    std::string instance, algo, q;
    std::uint64_t budget = kDefaultAllocationBudget;
  } ao;
  CLI::App* allocate = app.add_subcommand("allocate", "Compute an allocation");
  allocate->add_option("--instance", ao.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  allocate->add_option("--algo", ao.algo, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"round_robin", "exhaustive", "maximin_satisfaction"}));
  allocate->add_option("--q", ao.q, "Quantile level p/r");
  allocate->add_option("--budget", ao.budget, "Allocation enumeration budget");
  allocate->callback([&] {
    action = [&] {
      const Instance inst = LoadInstance(ao.instance);
      const SearchOptions options{.budget = ao.budget, .threads = g.threads};
      std::optional<Rational> q;
      if (!ao.q.empty()) q = ParseRational(ao.q);
      Outcome o;
      o.result["algo"] = ao.algo;
      auto report = [&](const Allocation& a, const Rational& level, bool fairness) {
        return ReportToJson(MakeAllocationReport(inst, a, level), a, fairness);
      };
      if (ao.algo == "round_robin") {
        const Allocation a = RoundRobin(inst);
        o.result["allocation"] = AllocationToJson(a);
        o.result["report"] = report(a, q.value_or(Rational(1)), q.has_value());
      } else if (ao.algo == "exhaustive") {
        if (!q) throw InvalidArgument("--algo exhaustive needs --q");
        const AcceptSearchResult r = ExhaustiveFairAllocation(inst, *q, options);
        if (r.allocation) {
          o.result["found"] = true;
          o.result["index"] = r.index;
          o.result["allocation"] = AllocationToJson(*r.allocation);
          o.result["report"] = report(*r.allocation, *q, true);
        } else {
          o.result["found"] = false;
          PutRational(o.result, "q", *q);
          o.result["certificate"] = CertificateToJson(r.certificate);
          o.exit_code = kExitNegative;
        }
      } else {
        const MaximinResult r = MaximinSatisfactionAllocation(inst, options);
        PutRational(o.result, "q_star", r.q_star);
        o.result["index"] = r.index;
        o.result["allocation"] = AllocationToJson(r.allocation);
        o.result["report"] = report(r.allocation, q.value_or(r.q_star), true);
      }
      return o;
    };
  });

  // mms
  struct {
    std::string instance;
    int agent = 1;
    bool matroid_fast = false;
  } mo;
  CLI::App* mms = app.add_subcommand("mms", "Maximin share of one agent");
  mms->add_option("--instance", mo.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  mms->add_option("--agent", mo.agent, "Agent, 1-indexed")->required();
  mms->add_flag("--matroid-fast", mo.matroid_fast, "Use matroid intersection for rank valuations");
  mms->callback([&] {
    action = [&] {
      const Instance inst = LoadInstance(mo.instance);
      const Valuation& v = AgentValuation(inst, mo.agent);
      const MmsOptions options{.matroid_fast = mo.matroid_fast};
      const MmsResult r = MmsValue(v, inst.n, options);
      Outcome o;
      o.result["agent"] = mo.agent;
      PutRational(o.result, "mms", r.value);
      o.result["method"] = r.method;
      o.result["witness"] = AllocationToJson(r.witness);
      PutRational(o.result, "quantile", ExactDistribution(v, inst.n).Cdf(r.value));
      return o;
    };
  });

  // veto
  struct {
    std::string instance, q, lists;
    bool emit = false;
  } vo;
  CLI::App* veto = app.add_subcommand("veto", "Veto lists induced by an instance");
  veto->require_subcommand(0, 1);
  veto->add_option("--instance", vo.instance, "Instance JSON")->check(CLI::ExistingFile);
  veto->add_option("--q", vo.q, "Quantile level p/r");
  veto->add_flag("--emit-lists", vo.emit, "Include the lists");
  veto->callback([&] {
    if (!veto->get_subcommands().empty()) return;
    action = [&] {
      if (vo.instance.empty() || vo.q.empty()) {
        throw InvalidArgument("veto needs --instance and --q");
      }
      const Instance inst = LoadInstance(vo.instance);
      const Rational q = ParseRational(vo.q);
      std::vector<VetoList> lists;
      Outcome o;
      o.result["n"] = inst.n;
      o.result["m"] = inst.m;
      PutRational(o.result, "q", q);
      Json agents = Json::array();
      for (int i = 0; i < inst.n; ++i) {
        lists.push_back(VetoFromValuation(inst.valuations[i], inst.n, q, i));
        Json row;
        row["agent"] = i + 1;
        row["bundles"] = lists.back().zero_bundles.size();
        row["size"] = lists.back().Size().str();
        row["consistent"] = IsMonotonicityConsistent(lists.back());
        agents.push_back(row);
      }
      o.result["agents"] = agents;
      const AcceptSearchResult r =
          FindUnvetoedAllocation(lists, {.threads = g.threads});
      o.result["unvetoed"] = r.allocation ? AllocationToJson(*r.allocation) : Json(nullptr);
      if (vo.emit) o.result["lists"] = ListsToJson(lists);
      if (!r.allocation) o.exit_code = kExitNegative;
      return o;
    };
  });
  CLI::App* veto_solve = veto->add_subcommand("solve", "First allocation no list vetoes");
  veto_solve->add_option("--lists", vo.lists, "Lists JSON")->required()->check(CLI::ExistingFile);
  veto_solve->callback([&] {
    action = [&] {
      const std::vector<VetoList> lists = LoadLists(vo.lists);
      const AcceptSearchResult r = FindUnvetoedAllocation(lists, {.threads = g.threads});
      Outcome o;
      Json sizes = Json::array();
      for (const VetoList& l : lists) sizes.push_back(l.Size().str());
      o.result["sizes"] = sizes;
      if (r.allocation) {
        o.result["found"] = true;
        o.result["index"] = r.index;
        o.result["allocation"] = AllocationToJson(*r.allocation);
      } else {
        o.result["found"] = false;
        o.exit_code = kExitNegative;
      }
      return o;
    };
  });

  // extremal
  struct {
    std::string family, families;
    int m = 0, k = 0, n = 0, k_prime = 0, m_prime = 0, target = 0, t_max = 200;
    int n_max = 20, k_max = 50;
    std::uint64_t trials = 1000;
    bool rainbow = false, show_families = false;
    std::string precision = "1e-15";
  } eo;
  CLI::App* extremal = app.add_subcommand("extremal", "Set-family tools");
  extremal->require_subcommand(1);
  auto family_of = [&]() { return LoadFamily(Unwrap(ReadJsonFile(eo.family))); };

  CLI::App* nu = extremal->add_subcommand("nu", "Matching number");
  nu->add_option("--family", eo.family, "Family JSON")->required()->check(CLI::ExistingFile);
  nu->add_option("--target", eo.target, "Stop at a matching of this size");
  nu->callback([&] {
    action = [&] {
      const MatchingResult r = MaximumMatching(family_of(), eo.target);
      Outcome o;
      o.result["nu"] = r.matching.size();
      o.result["matching"] = BundlesToJson(r.matching);
      o.result["nodes"] = r.nodes;
      return o;
    };
  });

  CLI::App* rainbow = extremal->add_subcommand("rainbow", "Rainbow matching across families");
  rainbow->add_option("--families", eo.families, "JSON {\"m\": M, \"families\": [[sets], ...]}")
      ->required()
      ->check(CLI::ExistingFile);
  rainbow->callback([&] {
    action = [&] {
      const Json j = Unwrap(ReadJsonFile(eo.families));
      if (!j.is_object() || !j.contains("m") || !j.contains("families")) {
        throw InvalidArgument("rainbow input is {\"m\": M, \"families\": [...]}");
      }
      std::vector<SetFamily> families;
      for (const Json& f : j.at("families")) {
        Json one;
        one["m"] = j.at("m");
        one["sets"] = f;
        families.push_back(LoadFamily(one));
      }
      const auto r = RainbowMatching(families);
      Outcome o;
      o.result["found"] = r.has_value();
      o.result["matching"] = r ? BundlesToJson(*r) : Json(nullptr);
      if (!r) o.exit_code = kExitNegative;
      return o;
    };
  });

  CLI::App* shadow = extremal->add_subcommand("shadow", "Shadow at a lower level");
  shadow->add_option("--family", eo.family, "Family JSON")->required()->check(CLI::ExistingFile);
  shadow->add_option("--k-prime", eo.k_prime, "Target level")->required();
  shadow->callback([&] {
    action = [&] {
      Outcome o;
      o.result["shadow"] = FamilyToJson(Shadow(family_of(), eo.k_prime));
      return o;
    };
  });

  CLI::App* kk = extremal->add_subcommand("kk", "Kruskal-Katona check");
  kk->add_option("--family", eo.family, "Family JSON")->required()->check(CLI::ExistingFile);
  kk->add_option("--m-prime", eo.m_prime, "Ground size m'")->required();
  kk->add_option("--k-prime", eo.k_prime, "Shadow level k'")->required();
  kk->callback([&] {
    action = [&] {
      const SetFamily f = family_of();
      const bool holds = KruskalKatonaCheck(f, eo.m_prime, eo.k_prime);
      Outcome o;
      o.result["family_size"] = f.size();
      o.result["required"] = Binomial(eo.m_prime, f.k).str();
      o.result["shadow_size"] = Shadow(f, eo.k_prime).size();
      o.result["shadow_bound"] = Binomial(eo.m_prime, eo.k_prime).str();
      o.result["holds"] = holds;
      if (!holds) o.exit_code = kExitNegative;
      return o;
    };
  });

  CLI::App* emc = extremal->add_subcommand("emc-bounds", "Matching bounds and extremal families");
  emc->add_option("--m", eo.m, "Ground size")->required();
  emc->add_option("--k", eo.k, "Set size")->required();
  emc->add_option("--n", eo.n, "Matching size")->required();
  emc->add_flag("--families", eo.show_families, "Include the extremal families");
  emc->callback([&] {
    action = [&] {
      const EmcBounds b = ComputeEmcBounds(eo.m, eo.k, eo.n);
      Outcome o;
      o.result["cover"] = b.cover.str();
      o.result["clique"] = b.clique.str();
      o.result["max"] = b.max.str();
      if (eo.show_families) {
        const EmcExtremal e = EmcExtremalFamilies(eo.m, eo.k, eo.n);
        o.result["cover_family"] = FamilyToJson(e.cover);
        o.result["clique_family"] = FamilyToJson(e.clique);
      }
      return o;
    };
  });

  CLI::App* falsify = extremal->add_subcommand("emc-falsify", "Random search for a family beating the bound");
  falsify->add_option("--m", eo.m, "Ground size")->required();
  falsify->add_option("--k", eo.k, "Set size")->required();
  falsify->add_option("--n", eo.n, "Matching size")->required();
  falsify->add_option("--trials", eo.trials, "Trials");
  falsify->add_flag("--rainbow", eo.rainbow, "Look for rainbow matchings across n families");
  falsify->callback([&] {
    action = [&] {
      const EmcFalsifyResult r = EmcFalsify(eo.m, eo.k, eo.n, eo.trials, g.seed,
                                            {.rainbow = eo.rainbow, .threads = g.threads});
      Outcome o;
      o.result["heuristic"] = true;
      o.result["bound"] = r.bound.str();
      o.result["trials"] = r.trials;
      o.result["counterexample_found"] = r.counterexample_trial.has_value();
      if (r.counterexample_trial) {
        o.result["counterexample_trial"] = *r.counterexample_trial;
        Json families = Json::array();
        for (const SetFamily& f : r.counterexample) families.push_back(FamilyToJson(f));
        o.result["counterexample"] = families;
      }
      return o;
    };
  });

  CLI::App* qn = extremal->add_subcommand("qn", "Binomial estimate of q_n");
  qn->add_option("--n", eo.n, "Agents")->required();
  qn->add_option("--t-max", eo.t_max, "Largest t scanned");
  qn->add_option("--precision", eo.precision, "Comparison precision");
  qn->callback([&] {
    action = [&] {
      const BinomialQnResult r = BinomialQn(eo.n, eo.t_max, HighPrecision(eo.precision));
      Outcome o;
      o.result["n"] = r.n;
      o.result["t_max"] = r.t_max;
      o.result["argmin"] = r.argmin;
      PutRational(o.result, "estimate", r.estimate);
      o.result["bound"] = FormatHighPrecision(r.bound);
      o.result["bound_holds"] = TriName(r.bound_holds);
      PutRational(o.result, "conjecture_gap", r.conjecture_gap);
      if (r.bound_holds == Tri::kFalse) o.exit_code = kExitNegative;
      return o;
    };
  });

  CLI::App* lemma9 = extremal->add_subcommand("lemma9", "Binomial inequality sweep");
  lemma9->add_option("--n-max", eo.n_max, "Largest n");
  lemma9->add_option("--k-max", eo.k_max, "Largest k");
  lemma9->callback([&] {
    action = [&] {
      const Lemma9SweepResult r = Lemma9Sweep(eo.n_max, eo.k_max);
      Outcome o;
      o.result["checked"] = r.checked;
      Json failures = Json::array();
      for (auto [n, k] : r.failures) failures.push_back({n, k});
      o.result["failures"] = failures;
      o.result["equality_at_k1"] = r.equality_at_k1;
      o.result["monotone_in_k"] = r.monotone_in_k;
      o.result["ok"] = r.ok();
      if (!r.ok()) o.exit_code = kExitNegative;
      return o;
    };
  });

  // lab
  struct {
    int n = 3, m = 4, slack = 0;
    std::string budget, out, name = "prop3", epsilon = "1/100";
    bool no_symmetry = false;
    double time_limit = 0;
  } lo;
  CLI::App* lab = app.add_subcommand("lab", "Threshold experiments");
  lab->require_subcommand(1);
  auto spec_of = [&] {
    SearchSpec spec{.n = lo.n, .m = lo.m};
    if (!lo.budget.empty()) spec.budget = BigInt(lo.budget);
    spec.symmetry_breaking = !lo.no_symmetry;
    spec.time_limit = lo.time_limit;
    spec.threads = g.threads;
    return spec;
  };
  auto budget_option = [&](CLI::App* sub) {
    sub->add_option("--budget", lo.budget, "Zero-allocation budget per agent")
        ->check(CLI::NonNegativeNumber);
  };

  CLI::App* search = lab->add_subcommand("search", "Exhaustive search for an infeasible profile");
  search->add_option("--n", lo.n, "Agents");
  search->add_option("--m", lo.m, "Goods");
  budget_option(search);
  search->add_flag("--no-symmetry", lo.no_symmetry, "Disable symmetry breaking");
  search->add_option("--time-limit", lo.time_limit, "Seconds, 0 for none");
  search->callback([&] {
    action = [&] {
      const SearchResult r = SearchCounterexample(spec_of());
      Outcome o;
      o.result["n"] = r.n;
      o.result["m"] = r.m;
      o.result["budget"] = r.budget.str();
      o.result["verdict"] = r.counterexample ? "counterexample" : "exhausted";
      Json cert;
      cert["symmetry_breaking"] = r.symmetry_breaking;
      cert["candidate_families"] = r.candidate_families;
      cert["root_families"] = r.root_families;
      cert["nodes"] = r.nodes;
      o.result["certificate"] = cert;
      if (r.counterexample) {
        Json zeros = Json::array();
        for (FamilyBits f : *r.counterexample) zeros.push_back(ZeroFamilyToJson(f, r.m));
        o.result["zero_families"] = zeros;
        o.result["instance"] = InstanceToJson(ProfileInstance(*r.counterexample, r.m));
      } else {
        o.exit_code = kExitNegative;
      }
      return o;
    };
  });

  CLI::App* lp = lab->add_subcommand("export", "Write the integer program in LP format");
  lp->add_option("--n", lo.n, "Agents");
  lp->add_option("--m", lo.m, "Goods");
  budget_option(lp);
  lp->add_option("--out", lo.out, "LP file")->required();
  lp->callback([&] {
    action = [&] {
      const SearchSpec spec = spec_of();
      ExportIpToFile(spec, lo.out);
      const LpCounts c = ExpectedLpCounts(spec.n, spec.m);
      Outcome o;
      o.result["path"] = lo.out;
      o.result["budget"] = spec.ResolvedBudget().str();
      o.result["variables"] = c.variables;
      o.result["monotonicity_rows"] = c.monotonicity_rows;
      o.result["threshold_rows"] = c.threshold_rows;
      o.result["allocation_rows"] = c.allocation_rows;
      return o;
    };
  });

  CLI::App* named = lab->add_subcommand("instance", "Emit a named instance");
  named->add_option("--name", lo.name, "Instance name")->check(CLI::IsMember(NamedInstanceNames()));
  named->add_option("--n", lo.n, "Agents");
  named->add_option("--m", lo.m, "Goods");
  named->add_option("--epsilon", lo.epsilon, "Small weight p/r");
  named->callback([&] {
    action = [&] {
      Outcome o;
      o.result = InstanceToJson(NamedInstance(
          lo.name, {.n = lo.n, .m = lo.m, .epsilon = ParseRational(lo.epsilon)}));
      return o;
    };
  });

  CLI::App* gap = lab->add_subcommand("gap", "Equal-size bundles against unrestricted ones");
  gap->add_option("--n", lo.n, "Agents");
  gap->add_option("--m", lo.m, "Goods");
  gap->add_option("--epsilon", lo.epsilon, "Small weight p/r");
  gap->add_option("--slack", lo.slack, "Allowed deviation from m/n")->check(CLI::NonNegativeNumber);
  gap->callback([&] {
    action = [&] {
      const EqualSizeGapReport r =
          EqualSizeGap(lo.n, lo.m, ParseRational(lo.epsilon), lo.slack, {.threads = g.threads});
      Outcome o;
      PutRational(o.result, "equal_size_best", r.equal_size_best);
      o.result["equal_size_witness"] =
          r.equal_size_witness ? AllocationToJson(*r.equal_size_witness) : Json(nullptr);
      PutRational(o.result, "unconstrained", r.unconstrained);
      o.result["unconstrained_witness"] = AllocationToJson(r.unconstrained_witness);
      PutRational(o.result, "concentrated", r.concentrated);
      o.result["concentrated_allocation"] = AllocationToJson(r.concentrated_allocation);
      o.result["gap"] = r.gap();
      return o;
    };
  });

  // repro
  std::string target;
  bool list_targets = false;
  CLI::App* repro = app.add_subcommand("repro", "Run a named end-to-end check");
  std::vector<std::string> target_names = {"all"};
  for (const ReproTarget& t : ReproTargets()) target_names.push_back(t.name);
  repro->add_option("target", target, "Target name or all")->check(CLI::IsMember(target_names));
  repro->add_flag("--list", list_targets, "List targets");
  repro->callback([&] {
    action = [&] {
      Outcome o;
      if (list_targets || target.empty()) {
        Json targets = Json::array();
        for (const ReproTarget& t : ReproTargets()) {
          targets.push_back({{"name", t.name}, {"title", t.title}});
        }
        o.result["targets"] = targets;
        if (!list_targets) throw InvalidArgument("repro needs a target; see --list");
        return o;
      }
      const ReproOptions options{.seed = g.seed, .threads = g.threads};
      Json reports = Json::array();
      int failed = 0;
      for (const ReproTarget& t : ReproTargets()) {
        if (target != "all" && target != t.name) continue;
        const ReproReport r = RunRepro(t.name, options);
        std::cerr << ReproLine(r) << '\n';
        reports.push_back({{"target", r.target},
                           {"title", r.title},
                           {"verdict", r.pass ? "PASS" : "FAIL"},
                           {"measured", r.measured}});
        if (!r.pass) ++failed;
      }
      o.result["reports"] = reports;
      o.result["failed"] = failed;
      if (failed > 0) o.exit_code = kExitNegative;
      return o;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (g.exact_cap) setenv("QFAIR_EXACT_CAP", std::to_string(*g.exact_cap).c_str(), 1);

  std::vector<const CLI::App*> chain;
  const std::string command = CommandPath(&app, chain);
  Json config;
  config["seed"] = g.seed;
  config["threads"] = g.threads;
  config["exact_cap"] = DefaultExactCap();
  config["format"] = g.format;
  config["output"] = g.output;
  for (const CLI::App* sub : chain) EchoOptions(sub, config);

  Outcome outcome;
  try {
    if (!action) throw InvalidArgument("nothing to run for '" + command + "'");
    outcome = action();
  } catch (const BudgetExceeded& e) {
    std::cerr << Json({{"error", "budget"}, {"message", e.what()}}).dump() << '\n';
    return kExitBudget;
  } catch (const IoError& e) {
    std::cerr << Json({{"error", "io"}, {"message", e.what()}}).dump() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << Json({{"error", "invalid_argument"}, {"message", e.what()}}).dump() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << Json({{"error", "domain"}, {"message", e.what()}}).dump() << '\n';
    return kExitUsage;
  }

  Json doc;
  doc["command"] = command;
  doc["config"] = config;
  doc["exit_code"] = outcome.exit_code;
  doc["result"] = outcome.result;

  std::ofstream file;
  if (g.output != "-") {
    file.open(g.output);
    if (!file) {
      std::cerr << Json({{"error", "io"}, {"message", "cannot write '" + g.output + "'"}}).dump()
                << '\n';
      return kExitUsage;
    }
  }
  std::ostream& out = g.output == "-" ? std::cout : file;
  if (g.format == "tsv") {
    Flatten(doc, "", out);
  } else {
    out << doc.dump(2) << '\n';
  }
  return outcome.exit_code;
}

}  // namespace
}  // namespace qfair

int main(int argc, char** argv) { return qfair::Run(argc, argv); }
