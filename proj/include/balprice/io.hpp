// Copyright 2026 The Authors.
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

// JSON instance schema. Items, agents and matroid elements are 0-based.
// Unknown keys are rejected at every level.
//
//   {"name": str?, "params": obj?,
//    "environment": Env, "agents": [Valuation],
//    "distribution": [[{"valuation": Valuation, "prob": p}]]?}
//
//   Env: {"kind": "single_item", "agents": n}
//      | {"kind": "matroid", "agents": n, "owner": [agent per element],
//         "matroid": Matroid}
//      | {"kind": "combinatorial_auction", "agents": n, "items": m,
//         "max_bundle": k?}
//      | {"kind": "fractional_ca", "agents": n, "items": m}
//      | {"kind": "knapsack", "agents": n, "grid": g, "max_level": l}
//      | {"kind": "pip", "agents": n, "matrix": [[a_ji]], "levels": l}
//      | {"kind": "explicit", "agents": n, "outcomes": [count per agent],
//         "feasible": [[token per agent]]}
//      | {"kind": "product", "agents": n, "markets": [Env]}
//   Matroid: {"type": "uniform", "ground": e, "rank": r}
//      | {"type": "partition", "blocks": [block per element],
//         "capacities": [c]}
//      | {"type": "graphic", "vertices": v, "edges": [[u, w]]}
//      | {"type": "explicit", "ground": e, "independent": [[elements]]}
//   Valuation: {"kind": "scalar", "value": v}
//      | {"kind": "additive", "values": [v_j]}
//      | {"kind": "xos", "clauses": [[v_j]]}
//      | {"kind": "mph", "clauses": [[{"items": [j], "weight": w}]]}
//      | {"kind": "knapsack_threshold", "value": v, "size": s}
//      | {"kind": "table", "values": [[token, v]]}
//      | {"kind": "market_sum", "markets": [Valuation]}

#ifndef BALPRICE_IO_HPP_
#define BALPRICE_IO_HPP_

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "balprice/catalog.hpp"
#include "balprice/core.hpp"
#include "balprice/distribution.hpp"
#include "balprice/matroid.hpp"
#include "balprice/pricing.hpp"

namespace balprice {

// Malformed or schema-violating input.
class ParseError : public Error {
 public:
  using Error::Error;
};

namespace internal {

inline void RequireObject(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
}

inline void AllowKeys(const Json& j, const std::string& where,
                      std::initializer_list<const char*> keys) {
  RequireObject(j, where);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ParseError(where + ": unknown key '" + key + "'");
  }
}

inline const Json& Field(const Json& j, const std::string& where,
                         const char* key) {
  if (!j.contains(key)) {
    throw ParseError(where + ": missing key '" + std::string(key) + "'");
  }
  return j.at(key);
}

template <class T>
T Get(const Json& j, const std::string& where, const char* key) {
  try {
    return Field(j, where, key).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(where + "." + key + ": " + e.what());
  }
}

inline Json Items(ItemSet s) { return Members(s); }

inline ItemSet ItemsFrom(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an item list");
  ItemSet s = 0;
  for (const Json& e : j) {
    int item = e.get<int>();
    if (item < 0 || item >= kMaxItems) throw ParseError(where + ": bad item");
    s |= ItemSet{1} << item;
  }
  return s;
}

}  // namespace internal

inline Json MatroidToJson(const Matroid& m) {
  switch (m.type()) {
    case Matroid::Type::kUniform:
      return {{"type", "uniform"},
              {"ground", m.ground_size()},
              {"rank", m.uniform_rank()}};
    case Matroid::Type::kPartition:
      return {{"type", "partition"},
              {"blocks", m.blocks()},
              {"capacities", m.capacities()}};
    case Matroid::Type::kGraphic: {
      Json edges = Json::array();
      for (auto [u, v] : m.edges()) edges.push_back({u, v});
      return {{"type", "graphic"}, {"vertices", m.vertices()}, {"edges", edges}};
    }
    case Matroid::Type::kExplicit: {
      Json sets = Json::array();
      for (std::uint32_t s : m.independent_sets()) sets.push_back(Members(s));
      return {{"type", "explicit"},
              {"ground", m.ground_size()},
              {"independent", sets}};
    }
  }
  return nullptr;
}

inline Matroid MatroidFromJson(const Json& j) {
  const std::string w = "matroid";
  internal::RequireObject(j, w);
  std::string type = internal::Get<std::string>(j, w, "type");
  try {
    if (type == "uniform") {
      internal::AllowKeys(j, w, {"type", "ground", "rank"});
      return Matroid::Uniform(internal::Get<int>(j, w, "ground"),
                              internal::Get<int>(j, w, "rank"));
    }
    if (type == "partition") {
      internal::AllowKeys(j, w, {"type", "blocks", "capacities"});
      return Matroid::Partition(
          internal::Get<std::vector<int>>(j, w, "blocks"),
          internal::Get<std::vector<int>>(j, w, "capacities"));
    }
    if (type == "graphic") {
      internal::AllowKeys(j, w, {"type", "vertices", "edges"});
      std::vector<std::pair<int, int>> edges;
      for (const auto& e :
           internal::Get<std::vector<std::vector<int>>>(j, w, "edges")) {
        if (e.size() != 2) throw ParseError("matroid: edge needs 2 endpoints");
        edges.emplace_back(e[0], e[1]);
      }
      return Matroid::Graphic(internal::Get<int>(j, w, "vertices"),
                              std::move(edges));
    }
    if (type == "explicit") {
      internal::AllowKeys(j, w, {"type", "ground", "independent"});
      std::vector<std::uint32_t> sets;
      for (const Json& s : internal::Field(j, w, "independent")) {
        sets.push_back(static_cast<std::uint32_t>(internal::ItemsFrom(s, w)));
      }
      return Matroid::Explicit(internal::Get<int>(j, w, "ground"),
                               std::move(sets));
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("matroid: ") + e.what());
  }
  throw ParseError("matroid: unknown type '" + type + "'");
}

inline Json EnvironmentToJson(const Environment& env) {
  Json j = {{"agents", env.agents()}};
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SingleItemEnv>) {
          j["kind"] = "single_item";
        } else if constexpr (std::is_same_v<T, MatroidEnv>) {
          j["kind"] = "matroid";
          j["owner"] = d.owner;
          j["matroid"] = MatroidToJson(d.matroid);
        } else if constexpr (std::is_same_v<T, AuctionEnv>) {
          j["kind"] = d.fractional ? "fractional_ca" : "combinatorial_auction";
          j["items"] = d.items;
          if (!d.fractional && d.max_bundle > 0) j["max_bundle"] = d.max_bundle;
        } else if constexpr (std::is_same_v<T, KnapsackEnv>) {
          j["kind"] = "knapsack";
          j["grid"] = d.grid;
          j["max_level"] = d.max_level;
        } else if constexpr (std::is_same_v<T, PipEnv>) {
          j["kind"] = "pip";
          j["matrix"] = d.matrix;
          j["levels"] = d.levels;
        } else if constexpr (std::is_same_v<T, ExplicitEnv>) {
          j["kind"] = "explicit";
          j["outcomes"] = d.counts;
          Json f = Json::array();
          for (const Allocation& x : d.feasible) f.push_back(x);
          j["feasible"] = f;
        } else if constexpr (std::is_same_v<T, ProductEnv>) {
          j["kind"] = "product";
          Json m = Json::array();
          for (const Environment& e : d.markets) m.push_back(EnvironmentToJson(e));
          j["markets"] = m;
        }
      },
      env.data());
  return j;
}

inline Environment EnvironmentFromJson(const Json& j) {
  const std::string w = "environment";
  internal::RequireObject(j, w);
  const std::string kind = internal::Get<std::string>(j, w, "kind");
  const int n = internal::Get<int>(j, w, "agents");
  try {
    if (kind == "single_item") {
      internal::AllowKeys(j, w, {"kind", "agents"});
      return Environment::SingleItem(n);
    }
    if (kind == "matroid") {
      internal::AllowKeys(j, w, {"kind", "agents", "owner", "matroid"});
      return Environment(
          n, MatroidEnv{MatroidFromJson(internal::Field(j, w, "matroid")),
                        internal::Get<std::vector<int>>(j, w, "owner")});
    }
    if (kind == "combinatorial_auction") {
      internal::AllowKeys(j, w, {"kind", "agents", "items", "max_bundle"});
      int k = j.contains("max_bundle") ? internal::Get<int>(j, w, "max_bundle")
                                       : 0;
      return Environment::Auction(n, internal::Get<int>(j, w, "items"), k);
    }
    if (kind == "fractional_ca") {
      internal::AllowKeys(j, w, {"kind", "agents", "items"});
      return Environment::FractionalAuction(n,
                                            internal::Get<int>(j, w, "items"));
    }
    if (kind == "knapsack") {
      internal::AllowKeys(j, w, {"kind", "agents", "grid", "max_level"});
      return Environment(n, KnapsackEnv{internal::Get<int>(j, w, "grid"),
                                        internal::Get<int>(j, w, "max_level")});
    }
    if (kind == "pip") {
      internal::AllowKeys(j, w, {"kind", "agents", "matrix", "levels"});
      auto matrix =
          internal::Get<std::vector<std::vector<double>>>(j, w, "matrix");
      for (const auto& row : matrix) {
        if (static_cast<int>(row.size()) != n) {
          throw ParseError("environment: matrix rows need one entry per agent");
        }
      }
      return Environment(n, PipEnv{std::move(matrix),
                                   internal::Get<int>(j, w, "levels")});
    }
    if (kind == "explicit") {
      internal::AllowKeys(j, w, {"kind", "agents", "outcomes", "feasible"});
      ExplicitEnv e;
      e.counts = internal::Get<std::vector<int>>(j, w, "outcomes");
      for (const auto& x : internal::Get<std::vector<Allocation>>(j, w,
                                                                 "feasible")) {
        e.feasible.insert(x);
      }
      return Environment(n, std::move(e));
    }
    if (kind == "product") {
      internal::AllowKeys(j, w, {"kind", "agents", "markets"});
      std::vector<Environment> markets;
      const Json& m = internal::Field(j, w, "markets");
      if (!m.is_array()) throw ParseError("environment: markets must be a list");
      for (const Json& e : m) markets.push_back(EnvironmentFromJson(e));
      Environment env = Environment::Product(std::move(markets));
      if (env.agents() != n) throw ParseError("environment: agent count");
      return env;
    }
  } catch (const DomainError& e) {
    throw ParseError(std::string("environment: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("environment: ") + e.what());
  }
  throw ParseError("environment: unknown kind '" + kind + "'");
}

inline Json ValuationToJson(const Valuation& v) {
  Json j;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Scalar>) {
          j = {{"kind", "scalar"}, {"value", d.value}};
        } else if constexpr (std::is_same_v<T, Additive>) {
          j = {{"kind", "additive"}, {"values", d.values}};
        } else if constexpr (std::is_same_v<T, Xos>) {
          j = {{"kind", "xos"}, {"clauses", d.clauses}};
        } else if constexpr (std::is_same_v<T, Mph>) {
          Json clauses = Json::array();
          for (const auto& clause : d.clauses) {
            Json c = Json::array();
            for (const Hyperedge& e : clause) {
              c.push_back({{"items", internal::Items(e.items)},
                           {"weight", e.weight}});
            }
            clauses.push_back(c);
          }
          j = {{"kind", "mph"}, {"clauses", clauses}};
        } else if constexpr (std::is_same_v<T, KnapsackThreshold>) {
          j = {{"kind", "knapsack_threshold"},
               {"value", d.value},
               {"size", d.size}};
        } else if constexpr (std::is_same_v<T, Table>) {
          Json values = Json::array();
          for (const auto& [token, value] : d.values) {
            values.push_back({token, value});
          }
          j = {{"kind", "table"}, {"values", values}};
        } else if constexpr (std::is_same_v<T, MarketSum>) {
          Json m = Json::array();
          for (const Valuation& x : d.markets) m.push_back(ValuationToJson(x));
          j = {{"kind", "market_sum"}, {"markets", m}};
        }
      },
      v.data());
  return j;
}

inline Valuation ValuationFromJson(const Json& j) {
  const std::string w = "valuation";
  internal::RequireObject(j, w);
  const std::string kind = internal::Get<std::string>(j, w, "kind");
  try {
    if (kind == "scalar") {
      internal::AllowKeys(j, w, {"kind", "value"});
      return Valuation(Scalar{internal::Get<double>(j, w, "value")});
    }
    if (kind == "additive") {
      internal::AllowKeys(j, w, {"kind", "values"});
      return Valuation(
          Additive{internal::Get<std::vector<double>>(j, w, "values")});
    }
    if (kind == "xos") {
      internal::AllowKeys(j, w, {"kind", "clauses"});
      return Valuation(Xos{
          internal::Get<std::vector<std::vector<double>>>(j, w, "clauses")});
    }
    if (kind == "mph") {
      internal::AllowKeys(j, w, {"kind", "clauses"});
      Mph m;
      const Json& clauses = internal::Field(j, w, "clauses");
      if (!clauses.is_array()) throw ParseError("valuation: clauses list");
      for (const Json& c : clauses) {
        if (!c.is_array()) throw ParseError("valuation: clause list");
        m.clauses.emplace_back();
        for (const Json& e : c) {
          internal::AllowKeys(e, "hyperedge", {"items", "weight"});
          m.clauses.back().push_back(
              {internal::ItemsFrom(internal::Field(e, "hyperedge", "items"),
                                   "hyperedge"),
               internal::Get<double>(e, "hyperedge", "weight")});
        }
      }
      return Valuation(std::move(m));
    }
    if (kind == "knapsack_threshold") {
      internal::AllowKeys(j, w, {"kind", "value", "size"});
      return Valuation(KnapsackThreshold{internal::Get<double>(j, w, "value"),
                                         internal::Get<double>(j, w, "size")});
    }
    if (kind == "table") {
      internal::AllowKeys(j, w, {"kind", "values"});
      Table t;
      const Json& values = internal::Field(j, w, "values");
      if (!values.is_array()) throw ParseError("valuation: table values");
      for (const Json& e : values) {
        if (!e.is_array() || e.size() != 2) {
          throw ParseError("valuation: table entries are [token, value]");
        }
        t.values[e[0].get<Outcome>()] = e[1].get<double>();
      }
      return Valuation(std::move(t));
    }
    if (kind == "market_sum") {
      internal::AllowKeys(j, w, {"kind", "markets"});
      MarketSum ms;
      const Json& m = internal::Field(j, w, "markets");
      if (!m.is_array()) throw ParseError("valuation: markets list");
      for (const Json& x : m) ms.markets.push_back(ValuationFromJson(x));
      return Valuation(std::move(ms));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("valuation: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("valuation: ") + e.what());
  }
  throw ParseError("valuation: unknown kind '" + kind + "'");
}

inline Json DistributionToJson(const ProductDistribution& dist) {
  Json j = Json::array();
  for (const auto& support : dist.supports()) {
    Json s = Json::array();
    for (const Atom& a : support) {
      s.push_back({{"valuation", ValuationToJson(a.valuation)},
                   {"prob", a.prob}});
    }
    j.push_back(s);
  }
  return j;
}

inline ProductDistribution DistributionFromJson(const Json& j) {
  if (!j.is_array()) throw ParseError("distribution: expected a list");
  std::vector<std::vector<Atom>> supports;
  for (const Json& s : j) {
    if (!s.is_array()) throw ParseError("distribution: expected atom lists");
    supports.emplace_back();
    for (const Json& a : s) {
      internal::AllowKeys(a, "atom", {"valuation", "prob"});
      supports.back().push_back(
          {ValuationFromJson(internal::Field(a, "atom", "valuation")),
           internal::Get<double>(a, "atom", "prob")});
    }
  }
  try {
    return ProductDistribution(std::move(supports));
  } catch (const DomainError& e) {
    throw ParseError(std::string("distribution: ") + e.what());
  }
}

inline Json InstanceToJson(const Instance& inst) {
  Json agents = Json::array();
  for (const Valuation& v : inst.agents) agents.push_back(ValuationToJson(v));
  Json j = {{"environment", EnvironmentToJson(inst.env)}, {"agents", agents}};
  if (!inst.name.empty()) j["name"] = inst.name;
  if (!inst.params.empty()) j["params"] = inst.params;
  if (inst.distribution) j["distribution"] = DistributionToJson(*inst.distribution);
  return j;
}

inline Instance InstanceFromJson(const Json& j) {
  const std::string w = "instance";
  internal::AllowKeys(j, w,
                      {"name", "params", "environment", "agents", "distribution"});
  Instance inst;
  if (j.contains("name")) inst.name = internal::Get<std::string>(j, w, "name");
  if (j.contains("params")) {
    internal::RequireObject(j.at("params"), "params");
    inst.params = j.at("params");
  }
  inst.env = EnvironmentFromJson(internal::Field(j, w, "environment"));
  const Json& agents = internal::Field(j, w, "agents");
  if (!agents.is_array()) throw ParseError("agents: expected a list");
  for (const Json& v : agents) inst.agents.push_back(ValuationFromJson(v));
  if (j.contains("distribution")) {
    inst.distribution = DistributionFromJson(j.at("distribution"));
    if (inst.distribution->agents() != inst.env.agents()) {
      throw ParseError("distribution: one support per agent required");
    }
  }
  try {
    CheckProfile(inst.env, inst.agents);
    if (inst.distribution) {
      for (const auto& s : inst.distribution->supports()) {
        for (const Atom& a : s) {
          CheckProfile(inst.env, ValuationProfile(inst.env.agents(),
                                                  a.valuation));
        }
      }
    }
  } catch (const Error& e) {
    throw ParseError(std::string("agents: ") + e.what());
  }
  return inst;
}

inline Instance ParseInstance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return InstanceFromJson(j);
}

inline Instance LoadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseInstance(ss.str());
}

}  // namespace balprice

#endif  // BALPRICE_IO_HPP_
