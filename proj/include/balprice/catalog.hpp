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

// Named instances and seeded random instance families. Every generator is a
// pure function of its parameters and seed.

#ifndef BALPRICE_CATALOG_HPP_
#define BALPRICE_CATALOG_HPP_

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "balprice/core.hpp"
#include "balprice/distribution.hpp"
#include "balprice/matroid.hpp"
#include "balprice/pricing.hpp"

namespace balprice {

struct Instance {
  std::string name;
  Json params = Json::object();
  Environment env;
  ValuationProfile agents;
  std::optional<ProductDistribution> distribution;

  // The distribution, or the point mass on `agents`.
  ProductDistribution Distribution() const {
    return distribution ? *distribution
                        : ProductDistribution::Deterministic(agents);
  }
};

inline ItemSet AllItems(int m) { return (ItemSet{1} << m) - 1; }

// Two bidders on d items: a unit-demand bidder worth 1 (+epsilon) per item,
// and a single-minded bidder worth d for the grand bundle.
inline Instance GenFootnoteLb(int d, double epsilon = 0) {
  if (d < 2) throw ParameterError("footnote-lb needs d >= 2");
  Instance inst;
  inst.name = "footnote-lb";
  inst.params = {{"d", d}, {"epsilon", epsilon}};
  inst.env = Environment::Auction(2, d);
  std::vector<std::vector<Money>> unit;
  for (int j = 0; j < d; ++j) {
    std::vector<Money> c(d, 0.0);
    c[j] = 1.0 + epsilon;
    unit.push_back(c);
  }
  inst.agents = {Valuation::MakeXos(unit),
                 Valuation::SingleMinded(AllItems(d), d)};
  return inst;
}

// Three items; three single-minded bidders want the pairs at 2 each and a
// fourth wants all three items at 3.
inline Instance GenSingleMindedTriangle(double epsilon = 0) {
  Instance inst;
  inst.name = "triangle";
  inst.params = {{"epsilon", epsilon}};
  inst.env = Environment::Auction(4, 3);
  inst.agents = {Valuation::SingleMinded(0b011, 2),
                 Valuation::SingleMinded(0b110, 2),
                 Valuation::SingleMinded(0b101, 2),
                 Valuation::SingleMinded(0b111, 3 + epsilon)};
  return inst;
}

// Outcome t >= 1 of every agent is the sequence with digits (t-1) in base k;
// all winners must share one sequence. Agent i wants digit i to equal z_i,
// with z_i uniform on [k].
inline Instance GenNoPriceInstance(int n, int k,
                                   std::size_t cap = Caps::Default().feasible) {
  if (n < 1 || k < 1) throw ParameterError("no-price needs n, k >= 1");
  std::size_t seqs = 1;
  for (int i = 0; i < n; ++i) {
    seqs *= k;
    if (seqs > cap) throw CapExceeded("no-price outcome space", seqs);
  }
  std::size_t total = 1 + seqs * ((std::size_t{1} << n) - 1);
  if (total > cap) throw CapExceeded("no-price feasible set", total);
  ExplicitEnv e;
  e.counts.assign(n, static_cast<int>(seqs) + 1);
  e.feasible.insert(Allocation(n, kNull));
  for (std::size_t s = 1; s <= seqs; ++s) {
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      Allocation x(n, kNull);
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1) x[i] = s;
      }
      e.feasible.insert(x);
    }
  }
  Instance inst;
  inst.name = "no-price";
  inst.params = {{"n", n}, {"k", k}};
  inst.env = Environment(n, std::move(e));
  std::vector<std::vector<Atom>> supports(n);
  for (int i = 0; i < n; ++i) {
    std::size_t stride = 1;
    for (int j = 0; j < i; ++j) stride *= k;
    for (int z = 0; z < k; ++z) {
      Table t;
      for (std::size_t s = 1; s <= seqs; ++s) {
        if (static_cast<int>((s - 1) / stride % k) == z) t.values[s] = 1.0;
      }
      supports[i].push_back({Valuation(t), 1.0 / k});
    }
  }
  inst.distribution = ProductDistribution(std::move(supports));
  for (int i = 0; i < n; ++i) {
    inst.agents.push_back(inst.distribution->support(i)[0].valuation);
  }
  return inst;
}

// Agent 0 is worth 1; agent 1 is worth 1/q with probability q and 0 otherwise.
inline Instance GenTightProphet(double q) {
  if (!(q > 0 && q <= 1)) throw ParameterError("tight-prophet needs q in (0,1]");
  Instance inst;
  inst.name = "tight-prophet";
  inst.params = {{"q", q}};
  inst.env = Environment::SingleItem(2);
  inst.distribution = ProductDistribution(
      {{{Valuation::MakeScalar(1.0), 1.0}},
       {{Valuation::MakeScalar(1.0 / q), q},
        {Valuation::MakeScalar(0.0), 1.0 - q}}});
  inst.agents = {Valuation::MakeScalar(1.0), Valuation::MakeScalar(1.0 / q)};
  return inst;
}

// Values on the half-integer grid {0, 0.5, ..., top}.
inline Money GridMoney(CounterRng& rng, int top = 10) {
  return rng.UniformInt(0, 2 * top) / 2.0;
}

// n single-item agents with `atoms` random support points each.
inline Instance GenSingleItemRandom(int n, int atoms, std::uint64_t seed) {
  CounterRng rng(seed, 0x51);
  Instance inst;
  inst.name = "single-item";
  inst.params = {{"n", n}, {"atoms", atoms}, {"seed", seed}};
  inst.env = Environment::SingleItem(n);
  std::vector<std::vector<Atom>> s(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> w(atoms);
    double total = 0;
    for (double& x : w) total += (x = rng.UniformInt(1, 4));
    for (int a = 0; a < atoms; ++a) {
      s[i].push_back({Valuation::MakeScalar(GridMoney(rng)), w[a] / total});
    }
    inst.agents.push_back(s[i][0].valuation);
  }
  // Normalize rounding so every support sums to exactly 1.
  for (auto& support : s) {
    double rest = 1.0;
    for (std::size_t a = 0; a + 1 < support.size(); ++a) rest -= support[a].prob;
    support.back().prob = rest;
  }
  inst.distribution = ProductDistribution(std::move(s));
  return inst;
}

struct NamedMatroid {
  std::string name;
  Matroid matroid;
};

// Catalog matroids on at most six elements.
inline std::vector<NamedMatroid> CatalogMatroids() {
  std::vector<NamedMatroid> out;
  out.push_back({"uniform-1-3", Matroid::Uniform(3, 1)});
  out.push_back({"uniform-2-3", Matroid::Uniform(3, 2)});
  out.push_back({"uniform-2-4", Matroid::Uniform(4, 2)});
  out.push_back({"uniform-3-5", Matroid::Uniform(5, 3)});
  out.push_back({"partition-5", Matroid::Partition({0, 0, 1, 1, 1}, {1, 2})});
  out.push_back({"partition-6", Matroid::Partition({0, 0, 1, 1, 2, 2}, {1, 1, 1})});
  out.push_back({"graphic-k4", Matroid::CompleteGraph(4)});
  out.push_back(
      {"graphic-bowtie",
       Matroid::Graphic(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}})});
  return out;
}

inline Matroid NamedCatalogMatroid(const std::string& name) {
  for (auto& m : CatalogMatroids()) {
    if (m.name == name) return m.matroid;
  }
  throw ParameterError("unknown matroid " + name);
}

// One element per agent; values on the half-integer grid.
inline Instance GenMatroid(const std::string& matroid_name, std::uint64_t seed,
                           int atoms = 1) {
  CounterRng rng(seed, 0x3a7);
  Instance inst;
  inst.name = "matroid";
  inst.params = {{"matroid", matroid_name}, {"seed", seed}, {"atoms", atoms}};
  inst.env = Environment::BinaryMatroid(NamedCatalogMatroid(matroid_name));
  const int n = inst.env.agents();
  std::vector<std::vector<Atom>> s(n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < atoms; ++a) {
      s[i].push_back({Valuation::MakeScalar(GridMoney(rng)), 1.0 / atoms});
    }
    inst.agents.push_back(s[i][0].valuation);
  }
  if (atoms > 1) inst.distribution = ProductDistribution(std::move(s));
  return inst;
}

// Knapsack agents with sizes on the grid. With `mixed`, sizes range over
// (0, 1] and the environment admits whole-unit requests; otherwise sizes are
// at most 1/2 and requests are capped at 1/2.
inline Instance GenKnapsackRandom(int n, std::uint64_t seed, int atoms = 1,
                                  bool mixed = false, int grid = 8) {
  CounterRng rng(seed, 0x6b);
  Instance inst;
  inst.name = "knapsack";
  inst.params = {{"n", n}, {"seed", seed}, {"atoms", atoms},
                 {"mixed", mixed}, {"grid", grid}};
  inst.env = Environment::Knapsack(n, grid, mixed ? 1.0 : 0.5);
  const int max_level = mixed ? grid : grid / 2;
  std::vector<std::vector<Atom>> s(n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < atoms; ++a) {
      double size = static_cast<double>(rng.UniformInt(1, max_level)) / grid;
      s[i].push_back(
          {Valuation::MakeKnapsack(GridMoney(rng), size), 1.0 / atoms});
    }
    inst.agents.push_back(s[i][0].valuation);
  }
  if (atoms > 1) inst.distribution = ProductDistribution(std::move(s));
  return inst;
}

// Integral PIP with m unit-capacity constraints; every column has at most d
// non-zero entries, each in {1/4, 1/2}.
inline Instance GenPipRandom(int n, int m, int d, std::uint64_t seed,
                             int atoms = 1) {
  if (d < 1 || d > m) throw ParameterError("pip needs 1 <= d <= m");
  CounterRng rng(seed, 0x919);
  std::vector<std::vector<double>> a(m, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    std::vector<int> rows(m);
    std::iota(rows.begin(), rows.end(), 0);
    for (int k = m - 1; k > 0; --k) std::swap(rows[k], rows[rng.UniformInt(0, k)]);
    int nnz = rng.UniformInt(1, d);
    for (int k = 0; k < nnz; ++k) a[rows[k]][i] = rng.UniformInt(1, 2) / 4.0;
  }
  Instance inst;
  inst.name = "pip";
  inst.params = {{"n", n}, {"m", m}, {"d", d}, {"seed", seed},
                 {"atoms", atoms}};
  inst.env = Environment::Pip(a, 1);
  std::vector<std::vector<Atom>> s(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < atoms; ++k) {
      s[i].push_back({Valuation::MakeScalar(GridMoney(rng)), 1.0 / atoms});
    }
    inst.agents.push_back(s[i][0].valuation);
  }
  if (atoms > 1) inst.distribution = ProductDistribution(std::move(s));
  return inst;
}

inline int ColumnSparsity(const Environment& env) {
  const auto& a = env.as<PipEnv>().matrix;
  int d = 0;
  for (int i = 0; i < env.agents(); ++i) {
    int c = 0;
    for (const auto& row : a) c += row[i] > 0;
    d = std::max(d, c);
  }
  return d;
}

inline Valuation RandomXos(CounterRng& rng, int m, int clauses) {
  std::vector<std::vector<Money>> c(clauses, std::vector<Money>(m));
  for (auto& clause : c) {
    for (Money& v : clause) v = rng.UniformInt(0, 1) ? GridMoney(rng, 4) : 0.0;
  }
  return Valuation::MakeXos(std::move(c));
}

// MPH-k clauses with up to three hyperedges of size at most k.
inline Valuation RandomMph(CounterRng& rng, int m, int k, int clauses) {
  std::vector<std::vector<Hyperedge>> c(clauses);
  for (auto& clause : c) {
    int edges = rng.UniformInt(1, 3);
    for (int e = 0; e < edges; ++e) {
      int size = rng.UniformInt(1, std::min(k, m));
      std::vector<int> items(m);
      std::iota(items.begin(), items.end(), 0);
      for (int t = m - 1; t > 0; --t) {
        std::swap(items[t], items[rng.UniformInt(0, t)]);
      }
      ItemSet s = 0;
      for (int t = 0; t < size; ++t) s |= ItemSet{1} << items[t];
      clause.push_back({s, static_cast<Money>(rng.UniformInt(1, 8)) / 2});
    }
  }
  return Valuation::MakeMph(std::move(c));
}

inline Instance GenXosRandom(int n, int m, int clauses, std::uint64_t seed,
                             int atoms = 1) {
  CounterRng rng(seed, 0x705);
  Instance inst;
  inst.name = "xos";
  inst.params = {{"n", n}, {"m", m}, {"clauses", clauses}, {"seed", seed},
                 {"atoms", atoms}};
  inst.env = Environment::Auction(n, m);
  std::vector<std::vector<Atom>> s(n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < atoms; ++a) {
      s[i].push_back({RandomXos(rng, m, clauses), 1.0 / atoms});
    }
    inst.agents.push_back(s[i][0].valuation);
  }
  if (atoms > 1) inst.distribution = ProductDistribution(std::move(s));
  return inst;
}

inline Instance GenMphRandom(int n, int m, int k, int clauses,
                             std::uint64_t seed, int atoms = 1) {
  CounterRng rng(seed, 0x3f4);
  Instance inst;
  inst.name = "mph";
  inst.params = {{"n", n}, {"m", m}, {"k", k}, {"clauses", clauses},
                 {"seed", seed}, {"atoms", atoms}};
  inst.env = Environment::Auction(n, m);
  std::vector<std::vector<Atom>> s(n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < atoms; ++a) {
      s[i].push_back({RandomMph(rng, m, k, clauses), 1.0 / atoms});
    }
    inst.agents.push_back(s[i][0].valuation);
  }
  if (atoms > 1) inst.distribution = ProductDistribution(std::move(s));
  return inst;
}

// `markets` single-item markets; each agent's value is additive across them.
inline Instance GenProductSingleItems(int n, int markets, std::uint64_t seed) {
  CounterRng rng(seed, 0xadd);
  Instance inst;
  inst.name = "product-single-item";
  inst.params = {{"n", n}, {"markets", markets}, {"seed", seed}};
  std::vector<Environment> envs(markets, Environment::SingleItem(n));
  inst.env = Environment::Product(std::move(envs));
  for (int i = 0; i < n; ++i) {
    MarketSum ms;
    for (int l = 0; l < markets; ++l) {
      ms.markets.push_back(Valuation::MakeScalar(GridMoney(rng)));
    }
    inst.agents.push_back(Valuation(std::move(ms)));
  }
  return inst;
}

// Per-market profiles of a product instance with market_sum valuations.
inline ValuationProfile MarketProfile(const ValuationProfile& profile,
                                      int market) {
  ValuationProfile out;
  for (const Valuation& v : profile) {
    const MarketSum* ms = v.get_if<MarketSum>();
    if (ms == nullptr) throw KindMismatch("expected market_sum valuations");
    out.push_back(ms->markets.at(market));
  }
  return out;
}

// Dispatches a generator by name; `params` keys follow the generators above.
inline Instance Generate(const std::string& name, const Json& params) {
  auto get_int = [&](const char* key, int fallback) {
    return params.contains(key) ? params.at(key).get<int>() : fallback;
  };
  auto get_seed = [&]() {
    return params.contains("seed") ? params.at("seed").get<std::uint64_t>()
                                   : std::uint64_t{0};
  };
  auto get_double = [&](const char* key, double fallback) {
    return params.contains(key) ? params.at(key).get<double>() : fallback;
  };
  if (name == "footnote-lb") {
    return GenFootnoteLb(get_int("d", 4), get_double("epsilon", 0));
  }
  if (name == "triangle") return GenSingleMindedTriangle(get_double("epsilon", 0));
  if (name == "no-price") return GenNoPriceInstance(get_int("n", 3), get_int("k", 3));
  if (name == "tight-prophet") return GenTightProphet(get_double("q", 0.01));
  if (name == "single-item") {
    return GenSingleItemRandom(get_int("n", 2), get_int("atoms", 2), get_seed());
  }
  if (name == "matroid") {
    std::string m = params.contains("matroid")
                        ? params.at("matroid").get<std::string>()
                        : "graphic-k4";
    return GenMatroid(m, get_seed(), get_int("atoms", 1));
  }
  if (name == "knapsack") {
    bool mixed = params.contains("mixed") && params.at("mixed").get<bool>();
    return GenKnapsackRandom(get_int("n", 3), get_seed(), get_int("atoms", 1),
                             mixed, get_int("grid", 8));
  }
  if (name == "pip") {
    return GenPipRandom(get_int("n", 3), get_int("m", 2), get_int("d", 1),
                        get_seed(), get_int("atoms", 1));
  }
  if (name == "xos") {
    return GenXosRandom(get_int("n", 2), get_int("m", 3), get_int("clauses", 2),
                        get_seed(), get_int("atoms", 1));
  }
  if (name == "mph") {
    return GenMphRandom(get_int("n", 2), get_int("m", 3), get_int("k", 2),
                        get_int("clauses", 2), get_seed(), get_int("atoms", 1));
  }
  if (name == "product-single-item") {
    return GenProductSingleItems(get_int("n", 2), get_int("markets", 2),
                                 get_seed());
  }
  throw ParameterError("unknown generator " + name);
}

inline std::vector<std::string> GeneratorNames() {
  return {"footnote-lb", "triangle", "no-price", "tight-prophet",
          "single-item", "matroid",  "knapsack", "pip",
          "xos",         "mph",      "product-single-item"};
}

}  // namespace balprice

#endif  // BALPRICE_CATALOG_HPP_
