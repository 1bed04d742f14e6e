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

// Agents, outcomes, feasibility environments and valuations.

#ifndef BALPRICE_CORE_HPP_
#define BALPRICE_CORE_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "balprice/matroid.hpp"

namespace balprice {

using Money = double;
using Outcome = std::uint64_t;
using Allocation = std::vector<Outcome>;
using ItemSet = std::uint32_t;
// A menu quote; nullopt marks an unavailable (infeasible) entry.
using Quote = std::optional<Money>;

inline constexpr Outcome kNull = 0;
inline constexpr double kTolerance = 1e-9;
inline constexpr int kMaxItems = 16;
inline constexpr int kMarketBits = 16;
inline constexpr int kMaxMarkets = 4;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input is outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An operation was invoked on an environment or valuation it does not support.
class KindMismatch : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t count)
      : Error(what + " exceeds cap (" + std::to_string(count) + ")"),
        count_(count) {}
  std::size_t count() const { return count_; }

 private:
  std::size_t count_;
};

// Resource limits for exhaustive computations.
struct Caps {
  std::size_t feasible = 200000;
  std::size_t support = 100000;
  std::size_t orders = 40320;
  std::size_t nodes = 2000000;

  // Defaults, with every limit replaced by $BALPRICE_CAP when it is set.
  static Caps Default() {
    Caps caps;
    if (const char* env = std::getenv("BALPRICE_CAP")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) {
        caps.feasible = caps.support = caps.orders = caps.nodes =
            static_cast<std::size_t>(v);
      }
    }
    return caps;
  }
};

inline int Popcount(std::uint64_t x) { return std::popcount(x); }

inline std::vector<int> Members(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

inline bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <= kTolerance;
}

// ---------------------------------------------------------------------------
// Environments.

enum class EnvKind {
  kSingleItem,
  kMatroid,
  kCombinatorialAuction,
  kFractionalCa,
  kKnapsack,
  kPip,
  kExplicit,
  kProduct,
};

inline const char* EnvKindName(EnvKind kind) {
  switch (kind) {
    case EnvKind::kSingleItem: return "single_item";
    case EnvKind::kMatroid: return "matroid";
    case EnvKind::kCombinatorialAuction: return "combinatorial_auction";
    case EnvKind::kFractionalCa: return "fractional_ca";
    case EnvKind::kKnapsack: return "knapsack";
    case EnvKind::kPip: return "pip";
    case EnvKind::kExplicit: return "explicit";
    case EnvKind::kProduct: return "product";
  }
  return "?";
}

struct SingleItemEnv {};

// Elements of the ground set are owned by agents; an agent's outcome is an
// independent subset of the elements it owns.
struct MatroidEnv {
  Matroid matroid;
  std::vector<int> owner;
};

// Outcomes are item bitmasks. `fractional` marks the configuration-LP
// variant, whose purchases are still integral bundles.
struct AuctionEnv {
  int items = 0;
  int max_bundle = 0;  // 0 means unrestricted.
  bool fractional = false;
};

// Outcome token = grid level; quantity = level / grid. Capacity 1.
struct KnapsackEnv {
  int grid = 8;
  int max_level = 4;
};

// matrix[j][i] = a_{j,i}; unit capacities. Outcome token = level,
// quantity = level / levels (levels = 1 is the integral program).
struct PipEnv {
  std::vector<std::vector<double>> matrix;
  int levels = 1;
};

// Outcome tokens 0..counts[i]-1 per agent and an explicit feasible list.
struct ExplicitEnv {
  std::vector<int> counts;
  std::set<Allocation> feasible;
};

class Environment;

// Agents participate in every market; an outcome packs one token per market
// into consecutive 16-bit fields.
struct ProductEnv {
  std::vector<Environment> markets;
};

inline Outcome MarketToken(Outcome x, int market) {
  return (x >> (kMarketBits * market)) & ((Outcome{1} << kMarketBits) - 1);
}

inline Outcome PackMarkets(const std::vector<Outcome>& tokens) {
  Outcome x = 0;
  for (std::size_t l = 0; l < tokens.size(); ++l) {
    x |= tokens[l] << (kMarketBits * l);
  }
  return x;
}

class Environment {
 public:
  using Data = std::variant<SingleItemEnv, MatroidEnv, AuctionEnv, KnapsackEnv,
                            PipEnv, ExplicitEnv, ProductEnv>;

  Environment() : Environment(0, SingleItemEnv{}) {}

  Environment(int agents, Data data) : agents_(agents), data_(std::move(data)) {
    if (agents_ < 0) throw DomainError("negative agent count");
    Validate();
    BuildOutcomes();
  }

  static Environment SingleItem(int agents) {
    return Environment(agents, SingleItemEnv{});
  }
  static Environment Auction(int agents, int items, int max_bundle = 0) {
    return Environment(agents, AuctionEnv{items, max_bundle, false});
  }
  static Environment FractionalAuction(int agents, int items) {
    return Environment(agents, AuctionEnv{items, 0, true});
  }
  static Environment Knapsack(int agents, int grid = 8,
                              double max_request = 0.5) {
    int max_level = static_cast<int>(std::floor(max_request * grid + 1e-9));
    return Environment(agents, KnapsackEnv{grid, max_level});
  }
  static Environment Pip(std::vector<std::vector<double>> matrix,
                         int levels = 1) {
    int agents = matrix.empty() ? 0 : static_cast<int>(matrix[0].size());
    return Environment(agents, PipEnv{std::move(matrix), levels});
  }
  // One element per agent: agent i owns element i.
  static Environment BinaryMatroid(Matroid matroid) {
    int n = matroid.ground_size();
    std::vector<int> owner(n);
    for (int e = 0; e < n; ++e) owner[e] = e;
    return Environment(n, MatroidEnv{std::move(matroid), std::move(owner)});
  }
  static Environment Product(std::vector<Environment> markets) {
    if (markets.empty()) throw DomainError("product needs a market");
    int n = markets[0].agents();
    return Environment(n, ProductEnv{std::move(markets)});
  }

  int agents() const { return agents_; }
  const Data& data() const { return data_; }

  template <class T>
  const T& as() const {
    const T* p = std::get_if<T>(&data_);
    if (p == nullptr) {
      throw KindMismatch(std::string("environment is ") + EnvKindName(kind()));
    }
    return *p;
  }

  EnvKind kind() const {
    switch (data_.index()) {
      case 0: return EnvKind::kSingleItem;
      case 1: return EnvKind::kMatroid;
      case 2:
        return std::get<AuctionEnv>(data_).fractional
                   ? EnvKind::kFractionalCa
                   : EnvKind::kCombinatorialAuction;
      case 3: return EnvKind::kKnapsack;
      case 4: return EnvKind::kPip;
      case 5: return EnvKind::kExplicit;
      default: return EnvKind::kProduct;
    }
  }

  bool IsAuction() const { return std::holds_alternative<AuctionEnv>(data_); }

  int items() const {
    if (IsAuction()) return std::get<AuctionEnv>(data_).items;
    if (auto* m = std::get_if<MatroidEnv>(&data_)) {
      return m->matroid.ground_size();
    }
    return 0;
  }

  // Sorted outcome space of an agent; NULL first.
  const std::vector<Outcome>& outcomes(int agent) const {
    return outcomes_.at(agent);
  }

  bool IsValidOutcome(int agent, Outcome x) const {
    const auto& o = outcomes_.at(agent);
    return std::binary_search(o.begin(), o.end(), x);
  }

  // Every agent has exactly one non-NULL outcome.
  bool IsBinary() const {
    for (const auto& o : outcomes_) {
      if (o.size() != 2) return false;
    }
    return true;
  }

  // The unique non-NULL outcome of an agent in a binary environment.
  Outcome Win(int agent) const {
    const auto& o = outcomes_.at(agent);
    if (o.size() != 2) throw KindMismatch("environment is not binary");
    return o[1];
  }

  // Scalar size of an outcome: the quantity for knapsack and PIP, and 0/1
  // elsewhere.
  double Quantity(Outcome x) const {
    if (auto* k = std::get_if<KnapsackEnv>(&data_)) {
      return static_cast<double>(x) / k->grid;
    }
    if (auto* p = std::get_if<PipEnv>(&data_)) {
      return static_cast<double>(x) / p->levels;
    }
    return x == kNull ? 0.0 : 1.0;
  }

  bool IsFeasible(const Allocation& x) const {
    if (static_cast<int>(x.size()) != agents_) return false;
    return std::visit([&](const auto& d) { return Feasible(d, x); }, data_);
  }

 private:
  void Validate() const {
    if (auto* m = std::get_if<MatroidEnv>(&data_)) {
      if (static_cast<int>(m->owner.size()) != m->matroid.ground_size()) {
        throw DomainError("matroid owner list must cover the ground set");
      }
      for (int o : m->owner) {
        if (o < 0 || o >= agents_) throw DomainError("bad element owner");
      }
    } else if (auto* a = std::get_if<AuctionEnv>(&data_)) {
      if (a->items < 0 || a->items > kMaxItems) {
        throw DomainError("item count must be in [0,16]");
      }
    } else if (auto* k = std::get_if<KnapsackEnv>(&data_)) {
      if (k->grid < 1 || k->max_level < 0 || k->max_level > k->grid) {
        throw DomainError("bad knapsack grid");
      }
    } else if (auto* p = std::get_if<PipEnv>(&data_)) {
      if (p->levels < 1) throw DomainError("bad PIP grid");
      for (const auto& row : p->matrix) {
        if (static_cast<int>(row.size()) != agents_) {
          throw DomainError("PIP row length must equal agent count");
        }
        for (double a : row) {
          if (!(a >= 0.0) || a > 0.5 + kTolerance) {
            throw DomainError("PIP coefficients must lie in [0, 1/2]");
          }
        }
      }
    } else if (auto* e = std::get_if<ExplicitEnv>(&data_)) {
      if (static_cast<int>(e->counts.size()) != agents_) {
        throw DomainError("explicit outcome counts must cover every agent");
      }
      Allocation empty(agents_, kNull);
      if (!e->feasible.count(empty)) {
        throw DomainError("the all-NULL allocation must be feasible");
      }
      for (const Allocation& x : e->feasible) {
        if (static_cast<int>(x.size()) != agents_) {
          throw DomainError("explicit allocation has the wrong length");
        }
        for (int i = 0; i < agents_; ++i) {
          if (x[i] >= static_cast<Outcome>(e->counts[i])) {
            throw DomainError("explicit allocation uses an unknown outcome");
          }
          if (x[i] == kNull) continue;
          Allocation y = x;
          y[i] = kNull;
          if (!e->feasible.count(y)) {
            throw DomainError("explicit feasible set is not downward closed");
          }
        }
      }
    } else if (auto* p = std::get_if<ProductEnv>(&data_)) {
      if (p->markets.empty() ||
          static_cast<int>(p->markets.size()) > kMaxMarkets) {
        throw DomainError("product needs 1 to 4 markets");
      }
      for (const auto& m : p->markets) {
        if (m.agents() != agents_) {
          throw DomainError("market agent counts differ");
        }
        for (int i = 0; i < agents_; ++i) {
          if (!m.outcomes(i).empty() &&
              m.outcomes(i).back() >= (Outcome{1} << kMarketBits)) {
            throw DomainError("market outcome token too wide");
          }
        }
      }
    }
  }

  void BuildOutcomes() {
    outcomes_.assign(agents_, {});
    for (int i = 0; i < agents_; ++i) {
      std::vector<Outcome>& o = outcomes_[i];
      o.push_back(kNull);
      std::visit([&](const auto& d) { AppendOutcomes(d, i, o); }, data_);
      std::sort(o.begin(), o.end());
      o.erase(std::unique(o.begin(), o.end()), o.end());
    }
  }

  void AppendOutcomes(const SingleItemEnv&, int, std::vector<Outcome>& o) {
    o.push_back(1);
  }
  void AppendOutcomes(const MatroidEnv& m, int i, std::vector<Outcome>& o) {
    ItemSet own = 0;
    for (int e = 0; e < m.matroid.ground_size(); ++e) {
      if (m.owner[e] == i) own |= ItemSet{1} << e;
    }
    // Enumerate the non-empty subsets of `own`.
    for (ItemSet s = own; s != 0; s = (s - 1) & own) {
      if (m.matroid.IsIndependent(s)) o.push_back(s);
    }
  }
  void AppendOutcomes(const AuctionEnv& a, int, std::vector<Outcome>& o) {
    for (Outcome s = 1; s < (Outcome{1} << a.items); ++s) {
      if (a.max_bundle == 0 || Popcount(s) <= a.max_bundle) o.push_back(s);
    }
  }
  void AppendOutcomes(const KnapsackEnv& k, int, std::vector<Outcome>& o) {
    for (int l = 1; l <= k.max_level; ++l) o.push_back(l);
  }
  void AppendOutcomes(const PipEnv& p, int i, std::vector<Outcome>& o) {
    for (int l = 1; l <= p.levels; ++l) {
      bool fits = true;
      for (const auto& row : p.matrix) {
        if (row[i] * l / p.levels > 1.0 + kTolerance) fits = false;
      }
      if (fits) o.push_back(l);
    }
  }
  void AppendOutcomes(const ExplicitEnv& e, int i, std::vector<Outcome>& o) {
    for (int t = 1; t < e.counts[i]; ++t) o.push_back(t);
  }
  void AppendOutcomes(const ProductEnv& p, int i, std::vector<Outcome>& o) {
    std::vector<Outcome> acc = {0};
    for (std::size_t l = 0; l < p.markets.size(); ++l) {
      std::vector<Outcome> next;
      for (Outcome prefix : acc) {
        for (Outcome t : p.markets[l].outcomes(i)) {
          next.push_back(prefix | (t << (kMarketBits * l)));
        }
      }
      acc = std::move(next);
    }
    for (Outcome x : acc) {
      if (x != kNull) o.push_back(x);
    }
  }

  bool Feasible(const SingleItemEnv&, const Allocation& x) const {
    int taken = 0;
    for (Outcome xi : x) taken += xi != kNull;
    return taken <= 1;
  }
  bool Feasible(const MatroidEnv& m, const Allocation& x) const {
    ItemSet all = 0;
    for (Outcome xi : x) all |= static_cast<ItemSet>(xi);
    return m.matroid.IsIndependent(all);
  }
  bool Feasible(const AuctionEnv&, const Allocation& x) const {
    Outcome used = 0;
    for (Outcome xi : x) {
      if (used & xi) return false;
      used |= xi;
    }
    return true;
  }
  bool Feasible(const KnapsackEnv& k, const Allocation& x) const {
    Outcome total = 0;
    for (Outcome xi : x) total += xi;
    return total <= static_cast<Outcome>(k.grid);
  }
  bool Feasible(const PipEnv& p, const Allocation& x) const {
    for (const auto& row : p.matrix) {
      double load = 0;
      for (int i = 0; i < agents_; ++i) {
        load += row[i] * static_cast<double>(x[i]) / p.levels;
      }
      if (load > 1.0 + kTolerance) return false;
    }
    return true;
  }
  bool Feasible(const ExplicitEnv& e, const Allocation& x) const {
    return e.feasible.count(x) > 0;
  }
  bool Feasible(const ProductEnv& p, const Allocation& x) const {
    Allocation part(agents_);
    for (std::size_t l = 0; l < p.markets.size(); ++l) {
      for (int i = 0; i < agents_; ++i) {
        part[i] = MarketToken(x[i], static_cast<int>(l));
      }
      if (!p.markets[l].IsFeasible(part)) return false;
    }
    return true;
  }

  int agents_;
  Data data_;
  std::vector<std::vector<Outcome>> outcomes_;
};

// x_S: agents outside `keep` set to NULL.
inline Allocation Restrict(const Allocation& x, const std::vector<bool>& keep) {
  Allocation out = x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!keep[i]) out[i] = kNull;
  }
  return out;
}

// The allocation of the first `count` agents of `order`; everyone else NULL.
inline Allocation Prefix(const Allocation& x, const std::vector<int>& order,
                         int count) {
  Allocation out(x.size(), kNull);
  for (int k = 0; k < count; ++k) out[order[k]] = x[order[k]];
  return out;
}

inline bool IsEmpty(const Allocation& x) {
  return std::all_of(x.begin(), x.end(),
                     [](Outcome o) { return o == kNull; });
}

// All feasible allocations in lexicographic order of outcome tokens.
inline std::vector<Allocation> EnumerateFeasible(const Environment& env,
                                                 std::size_t cap) {
  std::vector<Allocation> out;
  const int n = env.agents();
  Allocation x(n, kNull);
  // Depth-first over agents; downward closure makes partial checks sound.
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      if (out.size() >= cap) throw CapExceeded("feasible set", out.size() + 1);
      out.push_back(x);
      return;
    }
    for (Outcome o : env.outcomes(i)) {
      x[i] = o;
      if (o == kNull || env.IsFeasible(x)) self(self, i + 1);
    }
    x[i] = kNull;
  };
  rec(rec, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Valuations.

struct Hyperedge {
  ItemSet items = 0;
  Money weight = 0;
};

struct Additive {
  std::vector<Money> values;
};
struct Xos {
  std::vector<std::vector<Money>> clauses;
};
struct Mph {
  std::vector<std::vector<Hyperedge>> clauses;
};
struct KnapsackThreshold {
  Money value = 0;
  double size = 0;
};
struct Scalar {
  Money value = 0;
};
struct Table {
  std::map<Outcome, Money> values;
};

class Valuation;

struct MarketSum {
  std::vector<Valuation> markets;
};

class Valuation {
 public:
  using Data = std::variant<Additive, Xos, Mph, KnapsackThreshold, Scalar,
                            Table, MarketSum>;

  Valuation() : data_(Scalar{}) {}
  Valuation(Data data) : data_(std::move(data)) { Validate(); }  // NOLINT

  static Valuation MakeScalar(Money v) { return Valuation(Scalar{v}); }
  static Valuation MakeAdditive(std::vector<Money> v) {
    return Valuation(Additive{std::move(v)});
  }
  static Valuation MakeXos(std::vector<std::vector<Money>> clauses) {
    return Valuation(Xos{std::move(clauses)});
  }
  static Valuation MakeMph(std::vector<std::vector<Hyperedge>> clauses) {
    return Valuation(Mph{std::move(clauses)});
  }
  static Valuation MakeKnapsack(Money value, double size) {
    return Valuation(KnapsackThreshold{value, size});
  }
  // Single-minded bidder: `value` for any bundle containing `bundle`.
  static Valuation SingleMinded(ItemSet bundle, Money value) {
    return Valuation(Mph{{{Hyperedge{bundle, value}}}});
  }

  const Data& data() const { return data_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&data_);
  }

  const char* kind_name() const {
    static const char* kNames[] = {"additive", "xos",   "mph",
                                   "knapsack_threshold", "scalar",
                                   "table",    "market_sum"};
    return kNames[data_.index()];
  }

  // Largest hyperedge of an MPH valuation.
  int rank() const {
    int k = 0;
    if (auto* m = std::get_if<Mph>(&data_)) {
      for (const auto& c : m->clauses) {
        for (const auto& h : c) k = std::max(k, Popcount(h.items));
      }
    }
    return k;
  }

  friend bool operator==(const Valuation& a, const Valuation& b);

 private:
  void Validate() const {
    auto finite_nonneg = [](Money v) { return std::isfinite(v) && v >= 0; };
    if (auto* a = std::get_if<Additive>(&data_)) {
      for (Money v : a->values) {
        if (!finite_nonneg(v)) throw DomainError("additive value invalid");
      }
    } else if (auto* x = std::get_if<Xos>(&data_)) {
      for (const auto& c : x->clauses) {
        for (Money v : c) {
          if (!finite_nonneg(v)) throw DomainError("xos value invalid");
        }
      }
    } else if (auto* m = std::get_if<Mph>(&data_)) {
      for (const auto& c : m->clauses) {
        for (const auto& h : c) {
          if (!finite_nonneg(h.weight)) throw DomainError("mph weight < 0");
          if (h.items == 0) throw DomainError("empty hyperedge");
        }
      }
    } else if (auto* k = std::get_if<KnapsackThreshold>(&data_)) {
      if (!finite_nonneg(k->value) || !(k->size >= 0 && k->size <= 1)) {
        throw DomainError("knapsack valuation invalid");
      }
    } else if (auto* s = std::get_if<Scalar>(&data_)) {
      if (!finite_nonneg(s->value)) throw DomainError("scalar value invalid");
    } else if (auto* t = std::get_if<Table>(&data_)) {
      for (const auto& [x, v] : t->values) {
        if (!finite_nonneg(v)) throw DomainError("table value invalid");
        if (x == kNull && v != 0) throw DomainError("table value(NULL) != 0");
      }
    }
  }

  Data data_;
};

inline bool operator==(const Additive& a, const Additive& b) {
  return a.values == b.values;
}
inline bool operator==(const Xos& a, const Xos& b) {
  return a.clauses == b.clauses;
}
inline bool operator==(const Hyperedge& a, const Hyperedge& b) {
  return a.items == b.items && a.weight == b.weight;
}
inline bool operator==(const Mph& a, const Mph& b) {
  return a.clauses == b.clauses;
}
inline bool operator==(const KnapsackThreshold& a, const KnapsackThreshold& b) {
  return a.value == b.value && a.size == b.size;
}
inline bool operator==(const Scalar& a, const Scalar& b) {
  return a.value == b.value;
}
inline bool operator==(const Table& a, const Table& b) {
  return a.values == b.values;
}
inline bool operator==(const MarketSum& a, const MarketSum& b) {
  return a.markets == b.markets;
}
inline bool operator==(const Valuation& a, const Valuation& b) {
  return a.data_ == b.data_;
}

using ValuationProfile = std::vector<Valuation>;

namespace internal {

inline Money AdditiveSum(const std::vector<Money>& values, ItemSet s) {
  Money total = 0;
  for (int j : Members(s)) {
    if (j < static_cast<int>(values.size())) total += values[j];
  }
  return total;
}

inline Money ClauseSum(const std::vector<Hyperedge>& clause, ItemSet s) {
  Money total = 0;
  for (const auto& h : clause) {
    if ((h.items & s) == h.items) total += h.weight;
  }
  return total;
}

inline void CheckToken(const Environment& env, Outcome x) {
  switch (env.kind()) {
    case EnvKind::kSingleItem:
      if (x > 1) throw DomainError("unknown outcome token");
      break;
    case EnvKind::kCombinatorialAuction:
    case EnvKind::kFractionalCa:
    case EnvKind::kMatroid:
      if (x >> env.items()) throw DomainError("unknown outcome token");
      break;
    case EnvKind::kKnapsack:
      if (x > static_cast<Outcome>(env.as<KnapsackEnv>().grid)) {
        throw DomainError("unknown outcome token");
      }
      break;
    case EnvKind::kPip:
      if (x > static_cast<Outcome>(env.as<PipEnv>().levels)) {
        throw DomainError("unknown outcome token");
      }
      break;
    default:
      break;
  }
}

}  // namespace internal

// v(x) for an outcome of `env`.
inline Money Value(const Valuation& v, Outcome x, const Environment& env) {
  internal::CheckToken(env, x);
  if (x == kNull) return 0;
  const auto& d = v.data();
  if (auto* a = std::get_if<Additive>(&d)) {
    return internal::AdditiveSum(a->values, static_cast<ItemSet>(x));
  }
  if (auto* c = std::get_if<Xos>(&d)) {
    Money best = 0;
    for (const auto& clause : c->clauses) {
      best = std::max(best,
                      internal::AdditiveSum(clause, static_cast<ItemSet>(x)));
    }
    return best;
  }
  if (auto* m = std::get_if<Mph>(&d)) {
    Money best = 0;
    for (const auto& clause : m->clauses) {
      best = std::max(best,
                      internal::ClauseSum(clause, static_cast<ItemSet>(x)));
    }
    return best;
  }
  if (auto* k = std::get_if<KnapsackThreshold>(&d)) {
    return env.Quantity(x) + kTolerance >= k->size ? k->value : 0.0;
  }
  if (auto* s = std::get_if<Scalar>(&d)) {
    return s->value * env.Quantity(x);
  }
  if (auto* t = std::get_if<Table>(&d)) {
    auto it = t->values.find(x);
    return it == t->values.end() ? 0.0 : it->second;
  }
  const auto& ms = std::get<MarketSum>(d);
  const auto& markets = env.as<ProductEnv>().markets;
  if (ms.markets.size() != markets.size()) {
    throw DomainError("market_sum size differs from market count");
  }
  Money total = 0;
  for (std::size_t l = 0; l < markets.size(); ++l) {
    total += Value(ms.markets[l], MarketToken(x, static_cast<int>(l)),
                   markets[l]);
  }
  return total;
}

inline Money Welfare(const Environment& env, const ValuationProfile& profile,
                     const Allocation& x) {
  Money total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += Value(profile[i], x[i], env);
  }
  return total;
}

// The value of each agent's unique winning outcome (binary environments).
inline std::vector<Money> Bids(const Environment& env,
                               const ValuationProfile& profile) {
  std::vector<Money> b(env.agents());
  for (int i = 0; i < env.agents(); ++i) {
    b[i] = Value(profile[i], env.Win(i), env);
  }
  return b;
}

inline ValuationProfile ScalarProfile(const std::vector<Money>& values) {
  ValuationProfile p;
  for (Money v : values) p.push_back(Valuation::MakeScalar(v));
  return p;
}

inline void CheckProfile(const Environment& env,
                         const ValuationProfile& profile) {
  if (static_cast<int>(profile.size()) != env.agents()) {
    throw DomainError("profile length differs from agent count");
  }
}

}  // namespace balprice

#endif  // BALPRICE_CORE_HPP_
