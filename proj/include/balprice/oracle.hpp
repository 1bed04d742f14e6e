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

// Allocation oracles: exhaustive and greedy welfare maximization, residual
// optima over exchange families, critical values and permeability.

#ifndef BALPRICE_ORACLE_HPP_
#define BALPRICE_ORACLE_HPP_

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "balprice/core.hpp"
#include "balprice/simplex.hpp"

namespace balprice {

// An environment together with its enumerated feasible set.
class FeasibleSpace {
 public:
  FeasibleSpace(Environment env, std::size_t cap)
      : env_(std::move(env)), all_(EnumerateFeasible(env_, cap)) {}

  const Environment& env() const { return env_; }
  const std::vector<Allocation>& all() const { return all_; }
  std::size_t size() const { return all_.size(); }

 private:
  Environment env_;
  std::vector<Allocation> all_;
};

// First maximizer of `score` over `candidates`, ties to the earlier entry.
template <class Score>
std::size_t FirstArgmax(std::size_t count, Score score) {
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < count; ++k) {
    double v = score(k);
    if (v > best_value + kTolerance) {
      best = k;
      best_value = v;
    }
  }
  return best;
}

inline Allocation Opt(const FeasibleSpace& space,
                      const ValuationProfile& profile) {
  CheckProfile(space.env(), profile);
  const auto& all = space.all();
  std::size_t k = FirstArgmax(all.size(), [&](std::size_t j) {
    return Welfare(space.env(), profile, all[j]);
  });
  return all[k];
}

inline Allocation Opt(const Environment& env, const ValuationProfile& profile,
                      std::size_t cap = Caps::Default().feasible) {
  return Opt(FeasibleSpace(env, cap), profile);
}

// Exact welfare maximization on the knapsack grid by dynamic programming
// over used capacity.
inline Allocation KnapsackDp(const Environment& env,
                             const ValuationProfile& profile) {
  const auto& k = env.as<KnapsackEnv>();
  CheckProfile(env, profile);
  const int n = env.agents();
  const int cap = k.grid;
  const double kNeg = -1.0;
  // best[i][c]: max welfare of agents i.. with c units of capacity left.
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(cap + 1, 0));
  std::vector<std::vector<Outcome>> pick(n, std::vector<Outcome>(cap + 1, 0));
  for (int i = n - 1; i >= 0; --i) {
    for (int c = 0; c <= cap; ++c) {
      double top = kNeg;
      for (Outcome o : env.outcomes(i)) {
        if (static_cast<int>(o) > c) continue;
        double v = Value(profile[i], o, env) + best[i + 1][c - o];
        if (v > top + kTolerance) {
          top = v;
          pick[i][c] = o;
        }
      }
      best[i][c] = top;
    }
  }
  Allocation x(n, kNull);
  int c = cap;
  for (int i = 0; i < n; ++i) {
    x[i] = pick[i][c];
    c -= static_cast<int>(x[i]);
  }
  return x;
}

// Greedy by value. Binary environments scan agents by non-increasing value
// (ties by index). Matroids with multi-element owners repeatedly add the
// element with the largest positive marginal value.
inline Allocation Greedy(const Environment& env,
                         const ValuationProfile& profile) {
  CheckProfile(env, profile);
  const int n = env.agents();
  Allocation x(n, kNull);
  if (env.IsBinary()) {
    std::vector<Money> b = Bids(env, profile);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int l, int r) { return b[l] > b[r]; });
    for (int i : order) {
      if (b[i] <= 0) break;
      x[i] = env.Win(i);
      if (!env.IsFeasible(x)) x[i] = kNull;
    }
    return x;
  }
  if (env.kind() != EnvKind::kMatroid) {
    throw KindMismatch("greedy needs a binary or matroid environment");
  }
  const auto& m = env.as<MatroidEnv>();
  for (;;) {
    int best_e = -1;
    double best_gain = kTolerance;
    ItemSet used = 0;
    for (Outcome o : x) used |= static_cast<ItemSet>(o);
    for (int e = 0; e < m.matroid.ground_size(); ++e) {
      ItemSet bit = ItemSet{1} << e;
      if ((used & bit) || !m.matroid.IsIndependent(used | bit)) continue;
      int i = m.owner[e];
      double gain = Value(profile[i], x[i] | bit, env) -
                    Value(profile[i], x[i], env);
      if (gain > best_gain + kTolerance) {
        best_gain = gain;
        best_e = e;
      }
    }
    if (best_e < 0) return x;
    x[m.owner[best_e]] |= ItemSet{1} << best_e;
  }
}

// ---------------------------------------------------------------------------
// Exchange families. Every family also admits the all-NULL allocation, which
// contributes zero welfare and zero price and so never changes a check.

enum class FamilyKind {
  kCanonicalContraction,
  kItemDisjoint,
  kKnapsackThreshold,
  kPipThreshold,
  kSingleItemGate,
  kProduct,
};

inline const char* FamilyKindName(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kCanonicalContraction: return "canonical_contraction";
    case FamilyKind::kItemDisjoint: return "item_disjoint";
    case FamilyKind::kKnapsackThreshold: return "knapsack_threshold";
    case FamilyKind::kPipThreshold: return "pip_threshold";
    case FamilyKind::kSingleItemGate: return "single_item_gate";
    case FamilyKind::kProduct: return "product";
  }
  return "?";
}

struct ExchangeFamily {
  FamilyKind kind = FamilyKind::kCanonicalContraction;
  std::vector<ExchangeFamily> parts;  // Per market, for kProduct.

  static ExchangeFamily Of(FamilyKind kind) { return {kind, {}}; }
  static ExchangeFamily Product(std::vector<ExchangeFamily> parts) {
    return {FamilyKind::kProduct, std::move(parts)};
  }

  // Whether y ∈ F_x; both x and y are feasible allocations of `env`.
  bool Contains(const Environment& env, const Allocation& x,
                const Allocation& y) const {
    if (IsEmpty(y)) return true;
    const int n = env.agents();
    switch (kind) {
      case FamilyKind::kCanonicalContraction: {
        Allocation merged = x;
        for (int i = 0; i < n; ++i) {
          if (y[i] == kNull) continue;
          if (x[i] != kNull) return false;
          merged[i] = y[i];
        }
        return env.IsFeasible(merged);
      }
      case FamilyKind::kItemDisjoint: {
        ItemSet ux = 0, uy = 0;
        for (int i = 0; i < n; ++i) {
          ux |= static_cast<ItemSet>(x[i]);
          uy |= static_cast<ItemSet>(y[i]);
        }
        if (ux & uy) return false;
        if (env.kind() == EnvKind::kMatroid) {
          return env.as<MatroidEnv>().matroid.IsIndependent(ux | uy);
        }
        if (!env.IsAuction()) {
          throw KindMismatch("item_disjoint needs an auction or matroid");
        }
        return true;
      }
      case FamilyKind::kKnapsackThreshold: {
        const auto& k = env.as<KnapsackEnv>();
        Outcome total = 0;
        for (Outcome o : x) total += o;
        return 2 * total < static_cast<Outcome>(k.grid);
      }
      case FamilyKind::kPipThreshold: {
        const auto& p = env.as<PipEnv>();
        for (const auto& row : p.matrix) {
          double load_x = 0, load_y = 0;
          for (int i = 0; i < n; ++i) {
            load_x += row[i] * env.Quantity(x[i]);
            load_y += row[i] * env.Quantity(y[i]);
          }
          double cap = load_x <= 0.5 + kTolerance ? 1.0 : 0.0;
          if (load_y > cap + kTolerance) return false;
        }
        return true;
      }
      case FamilyKind::kSingleItemGate:
        return IsEmpty(x);
      case FamilyKind::kProduct: {
        const auto& markets = env.as<ProductEnv>().markets;
        if (parts.size() != markets.size()) {
          throw DomainError("product family needs one part per market");
        }
        Allocation xl(n), yl(n);
        for (std::size_t l = 0; l < markets.size(); ++l) {
          for (int i = 0; i < n; ++i) {
            xl[i] = MarketToken(x[i], static_cast<int>(l));
            yl[i] = MarketToken(y[i], static_cast<int>(l));
          }
          if (!parts[l].Contains(markets[l], xl, yl)) return false;
        }
        return true;
      }
    }
    return false;
  }
};

// Indices (into space.all()) of the members of F_x.
inline std::vector<std::size_t> FamilyMembers(const FeasibleSpace& space,
                                              const ExchangeFamily& family,
                                              const Allocation& x) {
  std::vector<std::size_t> out;
  const auto& all = space.all();
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (family.Contains(space.env(), x, all[k])) out.push_back(k);
  }
  return out;
}

inline Allocation ResidualOpt(const FeasibleSpace& space,
                              const ValuationProfile& profile,
                              const ExchangeFamily& family,
                              const Allocation& x) {
  std::vector<std::size_t> members = FamilyMembers(space, family, x);
  const auto& all = space.all();
  std::size_t k = FirstArgmax(members.size(), [&](std::size_t j) {
    return Welfare(space.env(), profile, all[members[j]]);
  });
  return all[members[k]];
}

// ---------------------------------------------------------------------------
// Binary single-parameter rules.

enum class RuleKind { kOpt, kGreedy };

inline const char* RuleKindName(RuleKind r) {
  return r == RuleKind::kOpt ? "opt" : "greedy";
}

// Winners (as a 0/1 vector) chosen by `rule` on bids `b` in the subinstance
// that holds the winners of `fixed` allocated. Agents in `fixed` and agents
// with non-positive bids are never selected.
inline std::vector<bool> RunRule(RuleKind rule, const FeasibleSpace& space,
                                 const std::vector<Money>& b,
                                 const std::vector<bool>& fixed) {
  const Environment& env = space.env();
  const int n = env.agents();
  std::vector<bool> win(n, false);
  if (rule == RuleKind::kGreedy) {
    Allocation x(n, kNull);
    for (int i = 0; i < n; ++i) {
      if (fixed[i]) x[i] = env.Win(i);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int l, int r) { return b[l] > b[r]; });
    for (int i : order) {
      if (fixed[i] || b[i] <= 0) continue;
      x[i] = env.Win(i);
      if (env.IsFeasible(x)) {
        win[i] = true;
      } else {
        x[i] = kNull;
      }
    }
    return win;
  }
  const auto& all = space.all();
  double best_value = -1;
  const Allocation* best = nullptr;
  for (const Allocation& z : all) {
    bool extends = true;
    double w = 0;
    for (int i = 0; i < n; ++i) {
      if (fixed[i]) {
        if (z[i] == kNull) {
          extends = false;
          break;
        }
      } else if (z[i] != kNull) {
        w += b[i];
      }
    }
    if (extends && w > best_value + kTolerance) {
      best_value = w;
      best = &z;
    }
  }
  if (best != nullptr) {
    for (int i = 0; i < n; ++i) {
      win[i] = !fixed[i] && (*best)[i] != kNull && b[i] > 0;
    }
  }
  return win;
}

namespace internal {

// max Σ b_j over winners outside `fixed`, among feasible allocations that
// contain `fixed` and give agent i outcome `with_i`; nullopt if none.
inline std::optional<double> BestExtension(const FeasibleSpace& space,
                                           const std::vector<Money>& b,
                                           const std::vector<bool>& fixed,
                                           int agent, bool with_agent) {
  const int n = space.env().agents();
  std::optional<double> best;
  for (const Allocation& z : space.all()) {
    if ((z[agent] != kNull) != with_agent) continue;
    bool extends = true;
    double w = 0;
    for (int j = 0; j < n; ++j) {
      if (fixed[j]) {
        if (z[j] == kNull) {
          extends = false;
          break;
        }
      } else if (j != agent && z[j] != kNull) {
        w += std::max(0.0, b[j]);
      }
    }
    if (extends && (!best || w > *best)) best = w;
  }
  return best;
}

}  // namespace internal

// Infimum bid at which `agent` wins under `rule` against bids `b` (the
// agent's own entry is ignored) while the winners in `fixed` stay allocated.
// nullopt when the agent cannot win at any bid.
inline Quote CriticalValue(RuleKind rule, const FeasibleSpace& space,
                           const std::vector<Money>& b,
                           const std::vector<bool>& fixed, int agent) {
  if (!space.env().IsBinary()) {
    throw KindMismatch("critical values need a binary environment");
  }
  if (fixed[agent]) throw DomainError("agent is already allocated");
  if (rule == RuleKind::kOpt) {
    auto with = internal::BestExtension(space, b, fixed, agent, true);
    if (!with) return std::nullopt;
    auto without = internal::BestExtension(space, b, fixed, agent, false);
    return std::max(0.0, *without - *with);
  }
  // Greedy changes its outcome only when the bid crosses another bid, so
  // the critical value is the lowest candidate whose open interval above
  // still wins.
  std::vector<Money> candidates = {0.0};
  for (int j = 0; j < static_cast<int>(b.size()); ++j) {
    if (j != agent && !fixed[j] && b[j] > 0) candidates.push_back(b[j]);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  std::vector<Money> bids = b;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    double above = k + 1 < candidates.size()
                       ? (candidates[k] + candidates[k + 1]) / 2
                       : candidates[k] + 1.0;
    bids[agent] = above;
    if (RunRule(rule, space, bids, fixed)[agent]) return candidates[k];
  }
  return std::nullopt;
}

// A measured multiplier that may be unbounded.
struct Bound {
  double value = 0;
  bool unbounded = false;

  bool AtMost(double limit) const {
    return !unbounded && value <= limit + kTolerance;
  }
};

struct PermeabilityReport {
  Bound gamma;
  std::vector<Money> worst_bids;
  std::vector<bool> worst_fixed;
  std::size_t bid_vectors = 0;
};

// Max over subinstances (every feasible `fixed`, or only the empty one),
// grid bid vectors b over the free agents, and feasible extensions x of
// Σ_{i∈x} τ_i(b_-i) / b(f(b)). Values below 1 are reported as 1.
inline PermeabilityReport Permeability(RuleKind rule,
                                       const FeasibleSpace& space,
                                       const std::vector<Money>& grid,
                                       bool subinstances = true) {
  const Environment& env = space.env();
  const int n = env.agents();
  PermeabilityReport report;
  report.gamma.value = 1.0;
  if (grid.empty()) return report;
  std::vector<std::vector<bool>> fixeds;
  for (const Allocation& y : space.all()) {
    if (!subinstances && !IsEmpty(y)) continue;
    std::vector<bool> f(n);
    for (int i = 0; i < n; ++i) f[i] = y[i] != kNull;
    fixeds.push_back(f);
  }
  for (const auto& fixed : fixeds) {
    std::vector<int> free;
    for (int i = 0; i < n; ++i) {
      if (!fixed[i]) free.push_back(i);
    }
    std::vector<std::size_t> digit(free.size(), 0);
    std::vector<Money> b(n, 0.0);
    for (;;) {
      for (std::size_t k = 0; k < free.size(); ++k) {
        b[free[k]] = grid[digit[k]];
      }
      ++report.bid_vectors;
      std::vector<bool> win = RunRule(rule, space, b, fixed);
      double den = 0;
      for (int i = 0; i < n; ++i) {
        if (win[i]) den += b[i];
      }
      std::vector<Quote> tau(n);
      for (int i : free) tau[i] = CriticalValue(rule, space, b, fixed, i);
      double num = 0;
      for (const Allocation& x : space.all()) {
        double s = 0;
        bool extends = true;
        for (int i = 0; i < n; ++i) {
          if (fixed[i] && x[i] == kNull) extends = false;
          if (!fixed[i] && x[i] != kNull && tau[i]) s += *tau[i];
        }
        if (extends) num = std::max(num, s);
      }
      if (den <= kTolerance) {
        if (num > kTolerance && !report.gamma.unbounded) {
          report.gamma.unbounded = true;
          report.worst_bids = b;
          report.worst_fixed = fixed;
        }
      } else if (num / den > report.gamma.value + kTolerance &&
                 !report.gamma.unbounded) {
        report.gamma.value = num / den;
        report.worst_bids = b;
        report.worst_fixed = fixed;
      }
      std::size_t k = 0;
      while (k < digit.size() && ++digit[k] == grid.size()) digit[k++] = 0;
      if (k == digit.size()) break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Configuration LP for combinatorial auctions.

struct FractionalSolution {
  double objective = 0;
  // weights[i] maps a bundle to x*_{i,S}; only positive entries are kept.
  std::vector<std::map<ItemSet, double>> weights;
  long iterations = 0;
};

inline FractionalSolution FractionalOptConfigLp(
    const Environment& env, const ValuationProfile& profile) {
  if (!env.IsAuction()) throw KindMismatch("configuration LP needs items");
  CheckProfile(env, profile);
  const int n = env.agents();
  const int m = env.items();
  if (m > 8 || n > 6) throw DomainError("configuration LP limited to m<=8, n<=6");
  struct Var {
    int agent;
    ItemSet bundle;
  };
  std::vector<Var> vars;
  std::vector<double> c;
  for (int i = 0; i < n; ++i) {
    for (Outcome s : env.outcomes(i)) {
      if (s == kNull) continue;
      vars.push_back({i, static_cast<ItemSet>(s)});
      c.push_back(Value(profile[i], s, env));
    }
  }
  std::vector<std::vector<double>> a(n + m, std::vector<double>(vars.size()));
  for (std::size_t v = 0; v < vars.size(); ++v) {
    a[vars[v].agent][v] = 1.0;
    for (int j : Members(vars[v].bundle)) a[n + j][v] = 1.0;
  }
  LpResult lp = SolvePackingLp(a, std::vector<double>(n + m, 1.0), c);
  FractionalSolution out;
  out.objective = lp.objective;
  out.iterations = lp.iterations;
  out.weights.assign(n, {});
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (lp.x[v] > kTolerance) out.weights[vars[v].agent][vars[v].bundle] = lp.x[v];
  }
  return out;
}

}  // namespace balprice

#endif  // BALPRICE_ORACLE_HPP_
