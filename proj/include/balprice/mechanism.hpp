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

// Sequential posted-price mechanisms with quasilinear buyers.

#ifndef BALPRICE_MECHANISM_HPP_
#define BALPRICE_MECHANISM_HPP_

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "balprice/balance.hpp"
#include "balprice/core.hpp"
#include "balprice/distribution.hpp"
#include "balprice/parallel.hpp"
#include "balprice/pricing.hpp"

namespace balprice {

enum class TiePolicy { kPreferNull, kPreferBuyLexmin, kAdversarial };

inline const char* TiePolicyName(TiePolicy t) {
  switch (t) {
    case TiePolicy::kPreferNull: return "prefer_null";
    case TiePolicy::kPreferBuyLexmin: return "prefer_buy_lexmin";
    case TiePolicy::kAdversarial: return "adversarial_min_welfare";
  }
  return "?";
}

inline constexpr TiePolicy kAllTiePolicies[] = {
    TiePolicy::kPreferNull, TiePolicy::kPreferBuyLexmin,
    TiePolicy::kAdversarial};

struct MenuEntry {
  Outcome outcome = kNull;
  Money value = 0;
  Money price = 0;
  Money utility() const { return value - price; }
};

struct Purchase {
  Outcome outcome = kNull;
  Money value = 0;
  Money payment = 0;
  Money utility = 0;
};

struct MechanismTrace {
  std::vector<int> order;
  std::vector<Purchase> purchases;  // Indexed by agent.
  Money welfare = 0;
  Money revenue = 0;
  Money utility_sum = 0;

  Allocation allocation() const {
    Allocation x;
    for (const auto& p : purchases) x.push_back(p.outcome);
    return x;
  }

  Json ToJson() const {
    Json buys = Json::array();
    for (std::size_t i = 0; i < purchases.size(); ++i) {
      buys.push_back({{"agent", i},
                      {"outcome", purchases[i].outcome},
                      {"value", purchases[i].value},
                      {"payment", purchases[i].payment},
                      {"utility", purchases[i].utility}});
    }
    return {{"order", order},
            {"purchases", buys},
            {"welfare", welfare},
            {"revenue", revenue},
            {"utility_sum", utility_sum}};
  }
};

// The finite menu of `agent` given prior purchases y, NULL first.
inline std::vector<MenuEntry> Menu(const Environment& env,
                                   const PricingRule& prices,
                                   const Valuation& v, int agent,
                                   const Allocation& y) {
  std::vector<MenuEntry> menu;
  for (Outcome o : env.outcomes(agent)) {
    Quote q = prices.Price(agent, o, y);
    if (!q) continue;
    menu.push_back({o, Value(v, o, env), *q});
  }
  return menu;
}

// Utility maximizers of a menu within the money tolerance.
inline std::vector<MenuEntry> BestResponses(const std::vector<MenuEntry>& menu) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& e : menu) top = std::max(top, e.utility());
  std::vector<MenuEntry> out;
  for (const auto& e : menu) {
    if (e.utility() >= top - kTolerance) out.push_back(e);
  }
  return out;
}

namespace internal {

class PostedPriceRun {
 public:
  PostedPriceRun(const Environment& env, const PricingRule& prices,
                 const ValuationProfile& profile, const std::vector<int>& order,
                 TiePolicy tie, std::size_t node_cap)
      : env_(env),
        prices_(prices),
        profile_(profile),
        order_(order),
        tie_(tie),
        node_cap_(node_cap),
        memo_(order.size()) {}

  MechanismTrace Run() {
    const int n = env_.agents();
    MechanismTrace trace;
    trace.order = order_;
    trace.purchases.resize(n);
    Allocation y(n, kNull);
    for (std::size_t k = 0; k < order_.size(); ++k) {
      const int i = order_[k];
      MenuEntry pick = Choose(k, y);
      y[i] = pick.outcome;
      trace.purchases[i] = {pick.outcome, pick.value, pick.price,
                            pick.utility()};
    }
    for (const auto& p : trace.purchases) {
      trace.welfare += p.value;
      trace.revenue += p.payment;
      trace.utility_sum += p.utility;
    }
    return trace;
  }

 private:
  MenuEntry Choose(std::size_t k, const Allocation& y) {
    const int i = order_[k];
    auto best = BestResponses(Menu(env_, prices_, profile_[i], i, y));
    switch (tie_) {
      case TiePolicy::kPreferNull:
        return best.front();
      case TiePolicy::kPreferBuyLexmin:
        return best.size() > 1 ? best[1] : best.front();
      case TiePolicy::kAdversarial:
        break;
    }
    if (best.size() == 1) return best.front();
    std::size_t arg = 0;
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < best.size(); ++c) {
      Allocation next = y;
      next[i] = best[c].outcome;
      double w = best[c].value + Continuation(k + 1, next);
      if (w < low - kTolerance) {
        low = w;
        arg = c;
      }
    }
    return best[arg];
  }

  // Final welfare of agents order_[k..] under adversarial ties.
  double Continuation(std::size_t k, const Allocation& y) {
    if (k == order_.size()) return 0;
    auto it = memo_[k].find(y);
    if (it != memo_[k].end()) return it->second;
    if (++nodes_ > node_cap_) throw CapExceeded("tie search nodes", nodes_);
    const int i = order_[k];
    auto best = BestResponses(Menu(env_, prices_, profile_[i], i, y));
    double low = std::numeric_limits<double>::infinity();
    for (const auto& e : best) {
      Allocation next = y;
      next[i] = e.outcome;
      low = std::min(low, e.value + Continuation(k + 1, next));
    }
    memo_[k].emplace(y, low);
    return low;
  }

  const Environment& env_;
  const PricingRule& prices_;
  const ValuationProfile& profile_;
  const std::vector<int>& order_;
  TiePolicy tie_;
  std::size_t node_cap_;
  std::size_t nodes_ = 0;
  std::vector<std::map<Allocation, double>> memo_;
};

}  // namespace internal

inline MechanismTrace RunPostedPrice(const Environment& env,
                                     const PricingRule& prices,
                                     const ValuationProfile& profile,
                                     const std::vector<int>& order,
                                     TiePolicy tie,
                                     std::size_t node_cap = Caps::Default().nodes) {
  CheckProfile(env, profile);
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != IdentityOrder(env.agents())) {
    throw DomainError("order must be a permutation of the agents");
  }
  return internal::PostedPriceRun(env, prices, profile, order, tie, node_cap)
      .Run();
}

struct OrderedWelfare {
  Money welfare = 0;
  std::vector<int> order;
};

// Minimum welfare over all arrival orders; the first minimizing order is
// reported.
inline OrderedWelfare WorstOrderWelfare(const Environment& env,
                                        const PricingRule& prices,
                                        const ValuationProfile& profile,
                                        TiePolicy tie = TiePolicy::kAdversarial,
                                        const Caps& caps = Caps::Default(),
                                        int jobs = 1) {
  auto orders = AllOrders(env.agents(), caps.orders);
  auto w = ParallelMap<double>(orders.size(), jobs, [&](std::size_t k) {
    return RunPostedPrice(env, prices, profile, orders[k], tie, caps.nodes)
        .welfare;
  });
  std::size_t arg = 0;
  for (std::size_t k = 1; k < w.size(); ++k) {
    if (w[k] < w[arg] - kTolerance) arg = k;
  }
  return {w[arg], orders[arg]};
}

// Exact expected welfare for a fixed order.
inline Money ExpectedMechanismWelfare(const Environment& env,
                                      const PricingRule& prices,
                                      const ProductDistribution& dist,
                                      const std::vector<int>& order,
                                      TiePolicy tie,
                                      const Caps& caps = Caps::Default()) {
  std::vector<double> terms;
  dist.ForEachAtom(caps.support, [&](const std::vector<int>&,
                                     const ValuationProfile& v, double p) {
    terms.push_back(
        p * RunPostedPrice(env, prices, v, order, tie, caps.nodes).welfare);
  });
  return PairwiseSum(terms);
}

// min over arrival orders of the exact expected welfare.
inline OrderedWelfare WorstOrderExpectedWelfare(
    const Environment& env, const PricingRule& prices,
    const ProductDistribution& dist, TiePolicy tie = TiePolicy::kAdversarial,
    const Caps& caps = Caps::Default(), int jobs = 1) {
  auto orders = AllOrders(env.agents(), caps.orders);
  auto w = ParallelMap<double>(orders.size(), jobs, [&](std::size_t k) {
    return ExpectedMechanismWelfare(env, prices, dist, orders[k], tie, caps);
  });
  std::size_t arg = 0;
  for (std::size_t k = 1; k < w.size(); ++k) {
    if (w[k] < w[arg] - kTolerance) arg = k;
  }
  return {w[arg], orders[arg]};
}

// Value of the game in which an adversary picks each next arrival after
// seeing the purchases so far; valuations are drawn at arrival and ties are
// resolved against welfare.
inline Money AdaptiveAdversaryWelfare(const Environment& env,
                                      const PricingRule& prices,
                                      const ProductDistribution& dist,
                                      std::size_t cap = Caps::Default().nodes) {
  const int n = env.agents();
  if (dist.agents() != n) throw DomainError("distribution size mismatch");
  std::map<std::pair<unsigned, Allocation>, double> memo;
  std::size_t nodes = 0;
  auto value = [&](auto&& self, unsigned remaining,
                   const Allocation& y) -> double {
    if (remaining == 0) return 0;
    auto key = std::make_pair(remaining, y);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (++nodes > cap) throw CapExceeded("adversary game tree", nodes);
    double low = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!(remaining >> i & 1)) continue;
      const unsigned rest = remaining & ~(1u << i);
      double expect = 0;
      for (const Atom& a : dist.support(i)) {
        auto best = BestResponses(Menu(env, prices, a.valuation, i, y));
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& e : best) {
          Allocation next = y;
          next[i] = e.outcome;
          worst = std::min(worst, e.value + self(self, rest, next));
        }
        expect += a.prob * worst;
      }
      low = std::min(low, expect);
    }
    memo.emplace(std::move(key), low);
    return low;
  };
  return value(value, (1u << n) - 1, Allocation(n, kNull));
}

// ---------------------------------------------------------------------------
// Knapsack without the size restriction: the better of a per-unit price for
// requests up to half the unit and a take-it-or-leave-it price for the
// whole unit.

struct SelectorResult {
  std::string chosen;
  Money welfare = 0;
  Money per_unit_welfare = 0;
  Money whole_unit_welfare = 0;
  Money unit_price = 0;
  Money whole_price = 0;
  Money expected_opt = 0;

  Json ToJson() const {
    return {{"chosen", chosen},
            {"welfare", welfare},
            {"per_unit_welfare", per_unit_welfare},
            {"whole_unit_welfare", whole_unit_welfare},
            {"unit_price", unit_price},
            {"whole_price", whole_price},
            {"expected_opt", expected_opt}};
  }
};

inline SelectorResult TwoMechanismSelector(const Environment& env,
                                           const ProductDistribution& dist,
                                           const Caps& caps = Caps::Default()) {
  const auto& k = env.as<KnapsackEnv>();
  const int n = env.agents();
  SelectorResult out;
  FeasibleSpace full(env, caps.feasible);
  Environment half = Environment::Knapsack(n, k.grid, 0.5);
  FeasibleSpace small(half, caps.feasible);

  Money small_opt = 0;
  Money max_value = 0;
  dist.ForEachAtom(caps.support, [&](const std::vector<int>&,
                                     const ValuationProfile& v, double p) {
    out.expected_opt += p * Welfare(env, v, Opt(full, v));
    small_opt += p * Welfare(half, v, Opt(small, v));
    Money top = 0;
    for (int i = 0; i < n; ++i) {
      top = std::max(top, Value(v[i], static_cast<Outcome>(k.grid), env));
    }
    max_value += p * top;
  });

  // Per-unit mechanism: (2/3) E[v(ALG)] per unit, requests capped at 1/2.
  out.unit_price = 2.0 / 3.0 * small_opt;
  PricingRule unit = KnapsackPrices(half, out.unit_price);
  out.per_unit_welfare =
      WorstOrderExpectedWelfare(half, unit, dist, TiePolicy::kAdversarial, caps)
          .welfare;

  // Whole-unit mechanism on the indivisible item.
  Environment item = Environment::SingleItem(n);
  std::vector<std::vector<Atom>> whole(n);
  std::vector<Money> candidates = {0.0, max_value / 2};
  for (int i = 0; i < n; ++i) {
    for (const Atom& a : dist.support(i)) {
      Money v = Value(a.valuation, static_cast<Outcome>(k.grid), env);
      whole[i].push_back({Valuation::MakeScalar(v), a.prob});
      candidates.push_back(v);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  ProductDistribution item_dist(std::move(whole));
  out.whole_unit_welfare = -1;
  for (Money price : candidates) {
    PricingRule post(
        item, [price](int, Outcome, const Allocation&) { return price; },
        RuleTraits{true, true, false}, {{"construction", "take-it-or-leave-it"}});
    Money w = WorstOrderExpectedWelfare(item, post, item_dist,
                                        TiePolicy::kAdversarial, caps)
                  .welfare;
    if (w > out.whole_unit_welfare + kTolerance) {
      out.whole_unit_welfare = w;
      out.whole_price = price;
    }
  }
  if (out.per_unit_welfare >= out.whole_unit_welfare) {
    out.chosen = "per_unit";
    out.welfare = out.per_unit_welfare;
  } else {
    out.chosen = "whole_unit";
    out.welfare = out.whole_unit_welfare;
  }
  return out;
}

}  // namespace balprice

#endif  // BALPRICE_MECHANISM_HPP_
