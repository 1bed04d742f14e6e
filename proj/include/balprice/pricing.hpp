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

// Pricing rules p_i(x_i | y) and their constructions.

#ifndef BALPRICE_PRICING_HPP_
#define BALPRICE_PRICING_HPP_

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "balprice/core.hpp"
#include "balprice/distribution.hpp"
#include "balprice/oracle.hpp"

namespace balprice {

using Json = nlohmann::json;

struct RuleTraits {
  bool is_static = false;
  bool anonymous = false;
  bool item_linear = false;
};

// A priced menu. Quotes are UNAVAILABLE exactly when (x_i, y_-i) is
// infeasible and zero for NULL; everything else comes from the evaluator,
// which always sees y with agent i's own entry cleared.
class PricingRule {
 public:
  using Evaluator =
      std::function<Money(int agent, Outcome x, const Allocation& y)>;

  PricingRule(Environment env, Evaluator eval, RuleTraits traits,
              Json provenance, bool memoize = false)
      : env_(std::make_shared<const Environment>(std::move(env))),
        eval_(std::move(eval)),
        traits_(traits),
        provenance_(std::move(provenance)),
        memo_(memoize ? std::make_shared<Memo>() : nullptr) {}

  Quote Price(int agent, Outcome x, const Allocation& y) const {
    if (x == kNull) return 0.0;
    Allocation z = y;
    z[agent] = x;
    if (!env_->IsFeasible(z)) return std::nullopt;
    z[agent] = kNull;
    if (traits_.is_static) z.assign(z.size(), kNull);
    if (!memo_) return eval_(agent, x, z);
    std::vector<Outcome> key;
    key.reserve(z.size() + 2);
    key.push_back(static_cast<Outcome>(agent));
    key.push_back(x);
    key.insert(key.end(), z.begin(), z.end());
    {
      std::lock_guard<std::mutex> lock(memo_->mu);
      auto it = memo_->values.find(key);
      if (it != memo_->values.end()) return it->second;
    }
    Money p = eval_(agent, x, z);
    std::lock_guard<std::mutex> lock(memo_->mu);
    memo_->values.emplace(std::move(key), p);
    return p;
  }

  const Environment& env() const { return *env_; }
  const RuleTraits& traits() const { return traits_; }
  const Json& provenance() const { return provenance_; }
  Json& mutable_provenance() { return provenance_; }

 private:
  struct Memo {
    std::mutex mu;
    std::map<std::vector<Outcome>, Money> values;
  };

  std::shared_ptr<const Environment> env_;
  Evaluator eval_;
  RuleTraits traits_;
  Json provenance_;
  std::shared_ptr<Memo> memo_;
};

using PricingConstructor = std::function<PricingRule(const ValuationProfile&)>;
using AllocationFn = std::function<Allocation(const ValuationProfile&)>;

inline PricingRule ScaledRule(const PricingRule& base, double factor) {
  Json prov = {{"construction", "scaled"},
               {"factor", factor},
               {"base", base.provenance()}};
  return PricingRule(
      base.env(),
      [base, factor](int i, Outcome x, const Allocation& y) {
        return factor * *base.Price(i, x, y);
      },
      base.traits(), std::move(prov));
}

// ---------------------------------------------------------------------------
// Balance parameters and the price scaling of the extension theorems.

struct BalanceParams {
  double alpha = 1;
  double beta1 = 1;
  double beta2 = 0;
  bool weak = false;

  static BalanceParams Strong(double alpha, double beta) {
    return Validated({alpha, beta, 0, false});
  }
  static BalanceParams Weak(double alpha, double beta1, double beta2) {
    return Validated({alpha, beta1, beta2, true});
  }

  double beta() const { return beta1; }

  // δ such that posting δ·E[p] attains the guarantee below.
  double Delta() const {
    if (!weak) return alpha / (1 + alpha * beta1);
    if (beta1 + beta2 < 1 / alpha - kTolerance) {
      throw ParameterError("weak form needs beta1 + beta2 >= 1/alpha");
    }
    return 1 / (beta1 + std::max(2 * beta2, 1 / alpha));
  }

  // Fraction of E[v(ALG)] guaranteed by the scaled mechanism.
  double Guarantee() const {
    if (!weak) return 1 / (1 + alpha * beta1);
    Delta();
    return 1 / (alpha * (2 * beta1 + 4 * beta2));
  }

  Json ToJson() const {
    if (!weak) return {{"form", "strong"}, {"alpha", alpha}, {"beta", beta1}};
    return {{"form", "weak"},
            {"alpha", alpha},
            {"beta1", beta1},
            {"beta2", beta2}};
  }

 private:
  static BalanceParams Validated(BalanceParams p) {
    if (!(p.alpha > 0) || !(p.beta1 >= 0) || !(p.beta2 >= 0)) {
      throw ParameterError("need alpha > 0 and beta >= 0");
    }
    return p;
  }
};

// ---------------------------------------------------------------------------
// Static item prices.

inline Json MoneyList(const std::vector<Money>& v) { return Json(v); }

inline Json AllocationJson(const Allocation& x) { return Json(x); }

// Static anonymous prices p(S) = Σ_{j∈S} p_j over item or element bitmasks.
inline PricingRule ItemPriceRule(const Environment& env,
                                 std::vector<Money> item_prices,
                                 Json provenance) {
  provenance["item_prices"] = MoneyList(item_prices);
  return PricingRule(
      env,
      [p = std::move(item_prices)](int, Outcome x, const Allocation&) {
        return internal::AdditiveSum(p, static_cast<ItemSet>(x));
      },
      RuleTraits{true, true, true}, std::move(provenance));
}

// Per-item values of the first additive clause attaining v(bundle).
// Additive and XOS valuations return the whole clause; MPH valuations of
// rank at most 1 are read as XOS.
inline std::vector<Money> SupportingClause(const Valuation& v, ItemSet bundle,
                                           int items) {
  std::vector<Money> out(items, 0.0);
  auto fill = [&](const std::vector<Money>& c) {
    for (int j = 0; j < items && j < static_cast<int>(c.size()); ++j) {
      out[j] = c[j];
    }
  };
  if (auto* a = v.get_if<Additive>()) {
    fill(a->values);
  } else if (auto* x = v.get_if<Xos>()) {
    std::size_t k = FirstArgmax(x->clauses.size(), [&](std::size_t c) {
      return internal::AdditiveSum(x->clauses[c], bundle);
    });
    if (!x->clauses.empty()) fill(x->clauses[k]);
  } else if (auto* m = v.get_if<Mph>()) {
    if (v.rank() > 1) throw KindMismatch("mph rank > 1 is not XOS");
    std::size_t k = FirstArgmax(m->clauses.size(), [&](std::size_t c) {
      return internal::ClauseSum(m->clauses[c], bundle);
    });
    if (!m->clauses.empty()) {
      for (const Hyperedge& h : m->clauses[k]) {
        out[std::countr_zero(h.items)] += h.weight;
      }
    }
  } else {
    throw KindMismatch(std::string("no additive support for ") + v.kind_name());
  }
  return out;
}

// p_j = Σ_{T∋j, T⊆bundle} w(T) for the first clause attaining v(bundle).
inline std::vector<Money> MphSupportPrices(const Valuation& v, ItemSet bundle,
                                           int items) {
  const Mph* m = v.get_if<Mph>();
  if (m == nullptr) {
    std::vector<Money> c = SupportingClause(v, bundle, items);
    for (int j = 0; j < items; ++j) {
      if (!(bundle >> j & 1)) c[j] = 0;
    }
    return c;
  }
  std::vector<Money> out(items, 0.0);
  if (m->clauses.empty()) return out;
  std::size_t k = FirstArgmax(m->clauses.size(), [&](std::size_t c) {
    return internal::ClauseSum(m->clauses[c], bundle);
  });
  for (const Hyperedge& h : m->clauses[k]) {
    if ((h.items & bundle) != h.items) continue;
    for (int j : Members(h.items)) out[j] += h.weight;
  }
  return out;
}

inline PricingRule SingleItemPrices(const Environment& env,
                                    const ValuationProfile& profile) {
  if (env.kind() != EnvKind::kSingleItem) {
    throw KindMismatch("single-item prices need a single-item environment");
  }
  CheckProfile(env, profile);
  std::vector<Money> b = Bids(env, profile);
  Money top = b.empty() ? 0.0 : *std::max_element(b.begin(), b.end());
  return PricingRule(
      env, [top](int, Outcome, const Allocation&) { return top; },
      RuleTraits{true, true, true},
      {{"construction", "single-item"}, {"price", top}});
}

// p_j = v_i(x*_i) / |x*_i| for the items of each winner.
inline PricingRule IntroBundleItemPrices(const Environment& env,
                                         const ValuationProfile& profile,
                                         const Allocation& alloc) {
  if (!env.IsAuction()) throw KindMismatch("bundle prices need items");
  CheckProfile(env, profile);
  std::vector<Money> p(env.items(), 0.0);
  for (int i = 0; i < env.agents(); ++i) {
    if (alloc[i] == kNull) continue;
    Money share = Value(profile[i], alloc[i], env) / Popcount(alloc[i]);
    for (int j : Members(alloc[i])) p[j] = share;
  }
  return ItemPriceRule(env, std::move(p),
                       {{"construction", "intro-bundle"},
                        {"allocation", AllocationJson(alloc)}});
}

inline PricingRule XosItemPrices(const Environment& env,
                                 const ValuationProfile& profile,
                                 const Allocation& alloc) {
  if (!env.IsAuction()) throw KindMismatch("item prices need items");
  CheckProfile(env, profile);
  std::vector<Money> p(env.items(), 0.0);
  for (int i = 0; i < env.agents(); ++i) {
    if (alloc[i] == kNull) continue;
    ItemSet s = static_cast<ItemSet>(alloc[i]);
    std::vector<Money> c = SupportingClause(profile[i], s, env.items());
    for (int j : Members(s)) p[j] = c[j];
  }
  return ItemPriceRule(env, std::move(p),
                       {{"construction", "xos"},
                        {"allocation", AllocationJson(alloc)}});
}

inline PricingRule MphkItemPrices(const Environment& env,
                                  const ValuationProfile& profile,
                                  const Allocation& alloc) {
  if (!env.IsAuction()) throw KindMismatch("item prices need items");
  CheckProfile(env, profile);
  std::vector<Money> p(env.items(), 0.0);
  int k = 1;
  for (int i = 0; i < env.agents(); ++i) {
    k = std::max(k, profile[i].rank());
    if (alloc[i] == kNull) continue;
    ItemSet s = static_cast<ItemSet>(alloc[i]);
    std::vector<Money> c = MphSupportPrices(profile[i], s, env.items());
    for (int j : Members(s)) p[j] = c[j];
  }
  return ItemPriceRule(env, std::move(p),
                       {{"construction", "mph"},
                        {"rank", k},
                        {"allocation", AllocationJson(alloc)}});
}

// p_j = Σ_i Σ_{S∋j} x*_{i,S} v_i(S).
inline PricingRule FractionalCaItemPrices(const Environment& env,
                                          const ValuationProfile& profile,
                                          const FractionalSolution& lp) {
  if (!env.IsAuction()) throw KindMismatch("item prices need items");
  CheckProfile(env, profile);
  std::vector<Money> p(env.items(), 0.0);
  for (int i = 0; i < env.agents(); ++i) {
    for (const auto& [s, w] : lp.weights[i]) {
      Money v = Value(profile[i], s, env);
      for (int j : Members(s)) p[j] += w * v;
    }
  }
  return ItemPriceRule(env, std::move(p),
                       {{"construction", "fractional-ca"},
                        {"lp_objective", lp.objective}});
}

// p_j = max_i v_i({j}) on additive profiles: one single-item market per item.
inline PricingRule AdditiveItemPrices(const Environment& env,
                                      const ValuationProfile& profile) {
  if (!env.IsAuction()) throw KindMismatch("item prices need items");
  CheckProfile(env, profile);
  std::vector<Money> p(env.items(), 0.0);
  for (int i = 0; i < env.agents(); ++i) {
    const Additive* a = profile[i].get_if<Additive>();
    if (a == nullptr) throw KindMismatch("additive item prices need additive");
    for (int j = 0; j < env.items(); ++j) {
      p[j] = std::max(p[j], Value(profile[i], Outcome{1} << j, env));
    }
  }
  return ItemPriceRule(env, std::move(p), {{"construction", "additive-items"}});
}

// Per-unit price v(ALG); UNAVAILABLE entries come from capacity.
inline PricingRule KnapsackPrices(const Environment& env, Money alg_welfare) {
  env.as<KnapsackEnv>();
  return PricingRule(
      env,
      [env, alg_welfare](int, Outcome x, const Allocation&) {
        return env.Quantity(x) * alg_welfare;
      },
      RuleTraits{true, true, false},
      {{"construction", "knapsack"}, {"unit_price", alg_welfare}});
}

// ρ_j = Σ_{i: a_ji>0} v_i(x*_i) and p_i(x_i) = Σ_j a_ji x_i ρ_j.
inline PricingRule PipPrices(const Environment& env,
                             const ValuationProfile& profile,
                             const Allocation& alloc) {
  const auto& pip = env.as<PipEnv>();
  CheckProfile(env, profile);
  std::vector<Money> rho(pip.matrix.size(), 0.0);
  for (std::size_t j = 0; j < pip.matrix.size(); ++j) {
    for (int i = 0; i < env.agents(); ++i) {
      if (pip.matrix[j][i] > 0) rho[j] += Value(profile[i], alloc[i], env);
    }
  }
  return PricingRule(
      env,
      [env, rho](int i, Outcome x, const Allocation&) {
        const auto& a = env.as<PipEnv>().matrix;
        Money p = 0;
        for (std::size_t j = 0; j < a.size(); ++j) {
          p += a[j][i] * env.Quantity(x) * rho[j];
        }
        return p;
      },
      RuleTraits{true, false, false},
      {{"construction", "pip"},
       {"rho", MoneyList(rho)},
       {"allocation", AllocationJson(alloc)}});
}

// ---------------------------------------------------------------------------
// Dynamic matroid prices.

// Element weights of additive (or scalar) valuations over matroid elements.
inline std::vector<Money> ElementWeights(const Environment& env,
                                         const ValuationProfile& profile) {
  const auto& m = env.as<MatroidEnv>();
  std::vector<Money> w(m.matroid.ground_size(), 0.0);
  for (int e = 0; e < m.matroid.ground_size(); ++e) {
    const Valuation& v = profile[m.owner[e]];
    if (v.get_if<Additive>() == nullptr && v.get_if<Scalar>() == nullptr) {
      throw KindMismatch("matroid prices need additive element values");
    }
    w[e] = Value(v, Outcome{1} << e, env);
  }
  return w;
}

// p_i(x_i | y) = v(OPT(v | ∪y)) − v(OPT(v | ∪y ∪ x_i)).
inline PricingRule MatroidDynamicPrices(const Environment& env,
                                        const ValuationProfile& profile) {
  CheckProfile(env, profile);
  std::vector<Money> w = ElementWeights(env, profile);
  auto residual = [env, w](ItemSet fixed) {
    const Matroid& mat = env.as<MatroidEnv>().matroid;
    ItemSet all = (ItemSet{1} << mat.ground_size()) - 1;
    return internal::AdditiveSum(w, mat.MaxWeightExtension(w, fixed, all));
  };
  return PricingRule(
      env,
      [residual](int, Outcome x, const Allocation& y) {
        ItemSet s = 0;
        for (Outcome o : y) s |= static_cast<ItemSet>(o);
        return residual(s) - residual(s | static_cast<ItemSet>(x));
      },
      RuleTraits{false, false, false},
      {{"construction", "matroid"}, {"element_weights", MoneyList(w)}});
}

// ---------------------------------------------------------------------------
// Critical-value prices for binary single-parameter environments.

namespace internal {

inline std::vector<bool> Winners(const Allocation& y) {
  std::vector<bool> w(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) w[i] = y[i] != kNull;
  return w;
}

inline void RequireBinary(const Environment& env) {
  if (!env.IsBinary()) throw KindMismatch("needs a binary environment");
}

}  // namespace internal

// Verifies that τ_i(v_-i | y) is non-decreasing in y (UNAVAILABLE = +∞).
// Returns an empty string on success and a witness otherwise.
inline std::string CheckMonotoneCriticalValues(RuleKind rule,
                                               const FeasibleSpace& space,
                                               const std::vector<Money>& b) {
  const int n = space.env().agents();
  const auto& all = space.all();
  std::vector<std::vector<Quote>> tau(all.size(), std::vector<Quote>(n));
  for (std::size_t k = 0; k < all.size(); ++k) {
    std::vector<bool> f = internal::Winners(all[k]);
    for (int i = 0; i < n; ++i) {
      if (!f[i]) tau[k][i] = CriticalValue(rule, space, b, f, i);
    }
  }
  for (std::size_t s = 0; s < all.size(); ++s) {
    for (std::size_t t = 0; t < all.size(); ++t) {
      bool subset = true;
      for (int i = 0; i < n; ++i) {
        if (all[s][i] != kNull && all[t][i] == kNull) subset = false;
      }
      if (!subset) continue;
      for (int i = 0; i < n; ++i) {
        if (all[t][i] != kNull) continue;
        const Quote& lo = tau[s][i];
        const Quote& hi = tau[t][i];
        bool drops = (!lo && hi) || (lo && hi && *lo > *hi + kTolerance);
        if (drops) {
          std::ostringstream w;
          w << "critical value of agent " << i << " drops from y="
            << Json(all[s]).dump() << " to y'=" << Json(all[t]).dump();
          return w.str();
        }
      }
    }
  }
  return "";
}

// p_i(1 | y) = max{v_i, τ_i(v_-i | y)}.
inline PricingRule WarmupCriticalPrices(
    std::shared_ptr<const FeasibleSpace> space,
    const ValuationProfile& profile, RuleKind rule = RuleKind::kOpt,
    bool verify = true) {
  const Environment& env = space->env();
  internal::RequireBinary(env);
  CheckProfile(env, profile);
  std::vector<Money> b = Bids(env, profile);
  if (verify) {
    std::string witness = CheckMonotoneCriticalValues(rule, *space, b);
    if (!witness.empty()) throw DomainError("non-monotone: " + witness);
  }
  return PricingRule(
      env,
      [space, b, rule](int i, Outcome, const Allocation& y) {
        Quote tau = CriticalValue(rule, *space, b, internal::Winners(y), i);
        return std::max(b[i], tau.value_or(b[i]));
      },
      RuleTraits{false, false, false},
      {{"construction", "warmup"}, {"rule", RuleKindName(rule)}},
      /*memoize=*/true);
}

// Prices of the reference-allocation recursion: r(0) = ALG(v), then
// r(j) = RULE(v(j-1) | y_[j]) along `indexing`, with v(j) equal to v on r(j)
// and 0 elsewhere. Members of r(n) pay their value; everyone else pays the
// critical value against v(n) with y held fixed.
inline PricingRule DerivedPrices(std::shared_ptr<const FeasibleSpace> space,
                                 const ValuationProfile& profile,
                                 const Allocation& alg_alloc, RuleKind rule,
                                 std::vector<int> indexing = {}) {
  const Environment& env = space->env();
  internal::RequireBinary(env);
  CheckProfile(env, profile);
  const int n = env.agents();
  if (indexing.empty()) {
    indexing.resize(n);
    std::iota(indexing.begin(), indexing.end(), 0);
  }
  std::vector<Money> v = Bids(env, profile);
  auto eval = [space, v, alg_alloc, rule, indexing, n](
                  int i, Outcome, const Allocation& y) {
    std::vector<Money> ref(n, 0.0);
    std::vector<bool> in_ref(n);
    for (int k = 0; k < n; ++k) {
      in_ref[k] = alg_alloc[k] != kNull;
      if (in_ref[k]) ref[k] = v[k];
    }
    std::vector<bool> prefix(n, false);
    for (int j = 0; j < n; ++j) {
      prefix[indexing[j]] = y[indexing[j]] != kNull;
      in_ref = RunRule(rule, *space, ref, prefix);
      for (int k = 0; k < n; ++k) {
        if (!in_ref[k]) ref[k] = 0;
      }
    }
    if (in_ref[i]) return v[i];
    Quote tau = CriticalValue(rule, *space, ref, internal::Winners(y), i);
    return tau.value_or(0.0);
  };
  return PricingRule(env, eval, RuleTraits{false, false, false},
                     {{"construction", rule == RuleKind::kGreedy
                                           ? "alg1-greedy"
                                           : "alg2-opt"},
                      {"allocation", AllocationJson(alg_alloc)},
                      {"indexing", indexing}},
                     /*memoize=*/true);
}

inline PricingRule GreedyDerivedPrices(
    std::shared_ptr<const FeasibleSpace> space,
    const ValuationProfile& profile, const Allocation& alg_alloc,
    std::vector<int> indexing = {}) {
  return DerivedPrices(std::move(space), profile, alg_alloc,
                       RuleKind::kGreedy, std::move(indexing));
}

inline PricingRule OptDerivedPrices(std::shared_ptr<const FeasibleSpace> space,
                                    const ValuationProfile& profile,
                                    const Allocation& alg_alloc,
                                    std::vector<int> indexing = {}) {
  return DerivedPrices(std::move(space), profile, alg_alloc, RuleKind::kOpt,
                       std::move(indexing));
}

// ---------------------------------------------------------------------------
// Composition.

// Prices the profile ṽ of first supporting clauses of ALG(v) with `base`.
// With `alg` supplied, a consistency drop ṽ(ALG(ṽ)) < ṽ(ALG(v)) is recorded
// in the provenance.
inline PricingRule ComposeMax(const PricingConstructor& base,
                              const Environment& env,
                              const ValuationProfile& profile,
                              const Allocation& alg_alloc,
                              const AllocationFn& alg = nullptr) {
  CheckProfile(env, profile);
  const int items = env.items();
  ValuationProfile support;
  for (int i = 0; i < env.agents(); ++i) {
    support.push_back(Valuation::MakeAdditive(SupportingClause(
        profile[i], static_cast<ItemSet>(alg_alloc[i]), items)));
  }
  PricingRule rule = base(support);
  Json prov = {{"construction", "compose-max"},
               {"allocation", AllocationJson(alg_alloc)},
               {"base", rule.provenance()}};
  if (alg) {
    Money here = Welfare(env, support, alg(support));
    Money there = Welfare(env, support, alg_alloc);
    if (here < there - kTolerance) {
      prov["warning"] = "allocation rule is not consistent on this profile";
    }
  }
  rule.mutable_provenance() = std::move(prov);
  return rule;
}

// p = Σ_ℓ p^ℓ over the markets of a product environment.
inline PricingRule ComposeAdd(const Environment& env,
                              std::vector<PricingRule> market_rules) {
  const auto& markets = env.as<ProductEnv>().markets;
  if (market_rules.size() != markets.size()) {
    throw DomainError("one pricing rule per market is required");
  }
  Json parts = Json::array();
  bool all_static = true;
  for (const auto& r : market_rules) {
    parts.push_back(r.provenance());
    all_static = all_static && r.traits().is_static;
  }
  const int n = env.agents();
  return PricingRule(
      env,
      [market_rules, n](int i, Outcome x, const Allocation& y) {
        Money total = 0;
        Allocation yl(n);
        for (std::size_t l = 0; l < market_rules.size(); ++l) {
          for (int j = 0; j < n; ++j) {
            yl[j] = MarketToken(y[j], static_cast<int>(l));
          }
          Quote q = market_rules[l].Price(i, MarketToken(x, static_cast<int>(l)),
                                          yl);
          if (!q) throw Error("market quote unavailable on a feasible entry");
          total += *q;
        }
        return total;
      },
      RuleTraits{all_static, false, false},
      {{"construction", "compose-add"}, {"markets", parts}});
}

// ---------------------------------------------------------------------------
// Expected prices scaled for the extension theorems.

struct SampleMode {
  bool exact = true;
  std::size_t count = 0;
  std::uint64_t seed = 0;

  static SampleMode Exact() { return {}; }
  static SampleMode Sampled(std::size_t count, std::uint64_t seed) {
    return {false, count, seed};
  }
};

// δ · E_ṽ[p^ṽ(x_i | y)] with δ from `params`. Base rules are built once, at
// construction, from the full support (exact) or from `count` seeded draws.
inline PricingRule ExpectedScaledPrices(
    const Environment& env, const ProductDistribution& dist,
    const PricingConstructor& constructor, const SampleMode& mode,
    const BalanceParams& params, std::size_t cap = Caps::Default().support) {
  if (dist.agents() != env.agents()) {
    throw DomainError("distribution covers the wrong number of agents");
  }
  const double delta = params.Delta();
  std::map<std::vector<int>, double> weights;
  if (mode.exact) {
    dist.ForEachAtom(cap, [&](const std::vector<int>& idx,
                              const ValuationProfile&, double p) {
      if (p > 0) weights[idx] += p;
    });
  } else {
    if (mode.count == 0) throw ParameterError("sample count must be positive");
    for (std::size_t t = 0; t < mode.count; ++t) {
      CounterRng rng(mode.seed, t);
      weights[dist.SampleIndex(rng)] += 1.0 / mode.count;
    }
  }
  auto bases = std::make_shared<std::vector<std::pair<PricingRule, double>>>();
  bool all_static = true;
  for (const auto& [idx, w] : weights) {
    bases->emplace_back(constructor(dist.Profile(idx)), w);
    all_static = all_static && bases->back().first.traits().is_static;
  }
  Json prov = {{"construction", "expected-scaled"},
               {"delta", delta},
               {"params", params.ToJson()},
               {"mode", mode.exact ? "exact" : "sampled"},
               {"profiles", bases->size()}};
  if (!mode.exact) {
    prov["samples"] = mode.count;
    prov["seed"] = mode.seed;
  }
  if (!bases->empty()) prov["base"] = bases->front().first.provenance();
  return PricingRule(
      env,
      [bases, delta](int i, Outcome x, const Allocation& y) {
        Money total = 0;
        for (const auto& [rule, w] : *bases) {
          Quote q = rule.Price(i, x, y);
          if (!q) throw Error("base quote unavailable on a feasible entry");
          total += w * *q;
        }
        return delta * total;
      },
      RuleTraits{all_static, false, false}, std::move(prov),
      /*memoize=*/true);
}

}  // namespace balprice

#endif  // BALPRICE_PRICING_HPP_
