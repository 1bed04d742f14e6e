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

// Exhaustive certification of the two balance conditions:
//   (a) Σ_i p_i(x_i | x_[i-1]) >= (v(ALG) - v(OPT(F_x))) / α
//   (b) Σ_i p_i(x'_i | x_[i-1]) <= β1 v(OPT(F_x)) + β2 v(ALG)  for x' ∈ F_x
// for every feasible x and every requested agent indexing.

#ifndef BALPRICE_BALANCE_HPP_
#define BALPRICE_BALANCE_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "balprice/core.hpp"
#include "balprice/oracle.hpp"
#include "balprice/pricing.hpp"

namespace balprice {

// All permutations of 0..n-1 in lexicographic order.
inline std::vector<std::vector<int>> AllOrders(
    int n, std::size_t cap = Caps::Default().orders) {
  std::size_t count = 1;
  for (int k = 2; k <= n; ++k) {
    count *= k;
    if (count > cap) throw CapExceeded("arrival orders", count);
  }
  std::vector<std::vector<int>> out;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<int> IdentityOrder(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

struct Witness {
  char condition = 'a';  // 'a' or 'b'
  Allocation x;
  Allocation x_prime;  // Empty for condition (a).
  std::vector<int> order;
  double lhs = 0;
  double rhs = 0;
  bool structural = false;  // An UNAVAILABLE entry inside a condition sum.

  Json ToJson() const {
    Json j = {{"condition", std::string(1, condition)},
              {"x", x},
              {"order", order},
              {"lhs", lhs},
              {"rhs", rhs}};
    if (condition == 'b') j["x_prime"] = x_prime;
    if (structural) j["structural"] = true;
    return j;
  }
};

struct BalanceReport {
  bool passed = true;
  BalanceParams params;
  double condition_a_min_slack = std::numeric_limits<double>::infinity();
  double condition_b_min_slack = std::numeric_limits<double>::infinity();
  std::vector<Witness> witnesses;
  std::size_t violations = 0;
  std::size_t structural_violations = 0;
  std::size_t feasible_examined = 0;
  std::size_t family_examined = 0;
  std::size_t orders_checked = 0;

  Json ToJson() const {
    Json w = Json::array();
    for (const auto& x : witnesses) w.push_back(x.ToJson());
    auto finite = [](double v) {
      return std::isfinite(v) ? Json(v) : Json(nullptr);
    };
    return {{"passed", passed},
            {"params", params.ToJson()},
            {"condition_a_min_slack", finite(condition_a_min_slack)},
            {"condition_b_min_slack", finite(condition_b_min_slack)},
            {"violations", violations},
            {"structural_violations", structural_violations},
            {"witnesses", w},
            {"checked_counts",
             {{"feasible", feasible_examined},
              {"family", family_examined},
              {"orders", orders_checked}}}};
  }
};

struct BalanceOptions {
  // Agent indexings to certify; empty means the identity. Static rules are
  // order independent and are checked under the first indexing only.
  std::vector<std::vector<int>> orders;
  std::size_t max_witnesses = 8;
};

namespace internal {

// Residual optimum and members of F_x for every x of the space.
struct FamilyTable {
  std::vector<std::vector<std::size_t>> members;
  std::vector<Money> residual;
};

inline FamilyTable BuildFamilyTable(const FeasibleSpace& space,
                                    const ValuationProfile& profile,
                                    const ExchangeFamily& family) {
  const auto& all = space.all();
  FamilyTable t;
  t.members.resize(all.size());
  t.residual.assign(all.size(), 0.0);
  std::vector<Money> welfare(all.size());
  for (std::size_t k = 0; k < all.size(); ++k) {
    welfare[k] = Welfare(space.env(), profile, all[k]);
  }
  for (std::size_t k = 0; k < all.size(); ++k) {
    t.members[k] = FamilyMembers(space, family, all[k]);
    for (std::size_t m : t.members[k]) {
      t.residual[k] = std::max(t.residual[k], welfare[m]);
    }
  }
  return t;
}

// Quotes p_{σ(k)}(o | x_[σ(<k)]) for every position k and outcome o.
inline std::vector<std::vector<Quote>> PrefixQuotes(const Environment& env,
                                                    const PricingRule& prices,
                                                    const Allocation& x,
                                                    const std::vector<int>& order) {
  const int n = env.agents();
  std::vector<std::vector<Quote>> table(n);
  for (int k = 0; k < n; ++k) {
    const int i = order[k];
    Allocation prefix = Prefix(x, order, k);
    const auto& outs = env.outcomes(i);
    table[i].resize(outs.size());
    for (std::size_t o = 0; o < outs.size(); ++o) {
      table[i][o] = prices.Price(i, outs[o], prefix);
    }
  }
  return table;
}

inline std::size_t OutcomeIndex(const Environment& env, int agent, Outcome x) {
  const auto& o = env.outcomes(agent);
  return static_cast<std::size_t>(std::lower_bound(o.begin(), o.end(), x) -
                                  o.begin());
}

}  // namespace internal

inline BalanceReport CheckBalance(const FeasibleSpace& space,
                                  const ValuationProfile& profile,
                                  const PricingRule& prices,
                                  const Allocation& alg_alloc,
                                  const ExchangeFamily& family,
                                  const BalanceParams& params,
                                  const BalanceOptions& options = {}) {
  const Environment& env = space.env();
  CheckProfile(env, profile);
  const int n = env.agents();
  std::vector<std::vector<int>> orders = options.orders;
  if (orders.empty()) orders.push_back(IdentityOrder(n));
  if (prices.traits().is_static) orders.resize(1);

  BalanceReport report;
  report.params = params;
  const Money v_alg = Welfare(env, profile, alg_alloc);
  const auto& all = space.all();
  internal::FamilyTable table = internal::BuildFamilyTable(space, profile, family);

  auto record = [&](Witness w) {
    ++report.violations;
    if (w.structural) ++report.structural_violations;
    if (report.witnesses.size() < options.max_witnesses) {
      report.witnesses.push_back(std::move(w));
    }
  };

  for (const auto& order : orders) {
    ++report.orders_checked;
    for (std::size_t k = 0; k < all.size(); ++k) {
      const Allocation& x = all[k];
      ++report.feasible_examined;
      auto quotes = internal::PrefixQuotes(env, prices, x, order);
      auto sum = [&](const Allocation& z) -> Quote {
        Money total = 0;
        for (int i = 0; i < n; ++i) {
          const Quote& q = quotes[i][internal::OutcomeIndex(env, i, z[i])];
          if (!q) return std::nullopt;
          total += *q;
        }
        return total;
      };
      const Money residual = table.residual[k];

      Quote lhs_a = sum(x);
      const double rhs_a = (v_alg - residual) / params.alpha;
      if (!lhs_a) {
        record({'a', x, {}, order, 0, rhs_a, true});
      } else {
        double slack = *lhs_a - rhs_a;
        report.condition_a_min_slack =
            std::min(report.condition_a_min_slack, slack);
        if (slack < -kTolerance) record({'a', x, {}, order, *lhs_a, rhs_a});
      }

      const double rhs_b = params.beta1 * residual + params.beta2 * v_alg;
      for (std::size_t m : table.members[k]) {
        ++report.family_examined;
        const Allocation& xp = all[m];
        Quote lhs_b = sum(xp);
        if (!lhs_b) {
          record({'b', x, xp, order, 0, rhs_b, true});
          continue;
        }
        double slack = rhs_b - *lhs_b;
        report.condition_b_min_slack =
            std::min(report.condition_b_min_slack, slack);
        if (slack < -kTolerance) record({'b', x, xp, order, *lhs_b, rhs_b});
      }
    }
  }
  report.passed = report.violations == 0;
  return report;
}

inline BalanceReport CheckBalanced(const FeasibleSpace& space,
                                   const ValuationProfile& profile,
                                   const PricingRule& prices,
                                   const Allocation& alg_alloc,
                                   const ExchangeFamily& family, double alpha,
                                   double beta,
                                   const BalanceOptions& options = {}) {
  return CheckBalance(space, profile, prices, alg_alloc, family,
                      BalanceParams::Strong(alpha, beta), options);
}

inline BalanceReport CheckWeaklyBalanced(const FeasibleSpace& space,
                                         const ValuationProfile& profile,
                                         const PricingRule& prices,
                                         const Allocation& alg_alloc,
                                         const ExchangeFamily& family,
                                         double alpha, double beta1,
                                         double beta2,
                                         const BalanceOptions& options = {}) {
  return CheckBalance(space, profile, prices, alg_alloc, family,
                      BalanceParams::Weak(alpha, beta1, beta2), options);
}

// Smallest β for which condition (b) holds: the maximum over (x, x' ∈ F_x)
// of Σ_i p_i(x'_i | x_[i-1]) / v(OPT(F_x)), with 0/0 read as 0. Condition (a)
// is not examined.
inline Bound MinimalBeta(const FeasibleSpace& space,
                         const ValuationProfile& profile,
                         const PricingRule& prices,
                         const ExchangeFamily& family,
                         const std::vector<int>& order) {
  const Environment& env = space.env();
  const int n = env.agents();
  const auto& all = space.all();
  internal::FamilyTable table = internal::BuildFamilyTable(space, profile, family);
  Bound out;
  for (std::size_t k = 0; k < all.size(); ++k) {
    auto quotes = internal::PrefixQuotes(env, prices, all[k], order);
    for (std::size_t m : table.members[k]) {
      Money total = 0;
      for (int i = 0; i < n; ++i) {
        const Quote& q =
            quotes[i][internal::OutcomeIndex(env, i, all[m][i])];
        if (!q) throw Error("unavailable entry inside a family member");
        total += *q;
      }
      if (table.residual[k] <= kTolerance) {
        if (total > kTolerance) out.unbounded = true;
      } else {
        out.value = std::max(out.value, total / table.residual[k]);
      }
    }
  }
  return out;
}

}  // namespace balprice

#endif  // BALPRICE_BALANCE_HPP_
