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

#include <algorithm>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "balprice/catalog.hpp"
#include "balprice/oracle.hpp"
#include "balprice/simplex.hpp"

namespace balprice {
namespace {

// Best welfare over all product outcomes that pass IsFeasible, by plain
// recursion over agents (no pruning, no shared code with the library's DFS).
Money BruteForceOpt(const Environment& env, const ValuationProfile& v,
                    const std::function<bool(const Allocation&)>& keep =
                        nullptr) {
  const int n = env.agents();
  Allocation x(n, kNull);
  Money best = 0;
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      if (env.IsFeasible(x) && (!keep || keep(x))) {
        best = std::max(best, Welfare(env, v, x));
      }
      return;
    }
    for (Outcome o : env.outcomes(i)) {
      x[i] = o;
      rec(i + 1);
    }
    x[i] = kNull;
  };
  rec(0);
  return best;
}

// Threshold bid for `agent` by bisection on the strict-win test against the
// brute-force optimum of the contraction.
double BisectCritical(const Environment& env, std::vector<Money> b,
                      const std::vector<bool>& fixed, int agent) {
  auto wins = [&](double bid) {
    b[agent] = bid;
    ValuationProfile v = ScalarProfile(b);
    auto contains_fixed = [&](const Allocation& x) {
      for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (fixed[i] && x[i] == kNull) return false;
      }
      return true;
    };
    Money with = BruteForceOpt(env, v, [&](const Allocation& x) {
      return contains_fixed(x) && x[agent] != kNull;
    });
    Money without = BruteForceOpt(env, v, [&](const Allocation& x) {
      return contains_fixed(x) && x[agent] == kNull;
    });
    return with > without + 1e-12;
  };
  double lo = 0, hi = 1000;
  for (int it = 0; it < 80; ++it) {
    double mid = (lo + hi) / 2;
    (wins(mid) ? hi : lo) = mid;
  }
  return hi;
}

TEST(OptTest, SingleItem) {
  Environment env = Environment::SingleItem(2);
  ValuationProfile v = ScalarProfile({1, 2});
  Allocation x = Opt(env, v);
  EXPECT_EQ(x, (Allocation{0, 1}));
  EXPECT_DOUBLE_EQ(Welfare(env, v, x), 2);
}

TEST(OptTest, UniformMatroid) {
  Environment env = Environment::BinaryMatroid(Matroid::Uniform(3, 2));
  ValuationProfile v = ScalarProfile({3, 2, 1});
  Allocation x = Opt(env, v);
  EXPECT_EQ(x, (Allocation{1, 2, 0}));
  EXPECT_DOUBLE_EQ(Welfare(env, v, x), 5);
}

TEST(OptTest, TriangleGivesTheTripleAway) {
  Instance t = GenSingleMindedTriangle();
  Allocation x = Opt(t.env, t.agents);
  EXPECT_EQ(x, (Allocation{0, 0, 0, 0b111}));
  EXPECT_DOUBLE_EQ(Welfare(t.env, t.agents, x), 3);
}

TEST(OptTest, MatchesBruteForceOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Instance a = GenXosRandom(2, 3, 2, seed);
    EXPECT_DOUBLE_EQ(Welfare(a.env, a.agents, Opt(a.env, a.agents)),
                     BruteForceOpt(a.env, a.agents));
    Instance p = GenPipRandom(3, 2, 2, seed);
    EXPECT_DOUBLE_EQ(Welfare(p.env, p.agents, Opt(p.env, p.agents)),
                     BruteForceOpt(p.env, p.agents));
  }
}

TEST(KnapsackDpTest, MatchesEnumeration) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Instance k = GenKnapsackRandom(4, seed, 1, seed % 2 == 1);
    Allocation dp = KnapsackDp(k.env, k.agents);
    EXPECT_TRUE(k.env.IsFeasible(dp));
    EXPECT_NEAR(Welfare(k.env, k.agents, dp),
                BruteForceOpt(k.env, k.agents), 1e-9);
  }
}

TEST(ResidualOptTest, SingleItemAfterSale) {
  FeasibleSpace space(Environment::SingleItem(2), 100);
  ValuationProfile v = ScalarProfile({1, 2});
  Allocation r = ResidualOpt(space, v,
                             ExchangeFamily::Of(FamilyKind::kSingleItemGate),
                             {1, 0});
  EXPECT_DOUBLE_EQ(Welfare(space.env(), v, r), 0);
}

TEST(ResidualOptTest, UniformMatroidContraction) {
  FeasibleSpace space(Environment::BinaryMatroid(Matroid::Uniform(3, 2)), 100);
  ValuationProfile v = ScalarProfile({3, 2, 1});
  Allocation r = ResidualOpt(
      space, v, ExchangeFamily::Of(FamilyKind::kCanonicalContraction),
      {1, 0, 0});
  EXPECT_EQ(r, (Allocation{0, 2, 0}));
  EXPECT_DOUBLE_EQ(Welfare(space.env(), v, r), 2);
}

TEST(ResidualOptTest, KnapsackBoundaryIsStrict) {
  FeasibleSpace space(Environment::Knapsack(2, 8, 0.5), 1000);
  ValuationProfile v = {Valuation::MakeKnapsack(1, 0.5),
                        Valuation::MakeKnapsack(1, 0.5)};
  auto family = ExchangeFamily::Of(FamilyKind::kKnapsackThreshold);
  EXPECT_EQ(FamilyMembers(space, family, {4, 0}).size(), 1u);
  EXPECT_DOUBLE_EQ(
      Welfare(space.env(), v, ResidualOpt(space, v, family, {4, 0})), 0);
  EXPECT_DOUBLE_EQ(
      Welfare(space.env(), v, ResidualOpt(space, v, family, {3, 0})), 2);
}

TEST(GreedyTest, OneUniformPicksMax) {
  Environment env = Environment::BinaryMatroid(Matroid::Uniform(3, 1));
  EXPECT_EQ(Greedy(env, ScalarProfile({3, 2, 1})), (Allocation{1, 0, 0}));
}

TEST(GreedyTest, ExplicitEnvironment) {
  ExplicitEnv e;
  e.counts = {2, 2};
  e.feasible = {{0, 0}, {1, 0}, {0, 1}};
  Environment env(2, e);
  EXPECT_EQ(Greedy(env, ScalarProfile({1, 2})), (Allocation{0, 1}));
}

TEST(GreedyTest, EqualsOptOnCatalogMatroids) {
  for (const auto& m : CatalogMatroids()) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Instance inst = GenMatroid(m.name, seed);
      EXPECT_DOUBLE_EQ(Welfare(inst.env, inst.agents, Greedy(inst.env, inst.agents)),
                       BruteForceOpt(inst.env, inst.agents))
          << m.name << " seed " << seed;
    }
  }
}

TEST(CriticalValueTest, SpecExamples) {
  FeasibleSpace one(Environment::BinaryMatroid(Matroid::Uniform(3, 1)), 100);
  Quote t = CriticalValue(RuleKind::kOpt, one, {0, 2, 1}, {false, false, false}, 0);
  ASSERT_TRUE(t);
  EXPECT_DOUBLE_EQ(*t, 2);
  EXPECT_FALSE(
      CriticalValue(RuleKind::kOpt, one, {0, 2, 1}, {false, true, false}, 0));
  FeasibleSpace two(Environment::BinaryMatroid(Matroid::Uniform(3, 2)), 100);
  t = CriticalValue(RuleKind::kOpt, two, {3, 0, 1}, {false, false, false}, 1);
  ASSERT_TRUE(t);
  EXPECT_DOUBLE_EQ(*t, 1);
}

TEST(CriticalValueTest, NonMatroidThresholdIsExact) {
  // F = {∅, {0}, {1}, {2}, {1,2}}: agent 0 must beat the pair.
  ExplicitEnv e;
  e.counts = {2, 2, 2};
  e.feasible = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 1}};
  FeasibleSpace space(Environment(3, e), 100);
  Quote t = CriticalValue(RuleKind::kOpt, space, {0, 2, 1}, {false, false, false}, 0);
  ASSERT_TRUE(t);
  EXPECT_DOUBLE_EQ(*t, 3);
}

TEST(CriticalValueTest, AgreesWithBisection) {
  for (const auto& m : CatalogMatroids()) {
    Instance inst = GenMatroid(m.name, 7);
    FeasibleSpace space(inst.env, 10000);
    std::vector<Money> b = Bids(inst.env, inst.agents);
    const int n = inst.env.agents();
    for (int i = 0; i < n; ++i) {
      std::vector<bool> none(n, false);
      for (RuleKind rule : {RuleKind::kOpt, RuleKind::kGreedy}) {
        Quote t = CriticalValue(rule, space, b, none, i);
        ASSERT_TRUE(t);
        EXPECT_NEAR(*t, BisectCritical(inst.env, b, none, i), 1e-6)
            << m.name << " agent " << i << " rule " << RuleKindName(rule);
      }
    }
  }
}

TEST(CriticalValueTest, WinsAboveAndLosesBelow) {
  Instance inst = GenMatroid("graphic-k4", 3);
  FeasibleSpace space(inst.env, 10000);
  std::vector<Money> b = Bids(inst.env, inst.agents);
  const int n = inst.env.agents();
  std::vector<bool> fixed(n, false);
  fixed[0] = true;
  for (int i = 1; i < n; ++i) {
    Quote t = CriticalValue(RuleKind::kGreedy, space, b, fixed, i);
    if (!t) continue;
    std::vector<Money> bids = b;
    bids[i] = *t + 0.01;
    EXPECT_TRUE(RunRule(RuleKind::kGreedy, space, bids, fixed)[i]);
    if (*t > 0.01) {
      bids[i] = *t - 0.01;
      EXPECT_FALSE(RunRule(RuleKind::kGreedy, space, bids, fixed)[i]);
    }
  }
}

TEST(PermeabilityTest, OneUniformIsOne) {
  FeasibleSpace one(Environment::BinaryMatroid(Matroid::Uniform(3, 1)), 100);
  auto r = Permeability(RuleKind::kOpt, one, {0, 1, 2});
  EXPECT_FALSE(r.gamma.unbounded);
  EXPECT_DOUBLE_EQ(r.gamma.value, 1);
}

TEST(PermeabilityTest, ZeroGridIsOne) {
  FeasibleSpace two(Environment::BinaryMatroid(Matroid::Uniform(3, 2)), 100);
  auto r = Permeability(RuleKind::kOpt, two, {0});
  EXPECT_FALSE(r.gamma.unbounded);
  EXPECT_DOUBLE_EQ(r.gamma.value, 1);
}

TEST(PermeabilityTest, CatalogMatroidsStayBelowTwo) {
  for (const auto& m : CatalogMatroids()) {
    if (m.matroid.ground_size() > 5) continue;  // Larger ones run in acceptance.
    FeasibleSpace space(Environment::BinaryMatroid(m.matroid), 10000);
    for (RuleKind rule : {RuleKind::kOpt, RuleKind::kGreedy}) {
      auto r = Permeability(rule, space, {0, 1, 2}, false);
      EXPECT_TRUE(r.gamma.AtMost(2)) << m.name << " " << r.gamma.value;
    }
  }
}

// Max-weight assignment of items to unit-demand agents by brute force.
Money UnitDemandMatching(const std::vector<std::vector<Money>>& w) {
  const int n = static_cast<int>(w.size());
  const int m = static_cast<int>(w[0].size());
  Money best = 0;
  std::vector<int> pick(n, -1);
  std::function<void(int, unsigned, Money)> rec = [&](int i, unsigned used,
                                                      Money total) {
    if (i == n) {
      best = std::max(best, total);
      return;
    }
    rec(i + 1, used, total);
    for (int j = 0; j < m; ++j) {
      if (!(used >> j & 1)) rec(i + 1, used | 1u << j, total + w[i][j]);
    }
  };
  rec(0, 0, 0);
  return best;
}

TEST(ConfigLpTest, AdditiveIsIntegral) {
  Environment env = Environment::Auction(2, 2);
  ValuationProfile v = {Valuation::MakeAdditive({3, 1}),
                        Valuation::MakeAdditive({1, 2})};
  FractionalSolution lp = FractionalOptConfigLp(env, v);
  EXPECT_NEAR(lp.objective, 5, 1e-9);
}

TEST(ConfigLpTest, TriangleObjectiveIsThree) {
  Instance t = GenSingleMindedTriangle();
  EXPECT_NEAR(FractionalOptConfigLp(t.env, t.agents).objective, 3, 1e-9);
}

TEST(ConfigLpTest, ZeroProfile) {
  Environment env = Environment::Auction(2, 2);
  ValuationProfile v = {Valuation::MakeAdditive({0, 0}),
                        Valuation::MakeAdditive({0, 0})};
  EXPECT_NEAR(FractionalOptConfigLp(env, v).objective, 0, 1e-12);
}

TEST(ConfigLpTest, UnitDemandEqualsMatching) {
  // Unit-demand LPs are bipartite matching polytopes, hence integral.
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    CounterRng rng(seed, 1);
    const int n = 3, m = 3;
    std::vector<std::vector<Money>> w(n, std::vector<Money>(m));
    ValuationProfile v;
    for (auto& row : w) {
      std::vector<std::vector<Money>> clauses;
      for (int j = 0; j < m; ++j) {
        row[j] = rng.UniformInt(0, 9);
        std::vector<Money> c(m, 0.0);
        c[j] = row[j];
        clauses.push_back(c);
      }
      v.push_back(Valuation::MakeXos(clauses));
    }
    FractionalSolution lp = FractionalOptConfigLp(Environment::Auction(n, m), v);
    EXPECT_NEAR(lp.objective, UnitDemandMatching(w), 1e-7) << "seed " << seed;
  }
}

TEST(ConfigLpTest, SolutionIsFeasibleAndDominatesIntegral) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Instance inst = GenMphRandom(3, 3, 2, 2, seed);
    FractionalSolution lp = FractionalOptConfigLp(inst.env, inst.agents);
    std::vector<double> item_load(3, 0.0);
    double objective = 0;
    for (int i = 0; i < 3; ++i) {
      double agent_load = 0;
      for (const auto& [s, x] : lp.weights[i]) {
        EXPECT_GT(x, 0);
        agent_load += x;
        for (int j : Members(s)) item_load[j] += x;
        objective += x * Value(inst.agents[i], s, inst.env);
      }
      EXPECT_LE(agent_load, 1 + 1e-9);
    }
    for (double l : item_load) EXPECT_LE(l, 1 + 1e-9);
    EXPECT_NEAR(objective, lp.objective, 1e-7);
    EXPECT_GE(lp.objective + 1e-9, BruteForceOpt(inst.env, inst.agents));
  }
}

TEST(SimplexTest, SmallPackingLp) {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3: optimum (3, 1) = 11.
  LpResult r = SolvePackingLp({{1, 1}, {1, 3}, {1, 0}}, {4, 6, 3}, {3, 2});
  EXPECT_NEAR(r.objective, 11, 1e-9);
  EXPECT_NEAR(r.x[0], 3, 1e-9);
  EXPECT_NEAR(r.x[1], 1, 1e-9);
}

TEST(FamilyTest, EveryFamilyIsExchangeCompatible) {
  // y ∈ F_x ⇒ (y_i, x_-i) feasible for every agent i.
  std::vector<std::pair<Instance, ExchangeFamily>> cases = {
      {GenMatroid("partition-5", 1),
       ExchangeFamily::Of(FamilyKind::kItemDisjoint)},
      {GenMatroid("uniform-2-4", 1),
       ExchangeFamily::Of(FamilyKind::kCanonicalContraction)},
      {GenXosRandom(2, 3, 2, 1), ExchangeFamily::Of(FamilyKind::kItemDisjoint)},
      {GenKnapsackRandom(3, 1), ExchangeFamily::Of(FamilyKind::kKnapsackThreshold)},
      {GenPipRandom(3, 2, 2, 1), ExchangeFamily::Of(FamilyKind::kPipThreshold)},
      {GenSingleItemRandom(3, 1, 1),
       ExchangeFamily::Of(FamilyKind::kSingleItemGate)},
  };
  for (const auto& [inst, family] : cases) {
    FeasibleSpace space(inst.env, 100000);
    for (const Allocation& x : space.all()) {
      for (std::size_t k : FamilyMembers(space, family, x)) {
        const Allocation& y = space.all()[k];
        for (int i = 0; i < inst.env.agents(); ++i) {
          Allocation z = x;
          z[i] = y[i];
          EXPECT_TRUE(inst.env.IsFeasible(z))
              << inst.name << " " << FamilyKindName(family.kind);
        }
      }
    }
  }
}

}  // namespace
}  // namespace balprice
