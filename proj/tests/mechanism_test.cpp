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
#include <vector>

#include <gtest/gtest.h>

#include "balprice/catalog.hpp"
#include "balprice/mechanism.hpp"
#include "balprice/stochastic.hpp"

namespace balprice {
namespace {

PricingRule Flat(const Environment& env, Money price) {
  return PricingRule(
      env, [price](int, Outcome, const Allocation&) { return price; },
      RuleTraits{true, true, false}, {{"construction", "flat"}});
}

TEST(RunPostedPriceTest, HalfPriceAdversarialTieBuysLow) {
  Environment env = Environment::SingleItem(2);
  ValuationProfile v = ScalarProfile({1, 2});
  PricingRule p = ScaledRule(SingleItemPrices(env, v), 0.5);
  MechanismTrace t = RunPostedPrice(env, p, v, {0, 1}, TiePolicy::kAdversarial);
  EXPECT_EQ(t.purchases[0].outcome, 1u);
  EXPECT_EQ(t.purchases[1].outcome, kNull);
  EXPECT_DOUBLE_EQ(t.welfare, 1);
  EXPECT_DOUBLE_EQ(t.revenue, 1);
  EXPECT_DOUBLE_EQ(t.utility_sum, 0);
}

TEST(RunPostedPriceTest, TiePoliciesDiffer) {
  Environment env = Environment::SingleItem(2);
  ValuationProfile v = ScalarProfile({1, 2});
  PricingRule p = Flat(env, 1);
  EXPECT_DOUBLE_EQ(
      RunPostedPrice(env, p, v, {0, 1}, TiePolicy::kPreferNull).welfare, 2);
  EXPECT_DOUBLE_EQ(
      RunPostedPrice(env, p, v, {0, 1}, TiePolicy::kPreferBuyLexmin).welfare,
      1);
}

TEST(RunPostedPriceTest, ZeroValuations) {
  Environment env = Environment::Auction(3, 2);
  ValuationProfile v(3, Valuation::MakeAdditive({0, 0}));
  PricingRule p = ItemPriceRule(env, {0.5, 0.5}, {});
  MechanismTrace t = RunPostedPrice(env, p, v, {2, 0, 1}, TiePolicy::kAdversarial);
  EXPECT_DOUBLE_EQ(t.welfare, 0);
  EXPECT_DOUBLE_EQ(t.revenue, 0);
}

TEST(RunPostedPriceTest, HighAgentFirstBuys) {
  Environment env = Environment::SingleItem(2);
  ValuationProfile v = ScalarProfile({1, 2});
  PricingRule p = ScaledRule(SingleItemPrices(env, v), 0.5);
  MechanismTrace t = RunPostedPrice(env, p, v, {1, 0}, TiePolicy::kAdversarial);
  EXPECT_DOUBLE_EQ(t.welfare, 2);
  EXPECT_EQ(t.order, (std::vector<int>{1, 0}));
  Json j = t.ToJson();
  EXPECT_EQ(j.at("welfare").get<double>(), 2);
  EXPECT_EQ(j.at("purchases").size(), 2u);
}

TEST(RunPostedPriceTest, RejectsNonPermutation) {
  Environment env = Environment::SingleItem(2);
  ValuationProfile v = ScalarProfile({1, 2});
  EXPECT_THROW(RunPostedPrice(env, Flat(env, 1), v, {0, 0},
                              TiePolicy::kAdversarial),
               DomainError);
}

TEST(RunPostedPriceTest, NoBundleAfterConflictingPurchase) {
  Environment env = Environment::Auction(2, 2);
  ValuationProfile v = {Valuation::SingleMinded(0b01, 3),
                        Valuation::SingleMinded(0b11, 5)};
  PricingRule p = ItemPriceRule(env, {1, 1}, {});
  MechanismTrace t = RunPostedPrice(env, p, v, {0, 1}, TiePolicy::kAdversarial);
  EXPECT_EQ(t.purchases[0].outcome, 0b01u);
  // Agent 1 may still take item 1 alone, worth nothing to them.
  EXPECT_DOUBLE_EQ(t.purchases[1].value, 0);
  EXPECT_DOUBLE_EQ(t.welfare, 3);
}

// Best worst-order welfare over a grid of item prices is 2 against OPT 3.
TEST(WorstOrderTest, TriangleSweepPeaksAtTwo) {
  Instance t = GenSingleMindedTriangle();
  FeasibleSpace space(t.env, 1000);
  EXPECT_DOUBLE_EQ(Welfare(t.env, t.agents, Opt(space, t.agents)), 3);
  Money best = 0;
  std::vector<Money> grid = {0, 0.5, 1, 1.5, 2, 2.5, 3};
  for (Money a : grid) {
    for (Money b : grid) {
      for (Money c : grid) {
        PricingRule p = ItemPriceRule(t.env, {a, b, c}, {});
        best = std::max(best, WorstOrderWelfare(t.env, p, t.agents).welfare);
      }
    }
  }
  EXPECT_DOUBLE_EQ(best, 2);
}

TEST(WorstOrderTest, TriangleWitnessOrderIsReported) {
  Instance t = GenSingleMindedTriangle();
  PricingRule p = ItemPriceRule(t.env, {0.9, 0.9, 0.9}, {});
  OrderedWelfare w = WorstOrderWelfare(t.env, p, t.agents);
  EXPECT_DOUBLE_EQ(w.welfare, 2);
  EXPECT_DOUBLE_EQ(
      RunPostedPrice(t.env, p, t.agents, w.order, TiePolicy::kAdversarial)
          .welfare,
      2);
}

TEST(WorstOrderTest, SingleAgentIsOrderIndependent) {
  Environment env = Environment::SingleItem(1);
  ValuationProfile v = ScalarProfile({3});
  OrderedWelfare w = WorstOrderWelfare(env, Flat(env, 1), v);
  EXPECT_DOUBLE_EQ(w.welfare, 3);
  EXPECT_EQ(w.order, (std::vector<int>{0}));
}

TEST(WorstOrderTest, FootnoteLowerBoundCheapItemsServeOne) {
  Instance f = GenFootnoteLb(4);
  FeasibleSpace space(f.env, 100000);
  EXPECT_DOUBLE_EQ(Welfare(f.env, f.agents, Opt(space, f.agents)), 4);
  for (int k = 0; k <= 20; ++k) {
    Money price = k / 20.0;
    std::vector<Money> p(4, 1.0);
    p[k % 4] = price;  // Minimum item price at most 1.
    PricingRule rule = ItemPriceRule(f.env, p, {});
    EXPECT_LE(WorstOrderWelfare(f.env, rule, f.agents).welfare, 1 + 1e-9)
        << price;
  }
}

TEST(WorstOrderTest, CapIsEnforced) {
  Environment env = Environment::SingleItem(4);
  ValuationProfile v = ScalarProfile({1, 1, 1, 1});
  Caps caps = Caps::Default();
  caps.orders = 10;
  EXPECT_THROW(WorstOrderWelfare(env, Flat(env, 0), v, TiePolicy::kAdversarial,
                                 caps),
               CapExceeded);
}

TEST(AdaptiveAdversaryTest, DeterministicEqualsWorstOrder) {
  Instance t = GenSingleMindedTriangle();
  for (Money a : {0.5, 1.0, 1.5}) {
    PricingRule p = ItemPriceRule(t.env, {a, 1, 1.5}, {});
    EXPECT_NEAR(AdaptiveAdversaryWelfare(
                    t.env, p, ProductDistribution::Deterministic(t.agents)),
                WorstOrderWelfare(t.env, p, t.agents).welfare, 1e-12);
  }
}

// A worth 1; B worth 2 or 0 with probability 1/2; price 1/2. Leading with A
// yields 1; leading with B yields (2 + 1) / 2.
TEST(AdaptiveAdversaryTest, TwoPointTree) {
  Environment env = Environment::SingleItem(2);
  ProductDistribution dist(
      {{{Valuation::MakeScalar(1), 1.0}},
       {{Valuation::MakeScalar(2), 0.5}, {Valuation::MakeScalar(0), 0.5}}});
  PricingRule p = Flat(env, 0.5);
  EXPECT_DOUBLE_EQ(AdaptiveAdversaryWelfare(env, p, dist), 1.0);
  EXPECT_DOUBLE_EQ(
      ExpectedMechanismWelfare(env, p, dist, {1, 0}, TiePolicy::kAdversarial),
      1.5);
}

// An adversary that observes purchases is at least as strong as any fixed
// order.
TEST(AdaptiveAdversaryTest, NeverAboveWorstFixedOrder) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst = GenSingleItemRandom(3, 2, seed);
    ProductDistribution dist = inst.Distribution();
    PricingRule p = Flat(inst.env, 2.5);
    Money adaptive = AdaptiveAdversaryWelfare(inst.env, p, dist);
    Money fixed = WorstOrderExpectedWelfare(inst.env, p, dist).welfare;
    EXPECT_LE(adaptive, fixed + 1e-9);
  }
}

TEST(AdaptiveAdversaryTest, SingleAgentIsPlainExpectation) {
  Environment env = Environment::SingleItem(1);
  ProductDistribution dist(
      {{{Valuation::MakeScalar(2), 0.5}, {Valuation::MakeScalar(0), 0.5}}});
  EXPECT_DOUBLE_EQ(AdaptiveAdversaryWelfare(env, Flat(env, 1), dist), 1.0);
}

ProductDistribution KnapsackDist(const std::vector<std::vector<Atom>>& s) {
  return ProductDistribution(s);
}

TEST(SelectorTest, SmallRequestsReportBothMechanisms) {
  Environment env = Environment::Knapsack(2, 8, 1.0);
  ProductDistribution dist = KnapsackDist(
      {{{Valuation::MakeKnapsack(2, 0.25), 0.5},
        {Valuation::MakeKnapsack(1, 0.5), 0.5}},
       {{Valuation::MakeKnapsack(3, 0.375), 1.0}}});
  SelectorResult r = TwoMechanismSelector(env, dist);
  EXPECT_DOUBLE_EQ(r.welfare, std::max(r.per_unit_welfare, r.whole_unit_welfare));
  EXPECT_EQ(r.chosen, r.per_unit_welfare >= r.whole_unit_welfare ? "per_unit"
                                                                 : "whole_unit");
  // Both agents fit together in every realization.
  EXPECT_DOUBLE_EQ(r.expected_opt, 4.5);
  EXPECT_GE(r.welfare, r.expected_opt / 5 - 1e-9);
}

TEST(SelectorTest, LargeRequestsWholeUnitHalvesTheMax) {
  Environment env = Environment::Knapsack(3, 8, 1.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CounterRng rng(seed);
    std::vector<std::vector<Atom>> s(3);
    for (auto& support : s) {
      for (int a = 0; a < 2; ++a) {
        double size = rng.UniformInt(5, 8) / 8.0;
        support.push_back({Valuation::MakeKnapsack(GridMoney(rng), size), 0.5});
      }
    }
    SelectorResult r = TwoMechanismSelector(env, KnapsackDist(s));
    EXPECT_GE(r.whole_unit_welfare, r.expected_opt / 2 - 1e-9) << seed;
  }
}

TEST(SelectorTest, MixedInstancesFifth) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst = GenKnapsackRandom(3, seed, 2, /*mixed=*/true);
    SelectorResult r = TwoMechanismSelector(inst.env, inst.Distribution());
    EXPECT_GE(r.welfare, r.expected_opt / 5 - 1e-9) << seed;
    EXPECT_LE(r.welfare, r.expected_opt + 1e-9) << seed;
  }
}

TEST(ExpectedWelfareTest, BelowExpectedOpt) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst = GenXosRandom(2, 3, 2, seed, 2);
    FeasibleSpace space(inst.env, 100000);
    ProductDistribution dist = inst.Distribution();
    PricingRule p = ItemPriceRule(inst.env, {0.5, 1, 0}, {});
    for (const auto& order : AllOrders(2)) {
      EXPECT_LE(ExpectedMechanismWelfare(inst.env, p, dist, order,
                                         TiePolicy::kPreferBuyLexmin),
                ExpectedOpt(space, dist) + 1e-9);
    }
  }
}

}  // namespace
}  // namespace balprice
