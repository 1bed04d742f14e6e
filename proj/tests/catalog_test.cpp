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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "balprice/catalog.hpp"
#include "balprice/io.hpp"
#include "balprice/mechanism.hpp"
#include "balprice/stochastic.hpp"

namespace balprice {
namespace {

// Parameter sets exercising every generator.
std::vector<std::pair<std::string, Json>> GeneratorCases() {
  return {
      {"footnote-lb", {{"d", 4}}},
      {"footnote-lb", {{"d", 3}, {"epsilon", 0.125}}},
      {"triangle", Json::object()},
      {"no-price", {{"n", 2}, {"k", 3}}},
      {"tight-prophet", {{"q", 0.01}}},
      {"single-item", {{"n", 3}, {"atoms", 3}, {"seed", 4}}},
      {"matroid", {{"matroid", "graphic-k4"}, {"seed", 2}}},
      {"matroid", {{"matroid", "partition-5"}, {"seed", 3}, {"atoms", 2}}},
      {"knapsack", {{"n", 3}, {"seed", 5}, {"atoms", 2}}},
      {"knapsack", {{"n", 2}, {"seed", 6}, {"mixed", true}}},
      {"pip", {{"n", 4}, {"m", 3}, {"d", 2}, {"seed", 7}}},
      {"xos", {{"n", 2}, {"m", 3}, {"clauses", 3}, {"seed", 8}, {"atoms", 2}}},
      {"mph", {{"n", 3}, {"m", 4}, {"k", 2}, {"seed", 9}}},
      {"product-single-item", {{"n", 2}, {"markets", 2}, {"seed", 10}}},
  };
}

TEST(GeneratorTest, EveryNameIsCovered) {
  std::vector<std::string> seen;
  for (const auto& [name, params] : GeneratorCases()) seen.push_back(name);
  for (const std::string& name : GeneratorNames()) {
    EXPECT_NE(std::find(seen.begin(), seen.end(), name), seen.end()) << name;
  }
  EXPECT_THROW(Generate("nope", Json::object()), ParameterError);
}

TEST(GeneratorTest, PureFunctionOfParameters) {
  for (const auto& [name, params] : GeneratorCases()) {
    EXPECT_EQ(InstanceToJson(Generate(name, params)).dump(),
              InstanceToJson(Generate(name, params)).dump())
        << name;
  }
}

TEST(GeneratorTest, RoundTripsBitExactly) {
  for (const auto& [name, params] : GeneratorCases()) {
    Instance a = Generate(name, params);
    std::string text = InstanceToJson(a).dump();
    Instance b = ParseInstance(text);
    EXPECT_EQ(InstanceToJson(b).dump(), text) << name;
    EXPECT_EQ(a.agents, b.agents) << name;
    EXPECT_EQ(EnumerateFeasible(a.env, 100000), EnumerateFeasible(b.env, 100000))
        << name;
    ASSERT_EQ(a.distribution.has_value(), b.distribution.has_value()) << name;
    if (a.distribution) {
      for (int i = 0; i < a.env.agents(); ++i) {
        const auto& sa = a.distribution->support(i);
        const auto& sb = b.distribution->support(i);
        ASSERT_EQ(sa.size(), sb.size());
        for (std::size_t k = 0; k < sa.size(); ++k) {
          EXPECT_EQ(sa[k].valuation, sb[k].valuation);
          EXPECT_EQ(sa[k].prob, sb[k].prob);
        }
      }
    }
  }
}

TEST(FootnoteLbTest, OptIsD) {
  for (int d : {2, 4}) {
    Instance f = GenFootnoteLb(d);
    FeasibleSpace space(f.env, 100000);
    EXPECT_DOUBLE_EQ(Welfare(f.env, f.agents, Opt(space, f.agents)), d);
  }
  EXPECT_THROW(GenFootnoteLb(1), ParameterError);
}

TEST(FootnoteLbTest, IntroPricesServeOneInWorstOrder) {
  Instance f = GenFootnoteLb(4);
  FeasibleSpace space(f.env, 100000);
  PricingRule p = IntroBundleItemPrices(f.env, f.agents, Opt(space, f.agents));
  EXPECT_LE(WorstOrderWelfare(f.env, p, f.agents).welfare, 1 + 1e-9);
}

TEST(TriangleTest, OptAndLpAreThree) {
  Instance t = GenSingleMindedTriangle();
  FeasibleSpace space(t.env, 1000);
  EXPECT_DOUBLE_EQ(Welfare(t.env, t.agents, Opt(space, t.agents)), 3);
  EXPECT_NEAR(FractionalOptConfigLp(t.env, t.agents).objective, 3, 1e-9);
}

TEST(NoPriceTest, ThreeByThree) {
  Instance h = GenNoPriceInstance(3, 3);
  FeasibleSpace space(h.env, 100000);
  EXPECT_EQ(space.size(), 1u + 27u * 7u);
  EXPECT_NEAR(ExpectedOpt(space, h.Distribution()), 3.0, 1e-12);
}

TEST(NoPriceTest, RandomStaticPricesStayBelowBound) {
  Instance h = GenNoPriceInstance(3, 3);
  ProductDistribution dist = h.Distribution();
  CounterRng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::vector<Money>> table(3, std::vector<Money>(28, 0.0));
    for (auto& row : table) {
      for (std::size_t s = 1; s < row.size(); ++s) row[s] = rng.Uniform() * 0.5;
    }
    PricingRule p(
        h.env,
        [table](int i, Outcome x, const Allocation&) { return table[i][x]; },
        RuleTraits{true, false, false}, {});
    EXPECT_LE(ExpectedMechanismWelfare(h.env, p, dist, {0, 1, 2},
                                       TiePolicy::kPreferBuyLexmin),
              1 + 2.0 / 3 + 1e-9);
  }
}

TEST(NoPriceTest, SingleAgentIsServed) {
  Instance h = GenNoPriceInstance(1, 3);
  PricingRule zero(
      h.env, [](int, Outcome, const Allocation&) { return 0.0; },
      RuleTraits{true, true, false}, {});
  EXPECT_DOUBLE_EQ(ExpectedMechanismWelfare(h.env, zero, h.Distribution(), {0},
                                            TiePolicy::kAdversarial),
                   1.0);
}

TEST(NoPriceTest, CapIsEnforced) {
  EXPECT_THROW(GenNoPriceInstance(3, 3, 100), CapExceeded);
}

TEST(TightProphetTest, ExpectedOpt) {
  Instance t = GenTightProphet(0.01);
  FeasibleSpace space(t.env, 100);
  EXPECT_NEAR(ExpectedOpt(space, t.Distribution()), 1.99, 1e-12);
  EXPECT_THROW(GenTightProphet(0), ParameterError);
}

TEST(MatroidCatalogTest, GraphicK4) {
  Matroid k4 = NamedCatalogMatroid("graphic-k4");
  EXPECT_EQ(k4.ground_size(), 6);
  EXPECT_EQ(k4.Rank((ItemSet{1} << 6) - 1), 3);
  for (const auto& m : CatalogMatroids()) EXPECT_LE(m.matroid.ground_size(), 6);
  EXPECT_THROW(NamedCatalogMatroid("fano"), ParameterError);
}

TEST(PipGeneratorTest, RespectsSparsityAndEntryBound) {
  for (int d : {1, 2}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Instance inst = GenPipRandom(4, 3, d, seed);
      EXPECT_LE(ColumnSparsity(inst.env), d);
      for (const auto& row : inst.env.as<PipEnv>().matrix) {
        for (double a : row) EXPECT_LE(a, 0.5);
      }
    }
  }
  EXPECT_THROW(GenPipRandom(2, 2, 3, 0), ParameterError);
}

TEST(KnapsackGeneratorTest, SizesMatchTheRestriction) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ProductDistribution dist = GenKnapsackRandom(3, seed, 2).Distribution();
    for (const auto& s : dist.supports()) {
      for (const Atom& a : s) {
        EXPECT_LE(a.valuation.get_if<KnapsackThreshold>()->size, 0.5);
      }
    }
  }
}

TEST(ParseTest, RejectsUnknownKeys) {
  Json j = InstanceToJson(GenTightProphet(0.5));
  j["extra"] = 1;
  EXPECT_THROW(InstanceFromJson(j), ParseError);
  Json k = InstanceToJson(GenTightProphet(0.5));
  k["environment"]["colour"] = "red";
  EXPECT_THROW(InstanceFromJson(k), ParseError);
}

TEST(ParseTest, RejectsMalformedJson) {
  EXPECT_THROW(ParseInstance("{\"environment\": "), ParseError);
  EXPECT_THROW(ParseInstance("[]"), ParseError);
}

TEST(ParseTest, RejectsMismatchedAgents) {
  Json j = InstanceToJson(GenTightProphet(0.5));
  j["environment"]["agents"] = 3;
  EXPECT_THROW(InstanceFromJson(j), ParseError);
}

TEST(ParseTest, RejectsUnknownKinds) {
  Json j = InstanceToJson(GenTightProphet(0.5));
  j["environment"]["kind"] = "auction_house";
  EXPECT_THROW(InstanceFromJson(j), ParseError);
}

TEST(ParseTest, MissingFileIsParseError) {
  EXPECT_THROW(LoadInstance("/nonexistent/instance.json"), ParseError);
}

}  // namespace
}  // namespace balprice
