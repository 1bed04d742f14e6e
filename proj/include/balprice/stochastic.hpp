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

// Expectations over product distributions and competitive-ratio estimates.

#ifndef BALPRICE_STOCHASTIC_HPP_
#define BALPRICE_STOCHASTIC_HPP_

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "balprice/distribution.hpp"
#include "balprice/mechanism.hpp"
#include "balprice/oracle.hpp"
#include "balprice/parallel.hpp"

namespace balprice {

inline Money ExactExpectation(
    const ProductDistribution& dist,
    const std::function<Money(const ValuationProfile&)>& f,
    std::size_t cap = Caps::Default().support) {
  std::vector<double> terms;
  dist.ForEachAtom(cap, [&](const std::vector<int>&, const ValuationProfile& v,
                            double p) { terms.push_back(p * f(v)); });
  return PairwiseSum(terms);
}

inline Money ExpectedOpt(const FeasibleSpace& space,
                         const ProductDistribution& dist,
                         std::size_t cap = Caps::Default().support) {
  return ExactExpectation(
      dist,
      [&](const ValuationProfile& v) {
        return Welfare(space.env(), v, Opt(space, v));
      },
      cap);
}

// How arrival orders are chosen.
struct OrderMode {
  enum class Kind { kFixed, kRandom, kWorst } kind = Kind::kWorst;
  std::vector<int> order;  // For kFixed.

  static OrderMode Fixed(std::vector<int> order) {
    return {Kind::kFixed, std::move(order)};
  }
  static OrderMode Random() { return {Kind::kRandom, {}}; }
  static OrderMode Worst() { return {Kind::kWorst, {}}; }

  std::string Name() const {
    switch (kind) {
      case Kind::kFixed: {
        std::string s = "fixed:";
        for (std::size_t k = 0; k < order.size(); ++k) {
          s += (k ? "," : "") + std::to_string(order[k] + 1);
        }
        return s;
      }
      case Kind::kRandom: return "random";
      case Kind::kWorst: return "all";
    }
    return "?";
  }
};

struct RatioEstimate {
  Money expected_mechanism_welfare = 0;
  Money expected_opt = 0;
  double ratio = 0;
  bool exact = true;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double ci95_halfwidth = 0;
  std::vector<int> worst_order;

  Json ToJson() const {
    Json j = {{"expected_mechanism_welfare", expected_mechanism_welfare},
              {"expected_opt", expected_opt},
              {"ratio", ratio},
              {"mode", exact ? "exact" : "monte_carlo"}};
    if (!exact) {
      j["trials"] = trials;
      j["seed"] = seed;
      j["ci95_halfwidth"] = ci95_halfwidth;
    }
    if (!worst_order.empty()) j["worst_order"] = worst_order;
    return j;
  }
};

// Exact mode. kWorst takes the minimum over orders of the expected welfare;
// kRandom averages over all orders uniformly.
inline RatioEstimate ExactRatio(const FeasibleSpace& space,
                                const PricingRule& prices,
                                const ProductDistribution& dist,
                                const OrderMode& mode,
                                TiePolicy tie = TiePolicy::kAdversarial,
                                const Caps& caps = Caps::Default(),
                                int jobs = 1) {
  const Environment& env = space.env();
  RatioEstimate r;
  r.expected_opt = ExpectedOpt(space, dist, caps.support);
  if (r.expected_opt <= 0) throw DomainError("E[OPT] is 0; ratio undefined");
  switch (mode.kind) {
    case OrderMode::Kind::kFixed:
      r.expected_mechanism_welfare =
          ExpectedMechanismWelfare(env, prices, dist, mode.order, tie, caps);
      break;
    case OrderMode::Kind::kWorst: {
      auto w = WorstOrderExpectedWelfare(env, prices, dist, tie, caps, jobs);
      r.expected_mechanism_welfare = w.welfare;
      r.worst_order = w.order;
      break;
    }
    case OrderMode::Kind::kRandom: {
      auto orders = AllOrders(env.agents(), caps.orders);
      auto w = ParallelMap<double>(orders.size(), jobs, [&](std::size_t k) {
        return ExpectedMechanismWelfare(env, prices, dist, orders[k], tie,
                                        caps);
      });
      r.expected_mechanism_welfare = PairwiseSum(w) / orders.size();
      break;
    }
  }
  r.ratio = r.expected_mechanism_welfare / r.expected_opt;
  return r;
}

// Monte Carlo mode. Trial t draws its profile (and, for kRandom, its order)
// from stream (seed, t); kWorst uses the worst order of each sampled profile.
// The 95% interval is the normal approximation for the ratio of means.
inline RatioEstimate MonteCarloRatio(const FeasibleSpace& space,
                                     const PricingRule& prices,
                                     const ProductDistribution& dist,
                                     const OrderMode& mode, std::size_t trials,
                                     std::uint64_t seed,
                                     TiePolicy tie = TiePolicy::kAdversarial,
                                     const Caps& caps = Caps::Default(),
                                     int jobs = 1) {
  if (trials == 0) throw ParameterError("trials must be positive");
  const Environment& env = space.env();
  const int n = env.agents();
  struct Sample {
    double welfare = 0;
    double opt = 0;
  };
  auto samples = ParallelMap<Sample>(trials, jobs, [&](std::size_t t) {
    CounterRng rng(seed, t);
    ValuationProfile v = dist.Profile(dist.SampleIndex(rng));
    Sample s;
    s.opt = Welfare(env, v, Opt(space, v));
    switch (mode.kind) {
      case OrderMode::Kind::kFixed:
        s.welfare = RunPostedPrice(env, prices, v, mode.order, tie, caps.nodes)
                        .welfare;
        break;
      case OrderMode::Kind::kRandom: {
        std::vector<int> order = IdentityOrder(n);
        for (int k = n - 1; k > 0; --k) {
          std::swap(order[k], order[rng.UniformInt(0, k)]);
        }
        s.welfare =
            RunPostedPrice(env, prices, v, order, tie, caps.nodes).welfare;
        break;
      }
      case OrderMode::Kind::kWorst:
        s.welfare = WorstOrderWelfare(env, prices, v, tie, caps).welfare;
        break;
    }
    return s;
  });
  std::vector<double> w(trials), o(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    w[t] = samples[t].welfare;
    o[t] = samples[t].opt;
  }
  RatioEstimate r;
  r.exact = false;
  r.trials = trials;
  r.seed = seed;
  r.expected_mechanism_welfare = PairwiseSum(w) / trials;
  r.expected_opt = PairwiseSum(o) / trials;
  if (r.expected_opt <= 0) throw DomainError("E[OPT] estimate is 0");
  r.ratio = r.expected_mechanism_welfare / r.expected_opt;
  if (trials > 1) {
    std::vector<double> d(trials);
    for (std::size_t t = 0; t < trials; ++t) d[t] = w[t] - r.ratio * o[t];
    double mean = PairwiseSum(d) / trials;
    for (double& x : d) x = (x - mean) * (x - mean);
    double var = PairwiseSum(d) / (trials - 1);
    r.ci95_halfwidth = 1.96 * std::sqrt(var / trials) / r.expected_opt;
  }
  return r;
}

}  // namespace balprice

#endif  // BALPRICE_STOCHASTIC_HPP_
