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

// Finite product distributions over valuation profiles and the counter-based
// generator used for every random draw in the library.

#ifndef BALPRICE_DISTRIBUTION_HPP_
#define BALPRICE_DISTRIBUTION_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "balprice/core.hpp"

namespace balprice {

// SplitMix64 evaluated in counter mode: the i-th draw of stream (seed, s) is
// a pure function of (seed, s, i), so draws never depend on scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(Mix(seed ^ Mix(stream + 0x632be59bd9b4e019ULL))) {}

  static std::uint64_t Mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t Next() { return Mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi].
  int UniformInt(int lo, int hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(Next() % span);
  }

  // Uniform on the grid {0, 1/steps, ..., 1} scaled by `top`.
  double GridValue(int steps, double top = 1.0) {
    return top * UniformInt(0, steps) / steps;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct Atom {
  Valuation valuation;
  double prob = 1.0;
};

class ProductDistribution {
 public:
  ProductDistribution() = default;

  explicit ProductDistribution(std::vector<std::vector<Atom>> supports)
      : supports_(std::move(supports)) {
    for (const auto& s : supports_) {
      if (s.empty()) throw DomainError("empty support");
      double total = 0;
      for (const Atom& a : s) {
        if (!(a.prob >= 0)) throw DomainError("negative probability");
        total += a.prob;
      }
      if (std::abs(total - 1.0) > kTolerance) {
        throw DomainError("probabilities must sum to 1");
      }
    }
  }

  static ProductDistribution Deterministic(const ValuationProfile& profile) {
    std::vector<std::vector<Atom>> s;
    for (const Valuation& v : profile) s.push_back({Atom{v, 1.0}});
    return ProductDistribution(std::move(s));
  }

  int agents() const { return static_cast<int>(supports_.size()); }
  const std::vector<Atom>& support(int agent) const {
    return supports_.at(agent);
  }
  const std::vector<std::vector<Atom>>& supports() const { return supports_; }

  // Number of product atoms, saturating at SIZE_MAX.
  std::size_t SupportSize() const {
    std::size_t total = 1;
    for (const auto& s : supports_) {
      if (total > std::numeric_limits<std::size_t>::max() / s.size()) {
        return std::numeric_limits<std::size_t>::max();
      }
      total *= s.size();
    }
    return total;
  }

  bool IsDeterministic() const { return SupportSize() == 1; }

  ValuationProfile Profile(const std::vector<int>& index) const {
    ValuationProfile p;
    for (int i = 0; i < agents(); ++i) {
      p.push_back(supports_[i][index[i]].valuation);
    }
    return p;
  }

  double Prob(const std::vector<int>& index) const {
    double p = 1.0;
    for (int i = 0; i < agents(); ++i) p *= supports_[i][index[i]].prob;
    return p;
  }

  // Calls f(index, profile, prob) for every product atom in odometer order
  // (agent 0 varies slowest).
  template <class F>
  void ForEachAtom(std::size_t cap, F f) const {
    std::size_t size = SupportSize();
    if (size > cap) throw CapExceeded("product support", size);
    std::vector<int> index(agents(), 0);
    for (;;) {
      f(index, Profile(index), Prob(index));
      int i = agents() - 1;
      while (i >= 0 && ++index[i] == static_cast<int>(supports_[i].size())) {
        index[i--] = 0;
      }
      if (i < 0) return;
    }
  }

  std::vector<int> SampleIndex(CounterRng& rng) const {
    std::vector<int> index(agents());
    for (int i = 0; i < agents(); ++i) {
      double u = rng.Uniform();
      int k = 0;
      const int last = static_cast<int>(supports_[i].size()) - 1;
      while (k < last && u >= supports_[i][k].prob) u -= supports_[i][k++].prob;
      index[i] = k;
    }
    return index;
  }

 private:
  std::vector<std::vector<Atom>> supports_;
};

}  // namespace balprice

#endif  // BALPRICE_DISTRIBUTION_HPP_
