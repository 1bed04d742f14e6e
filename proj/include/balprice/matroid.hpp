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

#ifndef BALPRICE_MATROID_HPP_
#define BALPRICE_MATROID_HPP_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace balprice {

// Independence oracle over a ground set of at most 16 elements, with subsets
// given as bitmasks.
class Matroid {
 public:
  enum class Type { kUniform, kPartition, kGraphic, kExplicit };

  Matroid() = default;

  static Matroid Uniform(int ground, int rank) {
    Matroid m(Type::kUniform, ground);
    m.rank_ = rank;
    return m;
  }

  // block[e] names the block of element e; capacity[b] bounds each block.
  static Matroid Partition(std::vector<int> block, std::vector<int> capacity) {
    Matroid m(Type::kPartition, static_cast<int>(block.size()));
    for (int b : block) {
      if (b < 0 || b >= static_cast<int>(capacity.size())) {
        throw std::invalid_argument("partition block out of range");
      }
    }
    m.block_ = std::move(block);
    m.capacity_ = std::move(capacity);
    return m;
  }

  // Edges (u, v) of a multigraph on `vertices` vertices; independent sets are
  // forests.
  static Matroid Graphic(int vertices, std::vector<std::pair<int, int>> edges) {
    Matroid m(Type::kGraphic, static_cast<int>(edges.size()));
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= vertices || v >= vertices) {
        throw std::invalid_argument("graphic edge out of range");
      }
    }
    m.vertices_ = vertices;
    m.edges_ = std::move(edges);
    return m;
  }

  static Matroid CompleteGraph(int vertices) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < vertices; ++u) {
      for (int v = u + 1; v < vertices; ++v) edges.emplace_back(u, v);
    }
    return Graphic(vertices, std::move(edges));
  }

  // Explicit family of independent sets; it must be non-empty, contain the
  // empty set, be closed under subsets and satisfy the exchange axiom.
  static Matroid Explicit(int ground, std::vector<std::uint32_t> sets) {
    Matroid m(Type::kExplicit, ground);
    m.independent_ = std::set<std::uint32_t>(sets.begin(), sets.end());
    if (!m.independent_.count(0)) {
      throw std::invalid_argument("explicit matroid must contain the empty set");
    }
    for (std::uint32_t s : m.independent_) {
      if (s >> ground) throw std::invalid_argument("element out of range");
      for (std::uint32_t r = s; r; r &= r - 1) {
        if (!m.independent_.count(s & ~(r & -r))) {
          throw std::invalid_argument("explicit family is not subset closed");
        }
      }
    }
    for (std::uint32_t a : m.independent_) {
      for (std::uint32_t b : m.independent_) {
        if (std::popcount(a) >= std::popcount(b)) continue;
        bool exchanged = false;
        for (std::uint32_t r = b & ~a; r; r &= r - 1) {
          if (m.independent_.count(a | (r & -r))) exchanged = true;
        }
        if (!exchanged) {
          throw std::invalid_argument("explicit family violates exchange");
        }
      }
    }
    return m;
  }

  Type type() const { return type_; }
  int ground_size() const { return ground_; }
  int uniform_rank() const { return rank_; }
  const std::vector<int>& blocks() const { return block_; }
  const std::vector<int>& capacities() const { return capacity_; }
  int vertices() const { return vertices_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::set<std::uint32_t>& independent_sets() const {
    return independent_;
  }

  bool IsIndependent(std::uint32_t s) const {
    if (s >> ground_) return false;
    switch (type_) {
      case Type::kUniform:
        return std::popcount(s) <= rank_;
      case Type::kPartition: {
        std::vector<int> used(capacity_.size(), 0);
        for (std::uint32_t r = s; r; r &= r - 1) {
          int b = block_[std::countr_zero(r)];
          if (++used[b] > capacity_[b]) return false;
        }
        return true;
      }
      case Type::kGraphic: {
        std::vector<int> parent(vertices_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int v) {
          while (parent[v] != v) v = parent[v] = parent[parent[v]];
          return v;
        };
        for (std::uint32_t r = s; r; r &= r - 1) {
          auto [u, v] = edges_[std::countr_zero(r)];
          int a = find(u), b = find(v);
          if (a == b) return false;
          parent[a] = b;
        }
        return true;
      }
      case Type::kExplicit:
        return independent_.count(s) > 0;
    }
    return false;
  }

  int Rank(std::uint32_t s) const {
    std::uint32_t basis = 0;
    for (std::uint32_t r = s; r; r &= r - 1) {
      std::uint32_t e = r & -r;
      if (IsIndependent(basis | e)) basis |= e;
    }
    return std::popcount(basis);
  }

  // Greedy maximum-weight T with T ∩ fixed = ∅, T ⊆ allowed and T ∪ fixed
  // independent. Elements are scanned by non-increasing weight (ties by
  // index); non-positive weights are skipped.
  std::uint32_t MaxWeightExtension(const std::vector<double>& weight,
                                   std::uint32_t fixed,
                                   std::uint32_t allowed) const {
    std::vector<int> order;
    for (int e = 0; e < ground_; ++e) {
      if ((allowed >> e & 1) && !(fixed >> e & 1) && weight[e] > 0) {
        order.push_back(e);
      }
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return weight[a] > weight[b]; });
    std::uint32_t chosen = 0;
    for (int e : order) {
      std::uint32_t bit = std::uint32_t{1} << e;
      if (IsIndependent(fixed | chosen | bit)) chosen |= bit;
    }
    return chosen;
  }

 private:
  Matroid(Type type, int ground) : type_(type), ground_(ground) {
    if (ground < 0 || ground > 16) {
      throw std::invalid_argument("ground set must have at most 16 elements");
    }
  }

  Type type_ = Type::kUniform;
  int ground_ = 0;
  int rank_ = 0;
  std::vector<int> block_;
  std::vector<int> capacity_;
  int vertices_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::set<std::uint32_t> independent_;
};

}  // namespace balprice

#endif  // BALPRICE_MATROID_HPP_
