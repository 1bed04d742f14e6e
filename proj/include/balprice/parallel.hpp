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

#ifndef BALPRICE_PARALLEL_HPP_
#define BALPRICE_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace balprice {

// Evaluates f(0..count-1) on up to `jobs` threads. Results are stored by
// index, so any reduction over them is independent of the schedule. The
// first exception (by index) is rethrown.
template <class T, class F>
std::vector<T> ParallelMap(std::size_t count, int jobs, F f) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t begin, std::size_t step) {
    for (std::size_t k = begin; k < count; k += step) {
      try {
        out[k] = f(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// Pairwise summation; the result depends only on the order of `v`.
inline double PairwiseSum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t k = 0; k < n; ++k) s += v[k];
    return s;
  }
  std::size_t half = n / 2;
  return PairwiseSum(v, half) + PairwiseSum(v + half, n - half);
}

inline double PairwiseSum(const std::vector<double>& v) {
  return PairwiseSum(v.data(), v.size());
}

}  // namespace balprice

#endif  // BALPRICE_PARALLEL_HPP_
