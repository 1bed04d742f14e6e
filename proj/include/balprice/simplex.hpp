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

// Dense tableau simplex for packing LPs: max c.x s.t. Ax <= b, x >= 0, b >= 0.

#ifndef BALPRICE_SIMPLEX_HPP_
#define BALPRICE_SIMPLEX_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace balprice {

struct LpResult {
  double objective = 0;
  std::vector<double> x;
  long iterations = 0;
};

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bland's rule keeps the method finite on degenerate vertices.
inline LpResult SolvePackingLp(const std::vector<std::vector<double>>& a,
                               const std::vector<double>& b,
                               const std::vector<double>& c,
                               double pivot_tol = 1e-9,
                               long max_iterations = 1000000) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  for (std::size_t r = 0; r < m; ++r) {
    if (a[r].size() != n) throw LpError("constraint row has wrong width");
    if (b[r] < 0) throw LpError("packing LP needs b >= 0");
  }
  const std::size_t width = n + m + 1;
  // Row r < m holds constraint r; row m holds the reduced costs.
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) t[r][j] = a[r][j];
    t[r][n + r] = 1.0;
    t[r][width - 1] = b[r];
    basis[r] = n + r;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = c[j];

  LpResult result;
  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (t[m][j] > pivot_tol) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    double best = 0;
    for (std::size_t r = 0; r < m; ++r) {
      if (t[r][enter] <= pivot_tol) continue;
      double ratio = t[r][width - 1] / t[r][enter];
      if (leave == m || ratio < best - pivot_tol ||
          (ratio <= best + pivot_tol && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == m) throw LpError("LP is unbounded");
    if (++result.iterations > max_iterations) {
      throw LpError("simplex did not converge after " +
                    std::to_string(result.iterations) + " iterations");
    }
    const double pivot = t[leave][enter];
    for (double& v : t[leave]) v /= pivot;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave || t[r][enter] == 0.0) continue;
      const double f = t[r][enter];
      for (std::size_t j = 0; j < width; ++j) t[r][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  result.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) result.x[basis[r]] = t[r][width - 1];
  }
  for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
  return result;
}

}  // namespace balprice

#endif  // BALPRICE_SIMPLEX_HPP_
