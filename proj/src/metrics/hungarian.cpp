/* Copyright 2026 The Perceval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "perceval/metrics/hungarian.hpp"

#include <algorithm>
#include <limits>

namespace perceval::metrics {

namespace {

// Rows <= cols. Potentials u (rows) and v (cols); p[j] is the row matched to
// column j, 1-based with 0 as the virtual source.
Assignment solve_wide(std::size_t n, std::size_t m, auto&& a) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) out.emplace_back(p[j] - 1, j - 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Assignment hungarian(const CostMatrix& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  if (n == 0 || m == 0) return {};
  if (n <= m) {
    return solve_wide(n, m, [&](std::size_t r, std::size_t c) { return cost(r, c); });
  }
  Assignment t = solve_wide(m, n, [&](std::size_t r, std::size_t c) { return cost(c, r); });
  for (auto& [r, c] : t) std::swap(r, c);
  std::sort(t.begin(), t.end());
  return t;
}

double assignment_cost(const CostMatrix& cost, const Assignment& a) {
  double total = 0.0;
  for (const auto& [r, c] : a) total += cost(r, c);
  return total;
}

}  // namespace perceval::metrics
