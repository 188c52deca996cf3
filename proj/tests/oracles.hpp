// Copyright 2026 The ccfund Authors
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

// Naive reference computations used to cross-check the library. Written
// straight from the model definitions, sharing no code with src/.

#ifndef CCFUND_TESTS_ORACLES_HPP_
#define CCFUND_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "ccfund/best_response.hpp"
#include "ccfund/matrix.hpp"
#include "ccfund/model.hpp"
#include "ccfund/rng.hpp"

namespace ccfund::oracle {

inline double ppr_refund(double x, double bonus, double total) {
  return total > 0.0 ? x / total * bonus : 0.0;
}

inline double ppr_threshold(double theta, double target, double bonus) {
  return target * theta / (bonus + target);
}

// Per-agent utilities for a PPR instance, project by project.
inline std::vector<double> ppr_utilities(const Instance& in, const Matrix& x) {
  std::vector<double> u(in.n(), 0.0);
  for (int j = 0; j < in.p(); ++j) {
    double c = 0.0;
    for (int i = 0; i < in.n(); ++i) c += x(i, j);
    const bool funded = c >= in.target(j) - 1e-9;
    for (int i = 0; i < in.n(); ++i) {
      u[i] += funded ? in.valuation(i, j) - x(i, j)
                     : ppr_refund(x(i, j), in.bonus(j), c);
    }
  }
  return u;
}

struct Best {
  std::vector<int> subset;
  double welfare = 0.0;
};

// Bitmask enumeration with the documented tie-break.
inline Best pstar(const Instance& in) {
  const int p = in.p();
  Best best;
  bool have = false;
  for (unsigned mask = 0; mask < (1u << p); ++mask) {
    double cost = 0.0, w = 0.0;
    std::vector<int> s;
    for (int j = 0; j < p; ++j) {
      if (mask & (1u << j)) {
        cost += in.target(j);
        w += in.total_valuation(j) - in.target(j);
        s.push_back(j);
      }
    }
    if (cost > in.total_budget() + 1e-9) continue;
    bool better = !have || w > best.welfare + 1e-9;
    if (!better && std::abs(w - best.welfare) <= 1e-9) {
      better = s.size() < best.subset.size() ||
               (s.size() == best.subset.size() && s < best.subset);
    }
    if (better) {
      best = {s, w};
      have = true;
    }
  }
  return best;
}

// Random PPR instance with B_j = fraction * (V_j - T_j).
inline Instance random_instance(Rng& rng, int n, int p, double rho = 0.6,
                                double fraction = 1.0) {
  Matrix theta(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) theta(i, j) = rng.uniform(0.0, 10.0);
  std::vector<double> t(p), b(p);
  double total_t = 0.0;
  for (int j = 0; j < p; ++j) {
    const double v = theta.col_sum(j);
    t[j] = rng.uniform(0.2, 0.8) * v;
    b[j] = fraction * (v - t[j]);
    total_t += t[j];
  }
  std::vector<double> g(n);
  double gs = 0.0;
  for (double& x : g) gs += (x = rng.uniform(0.0, 1.0));
  for (double& x : g) x *= rho * total_t / gs;
  return Instance(theta, g, t, b);
}

// Targets and budgets rounded to multiples of `res`, bonuses kept in range.
inline Instance on_grid(const Instance& in, double res) {
  auto snap = [res](double v) { return std::round(v / res) * res; };
  std::vector<double> t(in.p()), b(in.p()), g(in.n());
  Matrix v = in.valuations();
  for (int j = 0; j < in.p(); ++j) {
    t[j] = std::max(res, snap(in.target(j)));
    // Tiny columns can round onto or past their valuation.
    if (v.col_sum(j) < t[j] + res) v(0, j) += t[j] + res - v.col_sum(j);
    b[j] = std::min(in.bonus(j), v.col_sum(j) - t[j]);
  }
  for (int i = 0; i < in.n(); ++i) g[i] = snap(in.budget(i));
  return Instance(v, g, t, b, in.refund());
}

// Small residual view: p <= 4, at most 30 grid units per residual. With
// `aligned` every r_j is a grid multiple; budgets leave room for one unit
// below each residual.
inline ResidualView random_view(Rng& rng, const RefundScheme& scheme, double delta,
                                bool aligned) {
  ResidualView v;
  const int p = 1 + static_cast<int>(rng.below(4));
  double sum_r = 0.0;
  for (int j = 0; j < p; ++j) {
    const int units = static_cast<int>(rng.below(31));
    double r = units * delta;
    if (!aligned && units > 0) r -= rng.uniform(0.05, 0.95) * delta;
    v.remaining.push_back(r);
    v.others_totals.push_back(rng.uniform(0.0, 1.0) < 0.3 ? 0.0 : rng.uniform(0.0, 4.0));
    v.valuations.push_back(rng.uniform(0.0, 1.6 * r + 0.5));
    v.bonuses.push_back(rng.uniform(0.1, 3.0));
    v.schemes.push_back(scheme);
    sum_r += r;
  }
  const double cap = std::max(0.0, sum_r - p * delta);
  v.budget = std::floor(rng.uniform(0.0, cap) / delta) * delta;
  return v;
}

}  // namespace ccfund::oracle

#endif  // CCFUND_TESTS_ORACLES_HPP_
