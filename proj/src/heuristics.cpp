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

#include "ccfund/heuristics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ccfund/error.hpp"
#include "ccfund/rng.hpp"

namespace ccfund {
namespace {

// Walks `order`, paying each project its threshold until the budget runs out;
// the project where it runs out gets the partial remainder.
std::vector<double> greedy_fill(const std::vector<int>& order, int agent,
                                double budget, const Matrix& thresholds) {
  std::vector<double> x(thresholds.cols(), 0.0);
  double left = budget;
  for (int j : order) {
    if (left <= 0.0) break;
    const double give = std::min(thresholds(agent, j), left);
    x[j] = give;
    left -= give;
  }
  return x;
}

void check_thresholds(const Instance& instance, const Matrix& thresholds) {
  if (static_cast<int>(thresholds.rows()) != instance.n() ||
      static_cast<int>(thresholds.cols()) != instance.p()) {
    throw InputError("heuristic needs a threshold matrix matching the instance");
  }
}

}  // namespace

std::string_view heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::kSymmetric:
      return "symmetric";
    case Heuristic::kWeighted:
      return "weighted";
    case Heuristic::kGreedyTheta:
      return "greedy-theta";
    case Heuristic::kGreedyVartheta:
      return "greedy-vartheta";
    case Heuristic::kOptWelfare:
      return "opt-welfare";
  }
  return "?";
}

Heuristic parse_heuristic(std::string_view name) {
  for (Heuristic h : {Heuristic::kSymmetric, Heuristic::kWeighted,
                      Heuristic::kGreedyTheta, Heuristic::kGreedyVartheta,
                      Heuristic::kOptWelfare}) {
    if (heuristic_name(h) == name) return h;
  }
  throw InputError("unknown heuristic '" + std::string(name) + "'");
}

std::vector<bool> Assignment::deviator_mask() const {
  std::vector<bool> mask(heuristics.size());
  for (std::size_t i = 0; i < heuristics.size(); ++i) mask[i] = is_deviator(i);
  return mask;
}

std::vector<double> intent(Heuristic h, const Instance& instance, int agent,
                           const ProjectSet& pstar, const Matrix& thresholds) {
  if (agent < 0 || agent >= instance.n()) throw InputError("agent index out of range");
  const int p = instance.p();
  const double budget = instance.budget(agent);
  std::vector<double> x(p, 0.0);
  switch (h) {
    case Heuristic::kSymmetric: {
      const double share = budget / p;
      for (int j = 0; j < p; ++j) x[j] = std::min(instance.valuation(agent, j), share);
      return x;
    }
    case Heuristic::kWeighted: {
      double total = 0.0;
      for (int j = 0; j < p; ++j) total += instance.valuation(agent, j);
      if (total <= 0.0) return x;
      for (int j = 0; j < p; ++j) {
        x[j] = instance.valuation(agent, j) / total * budget;
      }
      return x;
    }
    case Heuristic::kGreedyTheta: {
      check_thresholds(instance, thresholds);
      std::vector<int> order(p);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return instance.valuation(agent, a) > instance.valuation(agent, b);
      });
      return greedy_fill(order, agent, budget, thresholds);
    }
    case Heuristic::kGreedyVartheta: {
      check_thresholds(instance, thresholds);
      std::vector<int> order(p);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return instance.total_valuation(a) / instance.target(a) >
               instance.total_valuation(b) / instance.target(b);
      });
      return greedy_fill(order, agent, budget, thresholds);
    }
    case Heuristic::kOptWelfare: {
      check_thresholds(instance, thresholds);
      pstar.check_range(p);
      x = greedy_fill(pstar.indices(), agent, budget, thresholds);
      double left = budget;
      for (double v : x) left -= v;
      const int rest = p - static_cast<int>(pstar.size());
      if (rest > 0 && left > 0.0) {
        const double share = left / rest;
        for (int j = 0; j < p; ++j) {
          if (!pstar.contains(j)) x[j] = share;
        }
      }
      return x;
    }
  }
  return x;
}

ContributionProfile play(const Instance& instance, const Assignment& assignment,
                         const ProjectSet& pstar, const Matrix& thresholds,
                         const PlayOrder& order) {
  const int n = instance.n();
  const int p = instance.p();
  if (static_cast<int>(assignment.heuristics.size()) != n) {
    throw InputError("assignment length differs from agent count");
  }
  std::vector<std::vector<double>> intents(n);
  for (int i = 0; i < n; ++i) {
    intents[i] = intent(assignment.heuristics[i], instance, i, pstar, thresholds);
  }
  std::vector<int> agents(n);
  std::iota(agents.begin(), agents.end(), 0);
  if (order.mode == PlayOrder::Mode::kRandom) {
    Rng rng(order.seed);
    for (int k = n - 1; k > 0; --k) {
      std::swap(agents[k], agents[rng.below(k + 1)]);
    }
  }
  Matrix x(n, p);
  for (int j = 0; j < p; ++j) {
    double total = 0.0;
    for (int i : agents) {
      const double need = std::max(0.0, instance.target(j) - total);
      const double give = std::min(intents[i][j], need);
      x(i, j) = give;
      total += give;
    }
  }
  return ContributionProfile(std::move(x));
}

}  // namespace ccfund
