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

#include "ccfund/welfare.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "ccfund/error.hpp"

namespace ccfund {
namespace {

double project_value(const Instance& instance, int j, WelfareObjective objective) {
  return objective == WelfareObjective::kWelfare
             ? instance.total_valuation(j) - instance.target(j)
             : instance.total_valuation(j);
}

// Values within this many grid units of an integer snap to it before the
// conservative rounding, so costs printed on the grid stay on the grid.
constexpr double kSnapUnits = 1e-6;

long long units_up(double v, double resolution) {
  return static_cast<long long>(std::ceil(v / resolution - kSnapUnits));
}

long long units_down(double v, double resolution) {
  return static_cast<long long>(std::floor(v / resolution + kSnapUnits));
}

double cost_of(const Instance& instance, const ProjectSet& subset) {
  double c = 0.0;
  for (int j : subset) c += instance.target(j);
  return c;
}

ProjectSet from_mask(std::uint32_t mask, int p) {
  std::vector<int> idx;
  for (int j = 0; j < p; ++j) {
    if (mask & (1u << j)) idx.push_back(j);
  }
  return ProjectSet(std::move(idx));
}

struct Cell {
  double welfare = 0.0;
  int count = 0;  // fewest projects reaching `welfare`
  int ways = 1;   // subsets reaching `welfare`, capped at 2
};

Cell merge(const Cell& a, const Cell& b) {
  if (a.welfare > b.welfare + kTolerance) return a;
  if (b.welfare > a.welfare + kTolerance) return b;
  Cell out = a.count <= b.count ? a : b;
  out.ways = std::min(2, a.ways + b.ways);
  return out;
}

}  // namespace

double welfare_of(const Instance& instance, const ProjectSet& subset,
                  WelfareObjective objective) {
  subset.check_range(instance.p());
  double w = 0.0;
  for (int j : subset) w += project_value(instance, j, objective);
  return w;
}

WelfareSolution solve_pstar_bruteforce(const Instance& instance,
                                       WelfareObjective objective) {
  const int p = instance.p();
  if (p > kMaxBruteForceProjects) {
    std::ostringstream os;
    os << "brute-force P* limited to " << kMaxBruteForceProjects << " projects, got "
       << p;
    throw GuardExceeded(os.str());
  }
  const double budget = instance.total_budget();
  std::vector<double> value(p);
  for (int j = 0; j < p; ++j) value[j] = project_value(instance, j, objective);

  const std::uint32_t end = 1u << p;
  std::vector<double> welfare(end, 0.0);
  std::vector<char> feasible(end, 0);
  std::uint32_t best = 0;
  double best_w = 0.0;
  int best_count = 0;
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    double w = 0.0;
    double cost = 0.0;
    int count = 0;
    for (int j = 0; j < p; ++j) {
      if (mask & (1u << j)) {
        w += value[j];
        cost += instance.target(j);
        ++count;
      }
    }
    if (cost > budget + kTolerance) continue;
    feasible[mask] = 1;
    welfare[mask] = w;
    bool better = false;
    if (w > best_w + kTolerance) {
      better = true;
    } else if (w >= best_w - kTolerance) {
      if (count < best_count) {
        better = true;
      } else if (count == best_count &&
                 from_mask(mask, p) < from_mask(best, p)) {
        better = true;
      }
    }
    if (better) {
      best = mask;
      best_w = w;
      best_count = count;
    }
  }
  int ties = 0;
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    if (feasible[mask] && std::abs(welfare[mask] - best_w) <= kTolerance) ++ties;
  }
  WelfareSolution sol;
  sol.subset = from_mask(best, p);
  sol.welfare = welfare_of(instance, sol.subset, objective);
  sol.cost = cost_of(instance, sol.subset);
  sol.unique = ties == 1;
  return sol;
}

WelfareSolution solve_pstar_dp(const Instance& instance, double resolution,
                               WelfareObjective objective) {
  if (!(resolution > 0.0)) throw InputError("resolution must be positive");
  const int p = instance.p();
  const long long capacity = std::max(0LL, units_down(instance.total_budget(), resolution));
  const long long cells = static_cast<long long>(p + 1) * (capacity + 1);
  if (cells > kMaxDpCells) {
    std::ostringstream os;
    os << "welfare DP needs " << cells << " cells (capacity " << capacity
       << " units at resolution " << resolution << "), limit " << kMaxDpCells;
    throw GuardExceeded(os.str());
  }
  std::vector<long long> cost(p);
  std::vector<double> value(p);
  for (int j = 0; j < p; ++j) {
    cost[j] = units_up(instance.target(j), resolution);
    value[j] = project_value(instance, j, objective);
  }

  // best[j][c]: optimum over projects j..p-1 with c units of budget.
  const std::size_t width = capacity + 1;
  std::vector<Cell> best(static_cast<std::size_t>(p + 1) * width);
  auto at = [&](int j, long long c) -> Cell& { return best[j * width + c]; };
  for (int j = p - 1; j >= 0; --j) {
    for (long long c = 0; c <= capacity; ++c) {
      Cell skip = at(j + 1, c);
      if (cost[j] <= c) {
        Cell take = at(j + 1, c - cost[j]);
        take.welfare += value[j];
        take.count += 1;
        at(j, c) = merge(take, skip);
      } else {
        at(j, c) = skip;
      }
    }
  }

  std::vector<int> chosen;
  long long c = capacity;
  for (int j = 0; j < p; ++j) {
    const Cell& target = at(j, c);
    if (cost[j] <= c) {
      const Cell& rest = at(j + 1, c - cost[j]);
      if (std::abs(rest.welfare + value[j] - target.welfare) <= kTolerance &&
          rest.count + 1 == target.count) {
        chosen.push_back(j);
        c -= cost[j];
      }
    }
  }
  WelfareSolution sol;
  sol.subset = ProjectSet(std::move(chosen));
  sol.welfare = welfare_of(instance, sol.subset, objective);
  sol.cost = cost_of(instance, sol.subset);
  sol.unique = at(0, capacity).ways == 1;
  return sol;
}

WelfareSolution solve_pstar(const Instance& instance, double resolution,
                            WelfareObjective objective) {
  if (instance.p() <= 20) return solve_pstar_bruteforce(instance, objective);
  return solve_pstar_dp(instance, resolution, objective);
}

}  // namespace ccfund
