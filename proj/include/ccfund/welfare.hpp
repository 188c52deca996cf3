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

#ifndef CCFUND_WELFARE_HPP_
#define CCFUND_WELFARE_HPP_

#include "ccfund/model.hpp"

namespace ccfund {

// What a subset of projects is worth.
enum class WelfareObjective {
  kWelfare,    // sum of (V_j - T_j)
  kValuation,  // sum of V_j
};

struct WelfareSolution {
  ProjectSet subset;
  double welfare = 0.0;  // under the requested objective
  double cost = 0.0;     // sum of T_j over the subset
  bool unique = true;    // no other subset reaches the same welfare
};

constexpr int kMaxBruteForceProjects = 25;
constexpr double kDefaultResolution = 0.01;
// Upper bound on DP table cells (projects x capacity units).
constexpr long long kMaxDpCells = 200'000'000;

double welfare_of(const Instance& instance, const ProjectSet& subset,
                  WelfareObjective objective = WelfareObjective::kWelfare);

// Budget-feasible subset maximizing welfare. Ties: higher welfare (within
// kTolerance), then fewer projects, then the lexicographically smallest
// index list.
WelfareSolution solve_pstar_bruteforce(
    const Instance& instance,
    WelfareObjective objective = WelfareObjective::kWelfare);

// Same problem as a 0/1 knapsack over quantized costs: targets are rounded
// up to `resolution`, total budget rounded down, so a DP-feasible subset is
// always truly feasible.
WelfareSolution solve_pstar_dp(
    const Instance& instance, double resolution = kDefaultResolution,
    WelfareObjective objective = WelfareObjective::kWelfare);

// Brute force when p is small enough, DP otherwise.
WelfareSolution solve_pstar(const Instance& instance,
                            double resolution = kDefaultResolution,
                            WelfareObjective objective = WelfareObjective::kWelfare);

}  // namespace ccfund

#endif  // CCFUND_WELFARE_HPP_
