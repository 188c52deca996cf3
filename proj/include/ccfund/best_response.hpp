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

#ifndef CCFUND_BEST_RESPONSE_HPP_
#define CCFUND_BEST_RESPONSE_HPP_

#include <vector>

#include "ccfund/model.hpp"

namespace ccfund {

// One agent's view of the game once everybody else has committed.
struct ResidualView {
  int agent = 0;
  std::vector<double> remaining;      // r_j = max(0, T_j - C_{-i,j})
  std::vector<double> others_totals;  // C_{-i,j}
  double budget = 0.0;
  std::vector<double> valuations;
  std::vector<double> bonuses;
  std::vector<RefundScheme> schemes;  // resolved, one per project

  int p() const { return static_cast<int>(remaining.size()); }
  void validate() const;

  // View of agent `agent` against the other rows of `profile` (the agent's
  // own row is ignored).
  static ResidualView from_profile(const Instance& instance,
                                   const ContributionProfile& profile,
                                   int agent);
};

struct BestResponse {
  std::vector<double> contributions;
  std::vector<bool> funded;
  double utility = 0.0;
  bool optimal = false;
  // Set by the knapsack-form oracle when the leftover budget could not be
  // fully placed below the unfunded projects' residuals.
  bool leftover_unplaced = false;
};

constexpr double kDefaultDelta = 0.01;
constexpr long long kMaxGridUnits = 1'000'000;
constexpr long long kMaxBruteForceProfiles = 10'000'000;

// Utility of playing `x` against the view, under Def.-2 semantics: project j
// is funded when x_j >= r_j - kTolerance.
double response_utility(const ResidualView& view, const std::vector<double>& x);

// Exact optimum of the grid-restricted best-response problem by a
// grouped-choice knapsack DP over budget units of size `delta`. Funding a
// project costs r_j rounded up to the grid; staying unfunded caps x_j at one
// unit below that. Ties: less total spend, then lexicographically smallest
// contribution vector.
BestResponse best_response_exact(const ResidualView& view,
                                 double delta = kDefaultDelta);

// Full enumeration of the same grid with the same tie-break.
BestResponse best_response_bruteforce(const ResidualView& view,
                                      double delta = kDefaultDelta);

// For sum-additive schemes only: 0/1 knapsack over items (cost r_j, value
// theta_j - r_j - R(r_j)), solved exactly on real costs, then the leftover
// budget is spread over unfunded projects in index order, each kept at least
// `delta` below its residual.
BestResponse knapsack_form_oracle(const ResidualView& view,
                                  double delta = kDefaultDelta);

struct DiscontinuityReport {
  std::vector<double> epsilons;
  // Agent 2 playing (g - eps, eps/2, eps/2).
  std::vector<double> deviation_utilities;
  // Agent 2 playing (g, 0, 0): funds project 1.
  double funded_utility = 0.0;
  // Limit of the deviation utility as eps -> 0+.
  double limit_utility = 0.0;
  double gap = 0.0;
  bool strictly_increasing = false;
  bool all_exceed_funded = false;
  bool supremum_not_attained = false;

  bool demonstrated() const {
    return strictly_increasing && all_exceed_funded && supremum_not_attained;
  }
};

// Agent 1 of a two-agent, three-identical-project instance puts its whole
// budget into project 1; reports agent 2's utility along the epsilons.
// Throws InputError if the instance is not of that family.
DiscontinuityReport demonstrate_nonexistence(const Instance& instance,
                                             const std::vector<double>& epsilons);

}  // namespace ccfund

#endif  // CCFUND_BEST_RESPONSE_HPP_
