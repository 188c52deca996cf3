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

#ifndef CCFUND_MODEL_HPP_
#define CCFUND_MODEL_HPP_

#include <initializer_list>
#include <optional>
#include <vector>

#include "ccfund/matrix.hpp"
#include "ccfund/refunds.hpp"

namespace ccfund {

// Absolute tolerance for funding and budget comparisons.
constexpr double kTolerance = 1e-9;

// Sorted set of distinct project indices (0-based).
class ProjectSet {
 public:
  ProjectSet() = default;
  ProjectSet(std::initializer_list<int> indices);
  explicit ProjectSet(std::vector<int> indices);

  const std::vector<int>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(int j) const;
  // Throws InputError when an index falls outside [0, p).
  void check_range(int p) const;

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool operator==(const ProjectSet&) const = default;
  // Lexicographic on the sorted index list.
  bool operator<(const ProjectSet& o) const { return indices_ < o.indices_; }

 private:
  std::vector<int> indices_;
};

// A combinatorial crowdfunding game: agents with budgets and additive
// valuations, projects with targets and refund bonuses.
class Instance {
 public:
  // Validates every invariant and throws InputError on the first violation:
  // non-negative valuations and budgets, positive targets and bonuses,
  // total valuation strictly above target, bonus at most V_j - T_j.
  Instance(Matrix valuations, std::vector<double> budgets,
           std::vector<double> targets, std::vector<double> bonuses,
           RefundScheme refund = RefundScheme::ppr(),
           std::vector<std::optional<RefundScheme>> overrides = {});

  int n() const { return static_cast<int>(valuations_.rows()); }
  int p() const { return static_cast<int>(valuations_.cols()); }

  const Matrix& valuations() const { return valuations_; }
  double valuation(int i, int j) const { return valuations_(i, j); }
  const std::vector<double>& budgets() const { return budgets_; }
  double budget(int i) const { return budgets_[i]; }
  const std::vector<double>& targets() const { return targets_; }
  double target(int j) const { return targets_[j]; }
  const std::vector<double>& bonuses() const { return bonuses_; }
  double bonus(int j) const { return bonuses_[j]; }
  // V_j, the sum of valuations for project j.
  double total_valuation(int j) const { return total_valuation_[j]; }
  const std::vector<double>& total_valuations() const { return total_valuation_; }

  double total_budget() const;
  double total_target() const;

  // Scheme as declared (slope may be unset).
  const RefundScheme& refund() const { return refund_; }
  const std::vector<std::optional<RefundScheme>>& overrides() const {
    return overrides_;
  }
  // Scheme governing project j with the linear slope resolved.
  const RefundScheme& scheme_for(int j) const { return resolved_[j]; }
  // min_j (V_j - T_j) / max_j V_j.
  double default_linear_slope() const;

  // Copy with a different default scheme (overrides dropped).
  Instance with_refund(RefundScheme scheme) const;
  Instance with_budgets(std::vector<double> budgets) const;

  bool operator==(const Instance& o) const;

 private:
  Matrix valuations_;
  std::vector<double> budgets_;
  std::vector<double> targets_;
  std::vector<double> bonuses_;
  RefundScheme refund_;
  std::vector<std::optional<RefundScheme>> overrides_;
  std::vector<double> total_valuation_;
  std::vector<RefundScheme> resolved_;
};

// x_ij for every agent and project.
class ContributionProfile {
 public:
  ContributionProfile() = default;
  explicit ContributionProfile(Matrix contributions);
  static ContributionProfile zeros(int n, int p) {
    return ContributionProfile(Matrix(n, p));
  }

  const Matrix& contributions() const { return x_; }
  double operator()(int i, int j) const { return x_(i, j); }
  int n() const { return static_cast<int>(x_.rows()); }
  int p() const { return static_cast<int>(x_.cols()); }
  double total(int j) const { return x_.col_sum(j); }
  double spent(int i) const { return x_.row_sum(i); }

  bool operator==(const ContributionProfile&) const = default;

 private:
  Matrix x_;
};

struct Outcome {
  std::vector<bool> funded;
  std::vector<double> totals;
  std::vector<double> agent_utilities;
  Matrix per_pair_utilities;
  Matrix refunds;
  double social_welfare = 0.0;

  ProjectSet funded_set() const;
};

// Throws InputError on dimension mismatch, BudgetViolation when a row spends
// more than the agent's budget (beyond kTolerance).
void check_profile(const Instance& instance, const ContributionProfile& profile);

// Funding, per-pair utilities, refunds and welfare of a profile. A project is
// funded when C_j >= T_j - kTolerance.
Outcome evaluate(const Instance& instance, const ContributionProfile& profile);

enum class BudgetStatus { kSurplus, kDeficit };

BudgetStatus check_budget_surplus(const Instance& instance);

// Every agent can afford its thresholds summed over `subset`.
bool check_subset_feasibility(const Instance& instance, const ProjectSet& subset,
                              const Matrix& thresholds);

}  // namespace ccfund

#endif  // CCFUND_MODEL_HPP_
