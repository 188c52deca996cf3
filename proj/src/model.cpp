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

#include "ccfund/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ccfund/error.hpp"

namespace ccfund {
namespace {

std::string describe(const char* what, int index, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " [" << index << "] = " << value;
  return os.str();
}

}  // namespace

ProjectSet::ProjectSet(std::initializer_list<int> indices)
    : ProjectSet(std::vector<int>(indices)) {}

ProjectSet::ProjectSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw InputError("project set has duplicate indices");
  }
  if (!indices_.empty() && indices_.front() < 0) {
    throw InputError("project set has a negative index");
  }
}

bool ProjectSet::contains(int j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

void ProjectSet::check_range(int p) const {
  if (!indices_.empty() && indices_.back() >= p) {
    throw InputError(describe("project index out of range, p", indices_.back(), p));
  }
}

Instance::Instance(Matrix valuations, std::vector<double> budgets,
                   std::vector<double> targets, std::vector<double> bonuses,
                   RefundScheme refund,
                   std::vector<std::optional<RefundScheme>> overrides)
    : valuations_(std::move(valuations)),
      budgets_(std::move(budgets)),
      targets_(std::move(targets)),
      bonuses_(std::move(bonuses)),
      refund_(refund),
      overrides_(std::move(overrides)) {
  const std::size_t n = valuations_.rows();
  const std::size_t p = valuations_.cols();
  if (n == 0 || p == 0) throw InputError("instance needs at least one agent and project");
  if (budgets_.size() != n) throw InputError("budgets length differs from agent count");
  if (targets_.size() != p || bonuses_.size() != p) {
    throw InputError("targets/bonuses length differs from project count");
  }
  if (overrides_.empty()) overrides_.resize(p);
  if (overrides_.size() != p) throw InputError("refund overrides length differs from p");

  for (std::size_t i = 0; i < n; ++i) {
    if (!(budgets_[i] >= 0.0) || !std::isfinite(budgets_[i])) {
      throw InputError(describe("budget must be non-negative", i, budgets_[i]));
    }
    for (std::size_t j = 0; j < p; ++j) {
      const double v = valuations_(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InputError(describe("valuation must be non-negative, agent", i, v));
      }
    }
  }
  total_valuation_.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    if (!(targets_[j] > 0.0) || !std::isfinite(targets_[j])) {
      throw InputError(describe("target must be positive", j, targets_[j]));
    }
    if (!(bonuses_[j] > 0.0) || !std::isfinite(bonuses_[j])) {
      throw InputError(describe("bonus must be positive", j, bonuses_[j]));
    }
    total_valuation_[j] = valuations_.col_sum(j);
    if (!(total_valuation_[j] > targets_[j])) {
      throw InputError(describe("total valuation must exceed target, project", j,
                                total_valuation_[j]));
    }
    if (bonuses_[j] > total_valuation_[j] - targets_[j] + kTolerance) {
      throw InputError(describe("bonus exceeds V_j - T_j, project", j, bonuses_[j]));
    }
  }

  resolved_.reserve(p);
  for (std::size_t j = 0; j < p; ++j) {
    RefundScheme s = overrides_[j].value_or(refund_);
    if (s.kind == RefundKind::kLinearAdditive && !s.slope) {
      s.slope = default_linear_slope();
    }
    validate_scheme(s);
    resolved_.push_back(s);
  }
}

double Instance::total_budget() const {
  double s = 0.0;
  for (double g : budgets_) s += g;
  return s;
}

double Instance::total_target() const {
  double s = 0.0;
  for (double t : targets_) s += t;
  return s;
}

double Instance::default_linear_slope() const {
  double min_surplus = total_valuation_[0] - targets_[0];
  double max_total = total_valuation_[0];
  for (int j = 1; j < p(); ++j) {
    min_surplus = std::min(min_surplus, total_valuation_[j] - targets_[j]);
    max_total = std::max(max_total, total_valuation_[j]);
  }
  return min_surplus / max_total;
}

Instance Instance::with_refund(RefundScheme scheme) const {
  return Instance(valuations_, budgets_, targets_, bonuses_, scheme);
}

Instance Instance::with_budgets(std::vector<double> budgets) const {
  return Instance(valuations_, std::move(budgets), targets_, bonuses_, refund_,
                  overrides_);
}

bool Instance::operator==(const Instance& o) const {
  return valuations_ == o.valuations_ && budgets_ == o.budgets_ &&
         targets_ == o.targets_ && bonuses_ == o.bonuses_ && refund_ == o.refund_ &&
         overrides_ == o.overrides_;
}

ContributionProfile::ContributionProfile(Matrix contributions)
    : x_(std::move(contributions)) {
  for (double v : x_.data()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InputError("contributions must be non-negative and finite");
    }
  }
}

ProjectSet Outcome::funded_set() const {
  std::vector<int> idx;
  for (std::size_t j = 0; j < funded.size(); ++j) {
    if (funded[j]) idx.push_back(static_cast<int>(j));
  }
  return ProjectSet(std::move(idx));
}

void check_profile(const Instance& instance, const ContributionProfile& profile) {
  if (profile.n() != instance.n() || profile.p() != instance.p()) {
    std::ostringstream os;
    os << "profile is " << profile.n() << "x" << profile.p() << " but instance is "
       << instance.n() << "x" << instance.p();
    throw InputError(os.str());
  }
  for (int i = 0; i < instance.n(); ++i) {
    const double spent = profile.spent(i);
    if (spent > instance.budget(i) + kTolerance) {
      throw BudgetViolation(i, spent, instance.budget(i));
    }
  }
}

Outcome evaluate(const Instance& instance, const ContributionProfile& profile) {
  check_profile(instance, profile);
  const int n = instance.n();
  const int p = instance.p();
  Outcome out;
  out.funded.resize(p);
  out.totals.resize(p);
  out.agent_utilities.assign(n, 0.0);
  out.per_pair_utilities = Matrix(n, p);
  out.refunds = Matrix(n, p);
  for (int j = 0; j < p; ++j) {
    const double total = profile.total(j);
    out.totals[j] = total;
    const bool funded = total >= instance.target(j) - kTolerance;
    out.funded[j] = funded;
    if (funded) {
      out.social_welfare += instance.total_valuation(j) - instance.target(j);
    }
    const RefundScheme& scheme = instance.scheme_for(j);
    for (int i = 0; i < n; ++i) {
      const double x = profile(i, j);
      double sigma;
      if (funded) {
        sigma = instance.valuation(i, j) - x;
      } else {
        const double r = refund_share(scheme, x, instance.bonus(j), total);
        out.refunds(i, j) = r;
        sigma = r;
      }
      out.per_pair_utilities(i, j) = sigma;
      out.agent_utilities[i] += sigma;
    }
  }
  return out;
}

BudgetStatus check_budget_surplus(const Instance& instance) {
  return instance.total_budget() >= instance.total_target() ? BudgetStatus::kSurplus
                                                            : BudgetStatus::kDeficit;
}

bool check_subset_feasibility(const Instance& instance, const ProjectSet& subset,
                              const Matrix& thresholds) {
  subset.check_range(instance.p());
  if (static_cast<int>(thresholds.rows()) != instance.n() ||
      static_cast<int>(thresholds.cols()) != instance.p()) {
    throw InputError("threshold matrix dimensions differ from instance");
  }
  for (int i = 0; i < instance.n(); ++i) {
    double need = 0.0;
    for (int j : subset) need += thresholds(i, j);
    if (instance.budget(i) < need - kTolerance) return false;
  }
  return true;
}

}  // namespace ccfund
