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

#include <gtest/gtest.h>

#include "ccfund/error.hpp"
#include "ccfund/refunds.hpp"
#include "ccfund/rng.hpp"
#include "oracles.hpp"

namespace ccfund {
namespace {

Instance single(double theta, double target, double bonus, double budget = 10.0) {
  Matrix v(1, 1, theta);
  return Instance(v, {budget}, {target}, {bonus});
}

ContributionProfile row(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t cols = rows.begin()->size();
  Matrix m(rows.size(), cols);
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return ContributionProfile(m);
}

TEST(EvaluateTest, ExactFunding) {
  const Outcome o = evaluate(single(10, 5, 1), row({{5}}));
  EXPECT_TRUE(o.funded[0]);
  EXPECT_DOUBLE_EQ(o.agent_utilities[0], 5.0);
  EXPECT_DOUBLE_EQ(o.social_welfare, 5.0);
}

TEST(EvaluateTest, SoleContributorTakesBonus) {
  const Outcome o = evaluate(single(10, 5, 1), row({{2}}));
  EXPECT_FALSE(o.funded[0]);
  EXPECT_DOUBLE_EQ(o.agent_utilities[0], 1.0);
  EXPECT_DOUBLE_EQ(o.social_welfare, 0.0);
}

TEST(EvaluateTest, RefundsSplitProportionally) {
  Matrix v(2, 1);
  v(0, 0) = 4;
  v(1, 0) = 4;
  const Instance in(v, {5, 5}, {5}, {1});
  const Outcome o = evaluate(in, row({{3}, {1}}));
  EXPECT_FALSE(o.funded[0]);
  EXPECT_DOUBLE_EQ(o.refunds(0, 0), 0.75);
  EXPECT_DOUBLE_EQ(o.refunds(1, 0), 0.25);
  EXPECT_DOUBLE_EQ(o.refunds(0, 0) + o.refunds(1, 0), 1.0);
}

TEST(EvaluateTest, WithinToleranceCountsAsFunded) {
  EXPECT_TRUE(evaluate(single(10, 5, 1), row({{5 - 5e-10}})).funded[0]);
  EXPECT_FALSE(evaluate(single(10, 5, 1), row({{5 - 1e-6}})).funded[0]);
}

TEST(EvaluateTest, ZeroTotalGivesNoRefund) {
  const Outcome o = evaluate(single(10, 5, 1), row({{0}}));
  EXPECT_EQ(o.refunds(0, 0), 0.0);
  EXPECT_EQ(o.agent_utilities[0], 0.0);
}

TEST(EvaluateTest, BudgetViolation) {
  try {
    evaluate(single(10, 5, 1, 3.0), row({{4}}));
    FAIL() << "expected BudgetViolation";
  } catch (const BudgetViolation& e) {
    EXPECT_EQ(e.agent(), 0);
    EXPECT_DOUBLE_EQ(e.spent(), 4.0);
    EXPECT_DOUBLE_EQ(e.budget(), 3.0);
  }
}

TEST(EvaluateTest, DimensionMismatch) {
  EXPECT_THROW(evaluate(single(10, 5, 1), row({{1, 1}})), InputError);
}

TEST(InstanceTest, RejectsInvalidInput) {
  Matrix v(1, 1, 10.0);
  EXPECT_THROW(Instance(v, {-1}, {5}, {1}), InputError);
  EXPECT_THROW(Instance(v, {1}, {0}, {1}), InputError);
  EXPECT_THROW(Instance(v, {1}, {5}, {0}), InputError);
  EXPECT_THROW(Instance(v, {1}, {5}, {5.5}), InputError);
  EXPECT_THROW(Instance(v, {1}, {10}, {0.1}), InputError);
  EXPECT_THROW(Instance(v, {1, 2}, {5}, {1}), InputError);
  Matrix neg(1, 1, -1.0);
  EXPECT_THROW(Instance(neg, {1}, {5}, {1}), InputError);
  EXPECT_THROW(Instance(v, {1}, {5}, {1}, RefundScheme::linear_additive(-0.1)), InputError);
}

TEST(InstanceTest, DefaultLinearSlope) {
  Matrix v(2, 2);
  v(0, 0) = 6;
  v(1, 0) = 4;
  v(0, 1) = 3;
  v(1, 1) = 1;
  const Instance in(v, {1, 1}, {4, 2}, {1, 1}, RefundScheme::linear_additive());
  // min(10 - 4, 4 - 2) / max(10, 4)
  EXPECT_DOUBLE_EQ(in.default_linear_slope(), 0.2);
  EXPECT_DOUBLE_EQ(*in.scheme_for(1).slope, 0.2);
}

TEST(InstanceTest, PerProjectOverride) {
  Matrix v(1, 2, 10.0);
  const Instance in(v, {2}, {5, 5}, {1, 1}, RefundScheme::ppr(),
                    {std::nullopt, RefundScheme::linear_additive(0.5)});
  EXPECT_EQ(in.scheme_for(0).kind, RefundKind::kPpr);
  EXPECT_EQ(in.scheme_for(1).kind, RefundKind::kLinearAdditive);
  const Outcome o = evaluate(in, row({{1, 1}}));
  EXPECT_DOUBLE_EQ(o.refunds(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(o.refunds(0, 1), 0.5);
}

TEST(ContributionProfileTest, RejectsNegativeAndNonFinite) {
  EXPECT_THROW(ContributionProfile(Matrix(1, 1, -0.5)), InputError);
  EXPECT_THROW(ContributionProfile(Matrix(1, 1, std::nan(""))), InputError);
}

TEST(ProjectSetTest, SortedAndValidated) {
  const ProjectSet s(std::vector<int>{3, 1});
  EXPECT_EQ(s.indices(), (std::vector<int>{1, 3}));
  EXPECT_THROW(ProjectSet(std::vector<int>{1, 1}), InputError);
  EXPECT_THROW(ProjectSet(std::vector<int>{-1}), InputError);
  EXPECT_THROW(s.check_range(3), InputError);
}

TEST(BudgetSurplusTest, Examples) {
  Matrix v(2, 2, 10.0);
  EXPECT_EQ(check_budget_surplus(Instance(v, {10, 10}, {5, 5}, {1, 1})), BudgetStatus::kSurplus);
  Matrix w(2, 2, 1.0);
  EXPECT_EQ(check_budget_surplus(Instance(w, {1, 0}, {1, 0.99}, {0.5, 0.5})),
            BudgetStatus::kDeficit);
  Matrix a(2, 2, 0.0);
  a(0, 0) = 10.9;
  a(1, 0) = 1.089;
  a(1, 1) = 1.9;
  EXPECT_EQ(check_budget_surplus(Instance(a, {9.91, 0.99}, {10, 0.99}, {1, 0.91})),
            BudgetStatus::kDeficit);
}

TEST(SubsetFeasibilityTest, Examples) {
  Matrix v(2, 1);
  v(0, 0) = 10.9;
  v(1, 0) = 0.1;
  const double xb1 = oracle::ppr_threshold(10.9, 10, 1);
  const double xb2 = oracle::ppr_threshold(0.1, 10, 1);
  const Instance in(v, {xb1, xb2}, {10}, {1});
  EXPECT_TRUE(check_subset_feasibility(in, {}, thresholds(in)));
  EXPECT_TRUE(check_subset_feasibility(in, {0}, thresholds(in)));
  const Instance poor = in.with_budgets({xb1 - 0.01, xb2});
  EXPECT_FALSE(check_subset_feasibility(poor, {0}, thresholds(poor)));
}

// Random profiles: PPR refund conservation, welfare identity and the oracle
// utilities.
TEST(EvaluatePropertyTest, ConservationAndWelfareIdentity) {
  Rng rng(2024);
  for (int k = 0; k < 300; ++k) {
    const Instance in = oracle::random_instance(rng, 1 + rng.below(6), 1 + rng.below(5), 1.5);
    Matrix x(in.n(), in.p());
    for (int i = 0; i < in.n(); ++i) {
      double left = in.budget(i);
      for (int j = 0; j < in.p(); ++j) {
        x(i, j) = rng.uniform(0.0, left);
        left -= x(i, j);
      }
    }
    const Outcome o = evaluate(in, ContributionProfile(x));
    const auto expect = oracle::ppr_utilities(in, x);
    double funded_welfare = 0.0, cross = 0.0;
    for (int j = 0; j < in.p(); ++j) {
      double r = 0.0, c = 0.0;
      for (int i = 0; i < in.n(); ++i) {
        r += o.refunds(i, j);
        c += x(i, j);
      }
      if (!o.funded[j] && c > 0.0) {
        EXPECT_NEAR(r, in.bonus(j), 1e-9);
      }
      if (o.funded[j]) {
        funded_welfare += in.total_valuation(j) - in.target(j);
        double u = 0.0;
        for (int i = 0; i < in.n(); ++i) u += o.per_pair_utilities(i, j);
        cross += u + (c - in.target(j));
      }
    }
    EXPECT_NEAR(o.social_welfare, funded_welfare, 1e-9);
    EXPECT_NEAR(o.social_welfare, cross, 1e-9);
    for (int i = 0; i < in.n(); ++i) EXPECT_NEAR(o.agent_utilities[i], expect[i], 1e-9);
  }
}

TEST(EvaluatePropertyTest, FundingMonotoneInContribution) {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const Instance in = oracle::random_instance(rng, 3, 3, 3.0);
    Matrix x(3, 3);
    for (int j = 0; j < 3; ++j) x(0, j) = in.target(j) * rng.uniform(0.0, 1.2) / 3.0;
    const Outcome before = evaluate(in.with_budgets({1e9, 1e9, 1e9}), ContributionProfile(x));
    const int j = rng.below(3);
    x(1, j) += rng.uniform(0.0, 5.0);
    const Outcome after = evaluate(in.with_budgets({1e9, 1e9, 1e9}), ContributionProfile(x));
    for (int q = 0; q < 3; ++q) {
      if (before.funded[q]) {
        EXPECT_TRUE(after.funded[q]);
      }
    }
  }
}

// When thresholds cover every target, SF over all projects forces Budget
// Surplus.
TEST(ClaimOneTest, FullFeasibilityImpliesSurplus) {
  Rng rng(99);
  int antecedent = 0;
  for (int k = 0; k < 2000; ++k) {
    Instance in = oracle::random_instance(rng, 1 + rng.below(5), 1 + rng.below(4), 1.0,
                                          rng.uniform(0.3, 1.0));
    const Matrix xb = thresholds(in);
    bool covers = true;
    for (int j = 0; j < in.p(); ++j) covers &= xb.col_sum(j) >= in.target(j) - 1e-9;
    if (!covers) continue;
    std::vector<double> g(in.n());
    for (int i = 0; i < in.n(); ++i) g[i] = xb.row_sum(i) * rng.uniform(0.9, 1.2);
    in = in.with_budgets(g);
    std::vector<int> all(in.p());
    for (int j = 0; j < in.p(); ++j) all[j] = j;
    if (!check_subset_feasibility(in, ProjectSet(all), xb)) continue;
    ++antecedent;
    EXPECT_EQ(check_budget_surplus(in), BudgetStatus::kSurplus);
  }
  EXPECT_GT(antecedent, 100);
}

}  // namespace
}  // namespace ccfund
