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

#include "ccfund/best_response.hpp"

#include <gtest/gtest.h>

#include "ccfund/error.hpp"
#include "ccfund/generators.hpp"
#include "ccfund/rng.hpp"
#include "oracles.hpp"

namespace ccfund {
namespace {

ResidualView two_project_view() {
  ResidualView v;
  v.remaining = {2, 1};
  v.others_totals = {0, 0};
  v.budget = 2;
  v.valuations = {3, 1.5};
  v.bonuses = {1, 1};
  v.schemes = {RefundScheme::linear_additive(0.1), RefundScheme::linear_additive(0.1)};
  return v;
}

TEST(BestResponseTest, TwoProjectExample) {
  const ResidualView v = two_project_view();
  for (const BestResponse& br :
       {best_response_exact(v, 1.0), best_response_bruteforce(v, 1.0)}) {
    EXPECT_EQ(br.contributions, (std::vector<double>{2, 0}));
    EXPECT_EQ(br.funded, (std::vector<bool>{true, false}));
    EXPECT_NEAR(br.utility, 1.0, 1e-12);
    EXPECT_TRUE(br.optimal);
  }
  // The alternatives: fund 2 plus refund 0.1 on project 1, or refunds only.
  EXPECT_NEAR(response_utility(v, {1, 1}), 0.6, 1e-12);
  EXPECT_NEAR(response_utility(v, {1, 0}), 0.1, 1e-12);
}

TEST(BestResponseTest, KnapsackOracleMatchesExample) {
  const ResidualView v = two_project_view();
  const BestResponse k = knapsack_form_oracle(v, 1.0);
  EXPECT_EQ(k.funded, (std::vector<bool>{true, false}));
  EXPECT_NEAR(k.utility, best_response_exact(v, 1.0).utility, 1e-12);
}

TEST(BestResponseTest, ZeroBudget) {
  ResidualView v = two_project_view();
  v.budget = 0;
  const BestResponse br = best_response_exact(v, 0.5);
  EXPECT_EQ(br.contributions, (std::vector<double>{0, 0}));
  EXPECT_EQ(br.utility, 0.0);
}

TEST(BestResponseTest, SingleProjectFundsWhenWorthIt) {
  ResidualView v;
  v.remaining = {3};
  v.others_totals = {2};
  v.budget = 5;
  v.valuations = {6};
  v.bonuses = {1};
  v.schemes = {RefundScheme::ppr()};
  const BestResponse br = best_response_exact(v, 0.5);
  EXPECT_TRUE(br.funded[0]);
  EXPECT_DOUBLE_EQ(br.contributions[0], 3.0);
  EXPECT_DOUBLE_EQ(br.utility, 3.0);
  // Staying just below: refund 2.5 / 4.5 < 3.
  EXPECT_LT(response_utility(v, {2.5}), br.utility);
}

TEST(BestResponseTest, KnapsackNothingWorthFunding) {
  ResidualView v;
  v.remaining = {2, 3};
  v.others_totals = {0, 0};
  v.budget = 1;
  v.valuations = {2.1, 3.2};
  v.bonuses = {1, 1};
  v.schemes = {RefundScheme::linear_additive(0.2), RefundScheme::linear_additive(0.2)};
  const BestResponse k = knapsack_form_oracle(v, 0.5);
  EXPECT_EQ(k.funded, (std::vector<bool>{false, false}));
  EXPECT_NEAR(k.utility, 0.2 * 1.0, 1e-12);
  EXPECT_NEAR(best_response_exact(v, 0.5).utility, k.utility, 1e-12);
}

TEST(BestResponseTest, KnapsackRespectsCapacity) {
  ResidualView v;
  v.remaining = {5};
  v.others_totals = {0};
  v.budget = 3;
  v.valuations = {100};
  v.bonuses = {1};
  v.schemes = {RefundScheme::linear_additive(0.1)};
  EXPECT_FALSE(knapsack_form_oracle(v, 1.0).funded[0]);
}

TEST(BestResponseTest, KnapsackRequiresSumAdditive) {
  ResidualView v = two_project_view();
  v.schemes = {RefundScheme::ppr(), RefundScheme::ppr()};
  EXPECT_THROW(knapsack_form_oracle(v, 1.0), InputError);
}

TEST(BestResponseTest, RejectsBadDelta) {
  EXPECT_THROW(best_response_exact(two_project_view(), 0.0), InputError);
  EXPECT_THROW(best_response_exact(two_project_view(), 1e-9), GuardExceeded);
}

TEST(BestResponseTest, OffGridResidualRoundsUp) {
  ResidualView v;
  v.remaining = {1.25};
  v.others_totals = {0};
  v.budget = 2;
  v.valuations = {5};
  v.bonuses = {0.5};
  v.schemes = {RefundScheme::linear_additive(0.1)};
  const BestResponse br = best_response_exact(v, 0.5);
  EXPECT_TRUE(br.funded[0]);
  EXPECT_DOUBLE_EQ(br.contributions[0], 1.5);
}

TEST(BestResponsePropertyTest, ExactMatchesBruteForce) {
  Rng rng(404);
  for (int k = 0; k < 150; ++k) {
    const double delta = k % 2 ? 0.25 : 0.1;
    const RefundScheme s = k % 3 ? RefundScheme::ppr()
                                 : RefundScheme::linear_additive(rng.uniform(0.05, 0.6));
    const ResidualView v = oracle::random_view(rng, s, delta, k % 4 != 0);
    const BestResponse a = best_response_exact(v, delta);
    const BestResponse b = best_response_bruteforce(v, delta);
    ASSERT_NEAR(a.utility, b.utility, 1e-9) << "view " << k;
    EXPECT_EQ(a.contributions, b.contributions) << "view " << k;
    double spent = 0.0;
    for (double x : a.contributions) spent += x;
    EXPECT_LE(spent, v.budget + 1e-9);
    EXPECT_NEAR(response_utility(v, a.contributions), a.utility, 1e-9);
    EXPECT_GE(a.utility, response_utility(v, std::vector<double>(v.p(), 0.0)) - 1e-12);
  }
}

TEST(BestResponsePropertyTest, ExactMatchesKnapsackOnAlignedLinear) {
  Rng rng(505);
  for (int k = 0; k < 150; ++k) {
    const double delta = 0.1;
    const ResidualView v = oracle::random_view(
        rng, RefundScheme::linear_additive(rng.uniform(0.05, 0.6)), delta, true);
    const BestResponse a = best_response_exact(v, delta);
    const BestResponse b = knapsack_form_oracle(v, delta);
    EXPECT_NEAR(a.utility, b.utility, 1e-9) << "view " << k;
    EXPECT_FALSE(b.leftover_unplaced);
  }
}

TEST(DiscontinuityTest, ExampleTwoPpr) {
  const Instance in = build_example2(RefundScheme::ppr(), 6.0, 10.0);
  EXPECT_DOUBLE_EQ(in.budget(0), 5.0);
  const DiscontinuityReport r = demonstrate_nonexistence(in, {0.1, 0.01, 0.001});
  ASSERT_EQ(r.deviation_utilities.size(), 3u);
  // 2 (5 - eps) / (10 - eps) + 4 by hand.
  EXPECT_NEAR(r.deviation_utilities[0], 4.98989898989899, 1e-12);
  EXPECT_NEAR(r.deviation_utilities[1], 4.998998998998999, 1e-12);
  EXPECT_NEAR(r.deviation_utilities[2], 4.999899989998999, 1e-12);
  EXPECT_DOUBLE_EQ(r.funded_utility, 1.0);
  EXPECT_NEAR(r.limit_utility, 5.0, 1e-12);
  EXPECT_NEAR(r.gap, 4.0, 1e-12);
  EXPECT_TRUE(r.demonstrated());
}

TEST(DiscontinuityTest, LinearSchemeHasNoJump) {
  // a (g2 - eps) + 2 a (eps / 2) = a g2 for every eps.
  const Instance in = build_example2(RefundScheme::linear_additive(0.2), 6.0, 10.0);
  const DiscontinuityReport r = demonstrate_nonexistence(in, {0.1, 0.01, 0.001});
  for (double u : r.deviation_utilities) EXPECT_NEAR(u, 0.2 * in.budget(1), 1e-12);
  EXPECT_FALSE(r.demonstrated());
}

TEST(DiscontinuityTest, FirstGridStepBeatsFunding) {
  const Instance in = build_example2(RefundScheme::ppr(), 6.0, 10.0);
  const double g2 = in.budget(1), b = in.bonus(0), theta = in.valuation(1, 0);
  const double delta = 0.01;
  // 2B + R(g2 - delta) against theta - g2.
  const double lhs = 2 * b + oracle::ppr_refund(g2 - delta, b, in.budget(0) + g2 - delta);
  EXPECT_GT(lhs, theta - g2);
  const DiscontinuityReport r = demonstrate_nonexistence(in, {delta});
  EXPECT_NEAR(r.deviation_utilities[0], lhs, 1e-12);
}

TEST(DiscontinuityTest, RejectsOtherFamilies) {
  const Instance in = build_example2(RefundScheme::ppr(), 6.0, 10.0);
  EXPECT_THROW(demonstrate_nonexistence(in, {0.01, 0.1}), InputError);
  EXPECT_THROW(demonstrate_nonexistence(in, {0.0}), InputError);
  EXPECT_THROW(demonstrate_nonexistence(in.with_budgets({5, 4}), {0.1}), InputError);
}

}  // namespace
}  // namespace ccfund
