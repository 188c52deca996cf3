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

#include "ccfund/refunds.hpp"

#include <gtest/gtest.h>

#include "ccfund/error.hpp"
#include "ccfund/model.hpp"
#include "ccfund/rng.hpp"
#include "oracles.hpp"

namespace ccfund {
namespace {

TEST(RefundShareTest, PprSoleContributorTakesBonus) {
  EXPECT_DOUBLE_EQ(refund_share(RefundScheme::ppr(), 4.0, 2.0, 4.0), 2.0);
}

TEST(RefundShareTest, PprProportional) {
  EXPECT_DOUBLE_EQ(refund_share(RefundScheme::ppr(), 1.0, 2.0, 4.0), 0.5);
}

TEST(RefundShareTest, PprZeroTotalIsZero) {
  EXPECT_EQ(refund_share(RefundScheme::ppr(), 0.0, 2.0, 0.0), 0.0);
}

TEST(RefundShareTest, LinearAdditive) {
  EXPECT_NEAR(refund_share(RefundScheme::linear_additive(0.1), 7.0, 3.0, 9.0), 0.7, 1e-15);
}

TEST(RefundShareTest, RejectsContributionAboveTotal) {
  EXPECT_THROW(refund_share(RefundScheme::ppr(), 5.0, 1.0, 4.0), InputError);
}

TEST(RefundShareTest, LinearNeedsResolvedSlope) {
  EXPECT_THROW(refund_share(RefundScheme::linear_additive(), 1.0, 1.0, 2.0), InputError);
}

TEST(RefundKindTest, NamesRoundTrip) {
  for (RefundKind k : {RefundKind::kPpr, RefundKind::kLinearAdditive}) {
    EXPECT_EQ(parse_refund_kind(refund_kind_name(k)), k);
  }
  EXPECT_THROW(parse_refund_kind("quadratic"), InputError);
}

TEST(CertifyCmTest, PprPasses) {
  const CmReport r = certify_cm(RefundScheme::ppr(), GridSpec{});
  EXPECT_TRUE(r.passed) << r.message;
  EXPECT_EQ(r.violations, 0);
}

TEST(CertifyCmTest, LinearMinForwardDifference) {
  GridSpec g;
  const CmReport r = certify_cm(RefundScheme::linear_additive(0.1), g);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.min_forward_difference, 0.1 * g.x_max / g.points, 1e-12);
}

TEST(CertifyCmTest, ConstantSchemeFails) {
  const CmReport r = certify_cm([](double, double, double) { return 0.3; }, GridSpec{});
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.violations, 0);
  EXPECT_FALSE(r.message.empty());
}

TEST(ThresholdPprTest, SpotValues) {
  // x_bar11 = 9.91 and x_bar21 = 0.99 as printed (the first one rounded).
  EXPECT_NEAR(threshold_ppr(10.9, 10.0, 1.0), 9.91, 0.005);
  EXPECT_NEAR(threshold_ppr(10.9, 10.0, 1.0), 109.0 / 11.0, 1e-12);
  EXPECT_NEAR(threshold_ppr(1.089, 10.0, 1.0), 0.99, 1e-12);
  EXPECT_EQ(threshold_ppr(0.0, 10.0, 1.0), 0.0);
}

TEST(ThresholdGeneralTest, PprMatchesClosedForm) {
  EXPECT_NEAR(threshold_general(RefundScheme::ppr(), 10.9, 10.0, 1.0), 109.0 / 11.0, 1e-9);
}

TEST(ThresholdGeneralTest, LinearAlgebraic) {
  EXPECT_NEAR(threshold_general(RefundScheme::linear_additive(0.1), 11.0, 5.0, 1.0), 10.0,
              1e-9);
}

TEST(ThresholdGeneralTest, ZeroValuation) {
  EXPECT_EQ(threshold_general(RefundScheme::ppr(), 0.0, 10.0, 1.0), 0.0);
  EXPECT_EQ(threshold_general(RefundScheme::linear_additive(0.2), 0.0, 10.0, 1.0), 0.0);
}

TEST(ThresholdGeneralTest, OthersPlusOwnConvention) {
  // theta - x = x / (c + x) * B with c = 3, B = 2, theta = 4: x^2 + 1x - 12 = 0.
  const double x = threshold_general(RefundScheme::ppr(), 4.0, 10.0, 2.0, 3.0,
                                     ThresholdConvention::kOthersPlusOwn);
  EXPECT_NEAR(x, 3.0, 1e-9);
}

TEST(ThresholdGeneralTest, RandomAgreesWithClosedForm) {
  Rng rng(7);
  for (int k = 0; k < 2000; ++k) {
    const double theta = rng.uniform(0.0, 20.0);
    const double t = rng.uniform(0.1, 50.0);
    const double b = rng.uniform(0.01, 30.0);
    EXPECT_NEAR(threshold_general(RefundScheme::ppr(), theta, t, b),
                oracle::ppr_threshold(theta, t, b), 1e-9);
  }
}

TEST(ValuationForThresholdTest, InvertsThreshold) {
  for (const RefundScheme& s : {RefundScheme::ppr(), RefundScheme::linear_additive(0.3)}) {
    const double theta = valuation_for_threshold(s, 2.5, 10.0, 4.0);
    EXPECT_NEAR(threshold_general(s, theta, 10.0, 4.0), 2.5, 1e-8);
  }
  // PPR closed form: theta = x (B + T) / T.
  EXPECT_NEAR(valuation_for_threshold(RefundScheme::ppr(), 2.5, 10.0, 4.0), 3.5, 1e-8);
}

TEST(ThresholdsTest, EqTwoIdentity) {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Instance in = oracle::random_instance(rng, 1 + rng.below(60), 1 + rng.below(8));
    const Matrix xb = thresholds(in);
    for (int j = 0; j < in.p(); ++j) {
      double s = 0.0;
      for (int i = 0; i < in.n(); ++i) s += xb(i, j);
      EXPECT_NEAR(s, in.target(j), 1e-6 * in.target(j));
    }
  }
}

TEST(ThresholdsTest, ZeroRowGivesZeroThresholds) {
  Matrix theta(2, 2);
  theta(0, 0) = 4.0;
  theta(0, 1) = 6.0;
  const Instance in(theta, {1.0, 1.0}, {2.0, 3.0}, {1.0, 1.0});
  const Matrix xb = thresholds(in);
  EXPECT_EQ(xb(1, 0), 0.0);
  EXPECT_EQ(xb(1, 1), 0.0);
  EXPECT_NEAR(xb(0, 0), oracle::ppr_threshold(4.0, 2.0, 1.0), 1e-12);
}

TEST(ThresholdsTest, PprBaselineIgnoresScheme) {
  Rng rng(3);
  const Instance in =
      oracle::random_instance(rng, 5, 3).with_refund(RefundScheme::linear_additive(0.05));
  const Matrix xb = ppr_thresholds(in);
  for (int i = 0; i < in.n(); ++i)
    for (int j = 0; j < in.p(); ++j)
      EXPECT_NEAR(xb(i, j),
                  oracle::ppr_threshold(in.valuation(i, j), in.target(j), in.bonus(j)), 1e-12);
}

}  // namespace
}  // namespace ccfund
