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

#ifndef CCFUND_REFUNDS_HPP_
#define CCFUND_REFUNDS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccfund/matrix.hpp"

namespace ccfund {

class Instance;

enum class RefundKind { kPpr, kLinearAdditive };

// A refund rule R(x, B, C): what an agent who put x into an unfunded project
// with bonus pool B and total contribution C gets back on top of x.
//
// Ppr:            R = (x / C) * B, and 0 when C == 0.
// LinearAdditive: R = slope * x. Sum-additive across projects. When `slope`
//                 is unset the instance supplies min_j(V_j - T_j) / max_j V_j.
struct RefundScheme {
  RefundKind kind = RefundKind::kPpr;
  std::optional<double> slope;

  static RefundScheme ppr() { return {}; }
  static RefundScheme linear_additive(std::optional<double> slope = {}) {
    return {RefundKind::kLinearAdditive, slope};
  }

  bool is_sum_additive() const { return kind == RefundKind::kLinearAdditive; }
  bool operator==(const RefundScheme&) const = default;
};

std::string_view refund_kind_name(RefundKind kind);
// Accepts "ppr" and "linear-additive".
RefundKind parse_refund_kind(std::string_view name);

// Validates a fully-resolved scheme (slope set and positive for linear).
void validate_scheme(const RefundScheme& scheme);

// Refund share for contribution `x` given pool `bonus` and project total
// `total`. Requires 0 <= x <= total (up to 1e-9) and bonus > 0. A linear
// scheme must carry a resolved slope.
double refund_share(const RefundScheme& scheme, double x, double bonus,
                    double total);

// Arbitrary refund rule for certification, e.g. a deliberately broken one.
using RefundFunction = std::function<double(double x, double bonus, double total)>;

struct CmProbe {
  double bonus;
  double others_total;  // C = others_total + x along the probe
};

struct GridSpec {
  double x_max = 10.0;
  int points = 1000;  // grid x_k = k * x_max / points, k = 1..points
  std::vector<CmProbe> probes = {{0.5, 1.0}, {1.0, 5.0}, {5.0, 20.0}, {2.0, 0.5}};
};

struct CmReport {
  bool passed = true;
  double min_forward_difference = 0.0;
  int violations = 0;
  // First violation, if any.
  double fail_x = 0.0;
  double fail_bonus = 0.0;
  double fail_others = 0.0;
  std::string message;
};

// Numerically probes contribution monotonicity: R must strictly increase
// between every pair of adjacent grid points for every probe.
CmReport certify_cm(const RefundFunction& refund, const GridSpec& grid);
CmReport certify_cm(const RefundScheme& scheme, const GridSpec& grid);

// Theorem-style closed form for PPR at the provision point: T * theta / (B + T).
double threshold_ppr(double theta, double target, double bonus);

// How C is read inside R while solving theta - x = R(x, B, C).
enum class ThresholdConvention {
  kProvisionPoint,  // C = T (the project sits exactly at its target)
  kOthersPlusOwn,   // C = others_total + x
};

constexpr double kThresholdTolerance = 1e-10;
constexpr int kThresholdMaxIterations = 200;

// Solves theta - x = R(x, B, C(x)) on [0, theta] by bisection.
double threshold_general(
    const RefundScheme& scheme, double theta, double target, double bonus,
    double others_total = 0.0,
    ThresholdConvention convention = ThresholdConvention::kProvisionPoint);

// Smallest valuation whose threshold equals `threshold`, found by bisection
// on theta. Threshold is nondecreasing in theta for every CM scheme.
double valuation_for_threshold(const RefundScheme& scheme, double threshold,
                               double target, double bonus);

// x_bar for every (agent, project) pair under the instance's schemes, with
// the provision-point convention.
Matrix thresholds(const Instance& instance);

// x_bar under PPR regardless of the instance's scheme.
Matrix ppr_thresholds(const Instance& instance);

}  // namespace ccfund

#endif  // CCFUND_REFUNDS_HPP_
