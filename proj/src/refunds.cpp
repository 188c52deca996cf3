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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ccfund/error.hpp"
#include "ccfund/model.hpp"

namespace ccfund {

std::string_view refund_kind_name(RefundKind kind) {
  switch (kind) {
    case RefundKind::kPpr:
      return "ppr";
    case RefundKind::kLinearAdditive:
      return "linear-additive";
  }
  return "?";
}

RefundKind parse_refund_kind(std::string_view name) {
  if (name == "ppr") return RefundKind::kPpr;
  if (name == "linear-additive") return RefundKind::kLinearAdditive;
  throw InputError("unknown refund scheme '" + std::string(name) +
                   "' (expected ppr or linear-additive)");
}

void validate_scheme(const RefundScheme& scheme) {
  if (scheme.kind == RefundKind::kLinearAdditive) {
    if (!scheme.slope) throw InputError("linear-additive scheme has no slope");
    if (!(*scheme.slope > 0.0) || !std::isfinite(*scheme.slope)) {
      throw InputError("linear-additive slope must be positive");
    }
  }
}

double refund_share(const RefundScheme& scheme, double x, double bonus,
                    double total) {
  if (x < 0.0 || total < 0.0 || bonus < 0.0) {
    throw InputError("refund_share: negative input");
  }
  if (x > total + 1e-9) throw InputError("refund_share: x exceeds total");
  switch (scheme.kind) {
    case RefundKind::kPpr:
      if (total <= 0.0) return 0.0;
      return std::min(x / total, 1.0) * bonus;
    case RefundKind::kLinearAdditive:
      if (!scheme.slope) throw InputError("linear-additive scheme has no slope");
      return *scheme.slope * x;
  }
  return 0.0;
}

CmReport certify_cm(const RefundFunction& refund, const GridSpec& grid) {
  if (grid.points < 2 || !(grid.x_max > 0.0) || grid.probes.empty()) {
    throw InputError("certify_cm: degenerate grid");
  }
  CmReport report;
  report.min_forward_difference = std::numeric_limits<double>::infinity();
  const double h = grid.x_max / grid.points;
  for (const CmProbe& probe : grid.probes) {
    double prev = refund(h, probe.bonus, probe.others_total + h);
    for (int k = 2; k <= grid.points; ++k) {
      const double x = k * h;
      const double cur = refund(x, probe.bonus, probe.others_total + x);
      const double diff = cur - prev;
      report.min_forward_difference = std::min(report.min_forward_difference, diff);
      if (!(diff > 0.0)) {
        if (report.violations == 0) {
          report.fail_x = x;
          report.fail_bonus = probe.bonus;
          report.fail_others = probe.others_total;
        }
        ++report.violations;
      }
      prev = cur;
    }
  }
  report.passed = report.violations == 0;
  std::ostringstream os;
  if (report.passed) {
    os << "strictly increasing on all " << grid.probes.size()
       << " probes, min forward difference " << report.min_forward_difference;
  } else {
    os << report.violations << " non-increasing steps; first at x=" << report.fail_x
       << " B=" << report.fail_bonus << " others=" << report.fail_others;
  }
  report.message = os.str();
  return report;
}

CmReport certify_cm(const RefundScheme& scheme, const GridSpec& grid) {
  validate_scheme(scheme);
  return certify_cm(
      [scheme](double x, double b, double c) { return refund_share(scheme, x, b, c); },
      grid);
}

double threshold_ppr(double theta, double target, double bonus) {
  return target * theta / (bonus + target);
}

double threshold_general(const RefundScheme& scheme, double theta, double target,
                         double bonus, double others_total,
                         ThresholdConvention convention) {
  if (theta < 0.0) throw InputError("threshold: negative valuation");
  if (!(target > 0.0)) throw InputError("threshold: target must be positive");
  validate_scheme(scheme);
  if (theta == 0.0) return 0.0;
  // At the provision point C = T for every x, including x > T where a single
  // agent would carry the project alone; PPR's share is then x / T * B.
  auto refund_at = [&](double x) {
    if (convention == ThresholdConvention::kOthersPlusOwn) {
      return refund_share(scheme, x, bonus, others_total + x);
    }
    if (scheme.kind == RefundKind::kPpr) return x / target * bonus;
    return refund_share(scheme, x, bonus, std::max(target, x));
  };
  // g(x) = funded minus unfunded utility; g(0) = theta > 0, g(theta) <= 0.
  auto gap = [&](double x) { return theta - x - refund_at(x); };
  double lo = 0.0;
  double hi = theta;
  const double g_lo = gap(lo);
  const double g_hi = gap(hi);
  if (g_lo < 0.0 || g_hi > 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "threshold: no sign change on [0, " << theta << "]: g(0)=" << g_lo
       << " g(theta)=" << g_hi;
    throw NumericError(os.str());
  }
  if (g_hi == 0.0) return hi;
  for (int it = 0; it < kThresholdMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kThresholdTolerance) return mid;
    if (gap(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NumericError("threshold: bisection did not converge");
}

double valuation_for_threshold(const RefundScheme& scheme, double threshold,
                               double target, double bonus) {
  if (threshold < 0.0) throw InputError("valuation_for_threshold: negative target");
  if (threshold == 0.0) return 0.0;
  auto xbar = [&](double theta) {
    return threshold_general(scheme, theta, target, bonus);
  };
  // x_bar(theta) <= theta, so theta >= threshold; grow the bracket upward.
  double lo = threshold;
  double hi = 2.0 * threshold;
  int grow = 0;
  while (xbar(hi) < threshold) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 200) throw NumericError("valuation_for_threshold: no bracket");
  }
  for (int it = 0; it < kThresholdMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kThresholdTolerance * std::max(1.0, hi)) return mid;
    if (xbar(mid) < threshold) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NumericError("valuation_for_threshold: bisection did not converge");
}

Matrix thresholds(const Instance& instance) {
  Matrix out(instance.n(), instance.p());
  for (int j = 0; j < instance.p(); ++j) {
    const RefundScheme& scheme = instance.scheme_for(j);
    for (int i = 0; i < instance.n(); ++i) {
      const double theta = instance.valuation(i, j);
      out(i, j) = scheme.kind == RefundKind::kPpr
                      ? threshold_ppr(theta, instance.target(j), instance.bonus(j))
                      : threshold_general(scheme, theta, instance.target(j),
                                          instance.bonus(j));
    }
  }
  return out;
}

Matrix ppr_thresholds(const Instance& instance) {
  Matrix out(instance.n(), instance.p());
  for (int j = 0; j < instance.p(); ++j) {
    for (int i = 0; i < instance.n(); ++i) {
      out(i, j) = threshold_ppr(instance.valuation(i, j), instance.target(j),
                                instance.bonus(j));
    }
  }
  return out;
}

}  // namespace ccfund
