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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ccfund/error.hpp"
#include "ccfund/refunds.hpp"

namespace ccfund {
namespace {

constexpr double kSnapUnits = 1e-6;
constexpr long long kMaxDpWork = 4'000'000'000LL;

long long units_up(double v, double delta) {
  return std::max(0LL, static_cast<long long>(std::ceil(v / delta - kSnapUnits)));
}

long long units_down(double v, double delta) {
  return std::max(0LL, static_cast<long long>(std::floor(v / delta + kSnapUnits)));
}

// Tabulated choices for one project: spending b units, b = 0..cap.
struct ProjectTable {
  long long fund_units = 0;  // r_j rounded up to the grid
  long long cap = 0;         // largest admissible b
  std::vector<double> utility;
};

ProjectTable tabulate(const ResidualView& view, int j, long long budget_units,
                      double delta) {
  ProjectTable t;
  t.fund_units = units_up(view.remaining[j], delta);
  t.cap = std::min(t.fund_units, budget_units);
  t.utility.resize(t.cap + 1);
  for (long long b = 0; b <= t.cap; ++b) {
    const double x = b * delta;
    if (b == t.fund_units) {
      t.utility[b] = view.valuations[j] - x;
    } else {
      t.utility[b] = refund_share(view.schemes[j], x, view.bonuses[j],
                                  view.others_totals[j] + x);
    }
  }
  return t;
}

struct Value {
  double utility = 0.0;
  long long spend = 0;
};

bool better(const Value& a, const Value& b) {
  if (a.utility > b.utility + kTolerance) return true;
  if (a.utility < b.utility - kTolerance) return false;
  return a.spend < b.spend;
}

bool same(const Value& a, const Value& b) {
  return std::abs(a.utility - b.utility) <= kTolerance && a.spend == b.spend;
}

BestResponse finish(const ResidualView& view, std::vector<double> x, bool optimal) {
  BestResponse br;
  br.funded.resize(view.p());
  for (int j = 0; j < view.p(); ++j) {
    br.funded[j] = x[j] >= view.remaining[j] - kTolerance;
  }
  br.utility = response_utility(view, x);
  br.contributions = std::move(x);
  br.optimal = optimal;
  return br;
}

void check_delta(double delta, double budget) {
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (budget / delta > static_cast<double>(kMaxGridUnits)) {
    std::ostringstream os;
    os << "budget/delta = " << budget / delta << " exceeds " << kMaxGridUnits;
    throw GuardExceeded(os.str());
  }
}

}  // namespace

void ResidualView::validate() const {
  const std::size_t p = remaining.size();
  if (others_totals.size() != p || valuations.size() != p || bonuses.size() != p ||
      schemes.size() != p) {
    throw InputError("residual view vectors differ in length");
  }
  if (!(budget >= 0.0)) throw InputError("residual view budget is negative");
  for (std::size_t j = 0; j < p; ++j) {
    if (!(remaining[j] >= 0.0)) throw InputError("residual r_j is negative");
    if (!(others_totals[j] >= 0.0)) throw InputError("others' total is negative");
    if (!(valuations[j] >= 0.0)) throw InputError("valuation is negative");
    validate_scheme(schemes[j]);
  }
}

ResidualView ResidualView::from_profile(const Instance& instance,
                                        const ContributionProfile& profile,
                                        int agent) {
  if (agent < 0 || agent >= instance.n()) throw InputError("agent index out of range");
  if (profile.n() != instance.n() || profile.p() != instance.p()) {
    throw InputError("profile dimensions differ from instance");
  }
  ResidualView v;
  v.agent = agent;
  v.budget = instance.budget(agent);
  for (int j = 0; j < instance.p(); ++j) {
    const double others = profile.total(j) - profile(agent, j);
    v.others_totals.push_back(std::max(0.0, others));
    v.remaining.push_back(std::max(0.0, instance.target(j) - others));
    v.valuations.push_back(instance.valuation(agent, j));
    v.bonuses.push_back(instance.bonus(j));
    v.schemes.push_back(instance.scheme_for(j));
  }
  return v;
}

double response_utility(const ResidualView& view, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != view.p()) {
    throw InputError("contribution vector length differs from view");
  }
  double u = 0.0;
  for (int j = 0; j < view.p(); ++j) {
    if (x[j] >= view.remaining[j] - kTolerance) {
      u += view.valuations[j] - x[j];
    } else {
      u += refund_share(view.schemes[j], x[j], view.bonuses[j],
                        view.others_totals[j] + x[j]);
    }
  }
  return u;
}

BestResponse best_response_exact(const ResidualView& view, double delta) {
  view.validate();
  check_delta(delta, view.budget);
  const int p = view.p();
  const long long budget_units = units_down(view.budget, delta);
  std::vector<ProjectTable> tables;
  long long work = 0;
  for (int j = 0; j < p; ++j) {
    tables.push_back(tabulate(view, j, budget_units, delta));
    work += (budget_units + 1) * (tables.back().cap + 1);
  }
  if (work > kMaxDpWork) throw GuardExceeded("best-response DP work limit exceeded");

  // suffix[j][g]: best over projects j..p-1 spending at most g units.
  const std::size_t width = budget_units + 1;
  std::vector<Value> suffix((p + 1) * width);
  auto at = [&](int j, long long g) -> Value& { return suffix[j * width + g]; };
  for (int j = p - 1; j >= 0; --j) {
    const ProjectTable& t = tables[j];
    for (long long g = 0; g <= budget_units; ++g) {
      Value best{-1.0, 0};
      bool any = false;
      for (long long b = 0; b <= std::min(t.cap, g); ++b) {
        const Value& rest = at(j + 1, g - b);
        Value cand{t.utility[b] + rest.utility, b + rest.spend};
        if (!any || better(cand, best)) {
          best = cand;
          any = true;
        }
      }
      at(j, g) = best;
    }
  }

  std::vector<double> x(p, 0.0);
  long long g = budget_units;
  for (int j = 0; j < p; ++j) {
    const ProjectTable& t = tables[j];
    const Value target = at(j, g);
    for (long long b = 0; b <= std::min(t.cap, g); ++b) {
      const Value& rest = at(j + 1, g - b);
      if (same({t.utility[b] + rest.utility, b + rest.spend}, target)) {
        x[j] = b * delta;
        g -= b;
        break;
      }
    }
  }
  return finish(view, std::move(x), true);
}

BestResponse best_response_bruteforce(const ResidualView& view, double delta) {
  view.validate();
  check_delta(delta, view.budget);
  const int p = view.p();
  const long long budget_units = units_down(view.budget, delta);
  std::vector<ProjectTable> tables;
  double profiles = 1.0;
  for (int j = 0; j < p; ++j) {
    tables.push_back(tabulate(view, j, budget_units, delta));
    profiles *= static_cast<double>(tables.back().cap + 1);
  }
  if (profiles > static_cast<double>(kMaxBruteForceProfiles)) {
    std::ostringstream os;
    os << "brute-force best response would enumerate " << profiles << " profiles";
    throw GuardExceeded(os.str());
  }

  // Odometer over b, last project fastest, so profiles come in lexicographic
  // order and the first of equal candidates is kept.
  std::vector<long long> b(p, 0);
  std::vector<long long> best_b(p, 0);
  Value best{-1.0, 0};
  bool any = false;
  while (true) {
    long long spend = 0;
    double u = 0.0;
    for (int j = 0; j < p; ++j) {
      spend += b[j];
      u += tables[j].utility[b[j]];
    }
    if (spend <= budget_units) {
      Value cand{u, spend};
      if (!any || better(cand, best)) {
        best = cand;
        best_b = b;
        any = true;
      }
    }
    int j = p - 1;
    while (j >= 0 && b[j] == tables[j].cap) {
      b[j] = 0;
      --j;
    }
    if (j < 0) break;
    ++b[j];
  }
  std::vector<double> x(p);
  for (int j = 0; j < p; ++j) x[j] = best_b[j] * delta;
  return finish(view, std::move(x), true);
}

BestResponse knapsack_form_oracle(const ResidualView& view, double delta) {
  view.validate();
  const int p = view.p();
  if (p == 0) return finish(view, {}, true);
  const RefundScheme& scheme = view.schemes[0];
  for (const RefundScheme& s : view.schemes) {
    if (!s.is_sum_additive() || s != scheme) {
      throw InputError("knapsack-form oracle needs one sum-additive scheme on all projects");
    }
  }

  // Items: cost r_j, value theta_j - r_j - R(r_j). A zero residual is funded
  // whatever the agent does, so it is always taken.
  struct State {
    double cost;
    double value;
    std::vector<bool> take;
  };
  std::vector<State> states{{0.0, 0.0, std::vector<bool>(p, false)}};
  for (int j = 0; j < p; ++j) {
    const double r = view.remaining[j];
    const double v = view.valuations[j] - r - refund_share(scheme, r, view.bonuses[j], r);
    std::vector<State> next;
    next.reserve(states.size() * 2);
    for (const State& s : states) {
      if (r > 0.0) next.push_back(s);
      if (s.cost + r <= view.budget + kTolerance) {
        State t = s;
        t.cost += r;
        t.value += v;
        t.take[j] = true;
        next.push_back(std::move(t));
      }
    }
    // Pareto pruning: keep a state only if it is worth more than every
    // cheaper one.
    std::stable_sort(next.begin(), next.end(), [](const State& a, const State& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      return a.value > b.value;
    });
    states.clear();
    for (State& s : next) {
      if (states.empty() || s.value > states.back().value + kTolerance) {
        states.push_back(std::move(s));
      }
    }
  }
  // Costs ascend and values strictly increase along the frontier.
  const State& best = states.back();

  std::vector<double> x(p, 0.0);
  double leftover = view.budget;
  for (int j = 0; j < p; ++j) {
    if (best.take[j]) {
      x[j] = view.remaining[j];
      leftover -= x[j];
    }
  }
  for (int j = 0; j < p && leftover > kTolerance; ++j) {
    if (best.take[j]) continue;
    const double room = std::max(0.0, view.remaining[j] - delta);
    const double put = std::min(room, leftover);
    x[j] = put;
    leftover -= put;
  }
  BestResponse br = finish(view, std::move(x), true);
  br.leftover_unplaced = leftover > kTolerance;
  return br;
}

DiscontinuityReport demonstrate_nonexistence(const Instance& instance,
                                             const std::vector<double>& epsilons) {
  if (instance.n() != 2 || instance.p() != 3) {
    throw InputError("discontinuity demo needs 2 agents and 3 projects");
  }
  const double theta = instance.valuation(0, 0);
  const double target = instance.target(0);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(instance.valuation(i, j) - theta) > kTolerance ||
          std::abs(instance.target(j) - target) > kTolerance ||
          std::abs(instance.bonus(j) - instance.bonus(0)) > kTolerance ||
          instance.scheme_for(j) != instance.scheme_for(0)) {
        throw InputError("discontinuity demo needs identical agents and projects");
      }
    }
  }
  const Matrix xbar = thresholds(instance);
  for (int i = 0; i < 2; ++i) {
    if (std::abs(instance.budget(i) - xbar(i, 0)) > 1e-6) {
      throw InputError("discontinuity demo needs budgets equal to x_bar");
    }
  }
  const double g1 = instance.budget(0);
  const double g2 = instance.budget(1);
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0) || epsilons[k] > g2) {
      throw InputError("epsilons must lie in (0, budget]");
    }
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
      throw InputError("epsilons must be strictly decreasing");
    }
  }

  auto agent2_utility = [&](double a, double b, double c) {
    Matrix x(2, 3);
    x(0, 0) = g1;
    x(1, 0) = a;
    x(1, 1) = b;
    x(1, 2) = c;
    return evaluate(instance, ContributionProfile(std::move(x))).agent_utilities[1];
  };

  DiscontinuityReport rep;
  rep.epsilons = epsilons;
  for (double eps : epsilons) {
    rep.deviation_utilities.push_back(agent2_utility(g2 - eps, eps / 2, eps / 2));
  }
  rep.funded_utility = agent2_utility(g2, 0.0, 0.0);

  // eps -> 0+: project 1 stays unfunded with agent 2's share at g2, and the
  // other two projects pay the refund of a vanishing sole contribution.
  const RefundScheme& s = instance.scheme_for(0);
  const double bonus = instance.bonus(0);
  const double tiny = 1e-300;
  rep.limit_utility = refund_share(s, g2, bonus, g1 + g2) +
                      2.0 * refund_share(s, tiny, bonus, tiny);
  rep.gap = rep.limit_utility - rep.funded_utility;

  rep.strictly_increasing = !rep.deviation_utilities.empty();
  rep.all_exceed_funded = !rep.deviation_utilities.empty();
  double max_dev = -1e300;
  for (std::size_t k = 0; k < rep.deviation_utilities.size(); ++k) {
    const double u = rep.deviation_utilities[k];
    if (k > 0 && !(u > rep.deviation_utilities[k - 1])) rep.strictly_increasing = false;
    if (!(u > rep.funded_utility)) rep.all_exceed_funded = false;
    max_dev = std::max(max_dev, u);
  }
  rep.supremum_not_attained = rep.strictly_increasing && rep.limit_utility > max_dev &&
                              rep.funded_utility < rep.limit_utility;
  return rep;
}

}  // namespace ccfund
