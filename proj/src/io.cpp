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

#include "ccfund/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ccfund/error.hpp"

namespace ccfund {
namespace {

void dump_to(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      // Object storage is an ordered map, so iteration is key-sorted.
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump_to(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ',';
        dump_to(j[k], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

double as_double(const Json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> as_doubles(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const Json& v : j) out.push_back(as_double(v, what));
  return out;
}

Matrix as_matrix(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::vector<double> row = as_doubles(j[i], what);
    if (row.size() != cols) throw InputError(std::string(what) + " rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = row[c];
  }
  return m;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json bools_json(const std::vector<bool>& v) {
  Json out = Json::array();
  for (bool b : v) out.push_back(b);
  return out;
}

Json scheme_fields(const RefundScheme& s) {
  Json out = {{"refund", std::string(refund_kind_name(s.kind))}};
  if (s.slope) out["linear_slope"] = *s.slope;
  return out;
}

RefundScheme scheme_from(const Json& j) {
  RefundScheme s;
  if (j.contains("refund")) {
    const Json& r = j.at("refund");
    if (!r.is_string()) throw InputError("refund must be a string");
    s.kind = parse_refund_kind(r.get<std::string>());
  }
  if (j.contains("linear_slope")) s.slope = as_double(j.at("linear_slope"), "linear_slope");
  return s;
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InputError(std::string("field \"") + key + "\" has the wrong type");
  }
}

std::pair<double, double> range_or(const Json& j, const char* key, double lo, double hi) {
  if (!j.contains(key)) return {lo, hi};
  const std::vector<double> v = as_doubles(j.at(key), key);
  if (v.size() != 2) throw InputError(std::string(key) + " must be [lo, hi]");
  return {v[0], v[1]};
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_to(j, out);
  return out;
}

Json instance_to_json(const Instance& instance) {
  Json agents = Json::array();
  for (int i = 0; i < instance.n(); ++i) {
    Json vals = Json::array();
    for (int j = 0; j < instance.p(); ++j) vals.push_back(instance.valuation(i, j));
    agents.push_back({{"budget", instance.budget(i)}, {"valuations", vals}});
  }
  Json projects = Json::array();
  const auto& overrides = instance.overrides();
  for (int j = 0; j < instance.p(); ++j) {
    Json pj = {{"target", instance.target(j)}, {"bonus", instance.bonus(j)}};
    if (j < static_cast<int>(overrides.size()) && overrides[j]) {
      pj.update(scheme_fields(*overrides[j]));
    }
    projects.push_back(std::move(pj));
  }
  Json out = {{"agents", agents}, {"projects", projects}};
  out.update(scheme_fields(instance.refund()));
  return out;
}

Instance instance_from_json(const Json& j) {
  const Json& agents = field(j, "agents");
  const Json& projects = field(j, "projects");
  if (!agents.is_array() || !projects.is_array()) {
    throw InputError("agents and projects must be arrays");
  }
  const std::size_t n = agents.size(), p = projects.size();
  Matrix vals(n, p);
  std::vector<double> budgets(n);
  for (std::size_t i = 0; i < n; ++i) {
    budgets[i] = as_double(field(agents[i], "budget"), "budget");
    const std::vector<double> row = as_doubles(field(agents[i], "valuations"), "valuations");
    if (row.size() != p) {
      throw InputError("agent " + std::to_string(i) + " has " + std::to_string(row.size()) +
                       " valuations for " + std::to_string(p) + " projects");
    }
    for (std::size_t c = 0; c < p; ++c) vals(i, c) = row[c];
  }
  std::vector<double> targets(p), bonuses(p);
  std::vector<std::optional<RefundScheme>> overrides(p);
  bool any_override = false;
  for (std::size_t c = 0; c < p; ++c) {
    targets[c] = as_double(field(projects[c], "target"), "target");
    bonuses[c] = as_double(field(projects[c], "bonus"), "bonus");
    if (projects[c].contains("refund") || projects[c].contains("linear_slope")) {
      overrides[c] = scheme_from(projects[c]);
      any_override = true;
    }
  }
  if (!any_override) overrides.clear();
  return Instance(std::move(vals), std::move(budgets), std::move(targets),
                  std::move(bonuses), scheme_from(j), std::move(overrides));
}

Json profile_to_json(const ContributionProfile& profile) {
  return {{"contributions", matrix_json(profile.contributions())}};
}

ContributionProfile profile_from_json(const Json& j) {
  return ContributionProfile(as_matrix(field(j, "contributions"), "contributions"));
}

Json solution_to_json(const WelfareSolution& solution) {
  return {{"subset", solution.subset.indices()},
          {"welfare", solution.welfare},
          {"cost", solution.cost},
          {"unique", solution.unique}};
}

WelfareSolution solution_from_json(const Json& j) {
  WelfareSolution s;
  const Json& subset = field(j, "subset");
  if (!subset.is_array()) throw InputError("subset must be an array");
  std::vector<int> idx;
  for (const Json& v : subset) {
    if (!v.is_number_integer()) throw InputError("subset entries must be integers");
    idx.push_back(v.get<int>());
  }
  s.subset = ProjectSet(std::move(idx));
  s.welfare = as_double(field(j, "welfare"), "welfare");
  s.cost = as_double(field(j, "cost"), "cost");
  s.unique = get_or<bool>(j, "unique", true);
  return s;
}

Json outcome_to_json(const Outcome& outcome) {
  return {{"funded", bools_json(outcome.funded)},
          {"funded_set", outcome.funded_set().indices()},
          {"totals", outcome.totals},
          {"agent_utilities", outcome.agent_utilities},
          {"per_pair_utilities", matrix_json(outcome.per_pair_utilities)},
          {"refunds", matrix_json(outcome.refunds)},
          {"social_welfare", outcome.social_welfare}};
}

Json best_response_to_json(const BestResponse& br) {
  return {{"contributions", br.contributions},
          {"funded", bools_json(br.funded)},
          {"utility", br.utility},
          {"optimal", br.optimal},
          {"leftover_unplaced", br.leftover_unplaced}};
}

Json certificate_to_json(const Certificate& certificate) {
  Json checks = Json::array();
  for (const Check& c : certificate.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"detail", c.detail},
                      {"expected_failure", c.expected_failure}});
  }
  return {{"ok", certificate.ok()}, {"checks", checks}};
}

Json discontinuity_to_json(const DiscontinuityReport& report) {
  return {{"epsilons", report.epsilons},
          {"deviation_utilities", report.deviation_utilities},
          {"funded_utility", report.funded_utility},
          {"limit_utility", report.limit_utility},
          {"gap", report.gap},
          {"strictly_increasing", report.strictly_increasing},
          {"all_exceed_funded", report.all_exceed_funded},
          {"supremum_not_attained", report.supremum_not_attained},
          {"demonstrated", report.demonstrated()}};
}

SamplerConfig sampler_config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("sampler config must be an object");
  SamplerConfig c;
  c.n = get_or<int>(j, "n", c.n);
  c.p = get_or<int>(j, "p", c.p);
  if (j.contains("valuations")) {
    const Json& v = j.at("valuations");
    const std::string kind = get_or<std::string>(v, "kind", "uniform");
    if (kind == "uniform") {
      c.valuations = ValuationDistribution::uniform(get_or<double>(v, "lo", 0.0),
                                                    get_or<double>(v, "hi", 10.0));
    } else if (kind == "exponential") {
      c.valuations = ValuationDistribution::exponential(get_or<double>(v, "rate", 1.5));
    } else {
      throw InputError("unknown valuation distribution \"" + kind + "\"");
    }
  }
  std::tie(c.beta_lo, c.beta_hi) = range_or(j, "beta", c.beta_lo, c.beta_hi);
  std::tie(c.rho_lo, c.rho_hi) = range_or(j, "rho", c.rho_lo, c.rho_hi);
  if (j.contains("bonus")) {
    const Json& b = j.at("bonus");
    const std::string kind = get_or<std::string>(b, "kind", "full");
    if (kind == "full") {
      c.bonus = BonusRule::full();
    } else if (kind == "fraction") {
      c.bonus = BonusRule::of_fraction(get_or<double>(b, "fraction", 1.0));
    } else {
      throw InputError("unknown bonus rule \"" + kind + "\"");
    }
  }
  c.refund = scheme_from(j);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.max_rejections = get_or<int>(j, "max_rejections", c.max_rejections);
  c.validate();
  return c;
}

Json sampler_config_to_json(const SamplerConfig& c) {
  Json v;
  if (c.valuations.kind == ValuationDistribution::Kind::kUniform) {
    v = {{"kind", "uniform"}, {"lo", c.valuations.lo}, {"hi", c.valuations.hi}};
  } else {
    v = {{"kind", "exponential"}, {"rate", c.valuations.rate}};
  }
  Json b = c.bonus.kind == BonusRule::Kind::kFull
               ? Json{{"kind", "full"}}
               : Json{{"kind", "fraction"}, {"fraction", c.bonus.fraction}};
  Json out = {{"n", c.n},
              {"p", c.p},
              {"valuations", v},
              {"beta", {c.beta_lo, c.beta_hi}},
              {"rho", {c.rho_lo, c.rho_hi}},
              {"bonus", b},
              {"seed", c.seed},
              {"max_rejections", c.max_rejections}};
  out.update(scheme_fields(c.refund));
  return out;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("experiment config must be an object");
  ExperimentConfig c;
  if (j.contains("sampler")) c.sampler = sampler_config_from_json(j.at("sampler"));
  if (j.contains("alphas")) c.alphas = as_doubles(j.at("alphas"), "alphas");
  if (j.contains("heuristics")) {
    const Json& h = j.at("heuristics");
    if (!h.is_array()) throw InputError("heuristics must be an array");
    c.heuristics.clear();
    for (const Json& name : h) {
      if (!name.is_string()) throw InputError("heuristic names must be strings");
      c.heuristics.push_back(parse_heuristic(name.get<std::string>()));
    }
  }
  c.instances_per_cell = get_or<int>(j, "instances_per_cell", c.instances_per_cell);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  const std::string order = get_or<std::string>(j, "play_order", "ascending");
  if (order == "ascending") {
    c.play_order = PlayOrder::Mode::kAscending;
  } else if (order == "random") {
    c.play_order = PlayOrder::Mode::kRandom;
  } else {
    throw InputError("play_order must be \"ascending\" or \"random\"");
  }
  c.delta = get_or<double>(j, "delta", c.delta);
  const std::string baseline = get_or<std::string>(j, "baseline", "ppr");
  if (baseline == "ppr") {
    c.scheme_matched_baseline = false;
  } else if (baseline == "scheme") {
    c.scheme_matched_baseline = true;
  } else {
    throw InputError("baseline must be \"ppr\" or \"scheme\"");
  }
  c.threads = get_or<int>(j, "threads", c.threads);
  c.validate();
  return c;
}

Json experiment_config_to_json(const ExperimentConfig& c) {
  Json heuristics = Json::array();
  for (Heuristic h : c.heuristics) heuristics.push_back(std::string(heuristic_name(h)));
  return {{"sampler", sampler_config_to_json(c.sampler)},
          {"alphas", c.alphas},
          {"heuristics", heuristics},
          {"instances_per_cell", c.instances_per_cell},
          {"seed", c.seed},
          {"play_order", c.play_order == PlayOrder::Mode::kRandom ? "random" : "ascending"},
          {"delta", c.delta},
          {"baseline", c.scheme_matched_baseline ? "scheme" : "ppr"},
          {"threads", c.threads}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
  if (!f) throw InputError("write failed for " + path.string());
}

}  // namespace ccfund
