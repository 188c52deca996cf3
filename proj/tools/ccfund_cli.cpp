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

// ccfund: command-line front end for the civic crowdfunding toolkit.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ccfund/best_response.hpp"
#include "ccfund/error.hpp"
#include "ccfund/generators.hpp"
#include "ccfund/harness.hpp"
#include "ccfund/heuristics.hpp"
#include "ccfund/io.hpp"
#include "ccfund/model.hpp"
#include "ccfund/refunds.hpp"
#include "ccfund/welfare.hpp"

namespace {

using namespace ccfund;

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct RefundFlags {
  std::string refund;
  std::optional<double> slope;

  void attach(CLI::App* cmd) {
    cmd->add_option("--refund", refund, "Refund scheme")
        ->check(CLI::IsMember({"ppr", "linear-additive"}));
    cmd->add_option("--linear-slope", slope, "Slope a of the linear-additive scheme")
        ->check(CLI::PositiveNumber);
  }
  bool given() const { return !refund.empty() || slope.has_value(); }
  RefundScheme resolve(const RefundScheme& base) const {
    RefundScheme s = base;
    if (!refund.empty()) {
      s.kind = parse_refund_kind(refund);
      if (s.kind == RefundKind::kPpr) s.slope.reset();
    }
    if (slope) s.slope = *slope;
    return s;
  }
};

void announce(const std::string& name, const Json& config,
              std::optional<std::uint64_t> seed) {
  std::cerr << "ccfund " << name << " config: " << canonical_dump(config) << "\n";
  std::cerr << "seed: " << (seed ? std::to_string(*seed) : std::string("none")) << "\n";
}

Instance load_instance(const std::string& path, const RefundFlags& flags) {
  Instance inst = instance_from_json(read_json_file(path));
  if (flags.given()) inst = inst.with_refund(flags.resolve(inst.refund()));
  return inst;
}

int print_certificate(const Certificate& cert) {
  for (const Check& c : cert.checks) {
    const char* tag = c.passed ? "PASS " : (c.expected_failure ? "XFAIL" : "FAIL ");
    std::cout << tag << " " << c.name;
    if (!c.detail.empty()) std::cout << ": " << c.detail;
    std::cout << "\n";
  }
  if (const Check* bad = cert.first_unexpected_failure()) {
    std::cout << "verification failed at: " << bad->name << "\n";
    return kExitVerify;
  }
  std::cout << "verification passed\n";
  return kExitOk;
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
  std::string config;
  int count = 1;
  std::string out;
  std::optional<std::uint64_t> seed;
  RefundFlags refund;
};

int run_gen(const GenArgs& a) {
  SamplerConfig cfg;
  if (!a.config.empty()) cfg = sampler_config_from_json(read_json_file(a.config));
  if (a.seed) cfg.seed = *a.seed;
  if (a.refund.given()) cfg.refund = a.refund.resolve(cfg.refund);
  cfg.validate();
  Json shown = sampler_config_to_json(cfg);
  shown["count"] = a.count;
  shown["out"] = a.out;
  announce("gen", shown, cfg.seed);
  for (int k = 0; k < a.count; ++k) {
    const SampledInstance s = sample_instance(cfg, static_cast<std::uint64_t>(k));
    char name[32];
    std::snprintf(name, sizeof name, "instance_%05d.json", k);
    write_text_file(std::filesystem::path(a.out) / name,
                    canonical_dump(instance_to_json(s.instance)) + "\n");
  }
  std::cerr << "wrote " << a.count << " instance(s) to " << a.out << "\n";
  return kExitOk;
}

// ---- fixture / verify -----------------------------------------------------

struct FixtureArgs {
  std::string name;
  RefundFlags refund;
  double target1 = 10.0;
  double theta11 = 10.9;
  double theta22_fraction = 0.5;
  double bonus1 = kDefaultProcedure1Bonus;
  double theta = 6.0;
  double target = 10.0;
  int p = 3;
  int n1 = 2;
  int n2 = 3;
  std::vector<double> epsilons = {0.1, 0.01, 0.001};
};

void attach_fixture_flags(CLI::App* cmd, FixtureArgs& a) {
  cmd->add_option("--target1", a.target1, "procedure1: T_1");
  cmd->add_option("--theta11", a.theta11, "procedure1: theta_11");
  cmd->add_option("--theta22-fraction", a.theta22_fraction,
                  "procedure1: position of theta_22 inside its interval");
  cmd->add_option("--bonus1", a.bonus1, "procedure1: B_1");
  cmd->add_option("--theta", a.theta, "example2: per-project valuation");
  cmd->add_option("--target", a.target, "example2: per-project target");
  cmd->add_option("--projects", a.p, "theorem2: number of projects");
  cmd->add_option("--n1", a.n1, "theorem2: low-budget agents");
  cmd->add_option("--n2", a.n2, "theorem2: remaining agents");
  cmd->add_option("--epsilons", a.epsilons, "example2: deviation sizes")->delimiter(',');
  a.refund.attach(cmd);
}

Json fixture_config(const FixtureArgs& a) {
  Json j = {{"name", a.name}};
  if (a.name == "procedure1") {
    j["target1"] = a.target1;
    j["theta11"] = a.theta11;
    j["theta22_fraction"] = a.theta22_fraction;
    j["bonus1"] = a.bonus1;
  } else if (a.name == "example2") {
    j["theta"] = a.theta;
    j["target"] = a.target;
    j["epsilons"] = a.epsilons;
  } else if (a.name == "theorem2") {
    j["projects"] = a.p;
    j["n1"] = a.n1;
    j["n2"] = a.n2;
  }
  if (a.refund.given()) {
    const RefundScheme s = a.refund.resolve(RefundScheme::ppr());
    j["refund"] = std::string(refund_kind_name(s.kind));
    if (s.slope) j["linear_slope"] = *s.slope;
  }
  return j;
}

struct Built {
  Instance instance;
  std::optional<Certificate> certificate;
  std::optional<DiscontinuityReport> discontinuity;
};

Built build_fixture(const FixtureArgs& a) {
  const RefundScheme scheme = a.refund.resolve(RefundScheme::ppr());
  if (a.name == "procedure1") {
    Fixture f = build_procedure1(scheme, a.target1, a.theta11, a.theta22_fraction, a.bonus1);
    return {f.instance, f.certificate, std::nullopt};
  }
  if (a.name == "example1") {
    Instance inst = build_example1();
    if (a.refund.given()) inst = inst.with_refund(scheme);
    return {inst, certify_example1(inst), std::nullopt};
  }
  if (a.name == "example2") {
    Instance inst = build_example2(scheme, a.theta, a.target);
    return {inst, std::nullopt, demonstrate_nonexistence(inst, a.epsilons)};
  }
  if (a.name == "theorem2") {
    Fixture f = build_theorem2_witness(scheme, a.p, a.n1, a.n2);
    return {f.instance, f.certificate, std::nullopt};
  }
  if (a.name == "appendixB") {
    Fixture f = build_appendix_b();
    return {f.instance, f.certificate, std::nullopt};
  }
  throw InputError("unknown fixture \"" + a.name + "\"");
}

int run_fixture(const FixtureArgs& a) {
  announce("fixture", fixture_config(a), std::nullopt);
  const Built b = build_fixture(a);
  Json out = {{"instance", instance_to_json(b.instance)}};
  if (b.certificate) out["certificate"] = certificate_to_json(*b.certificate);
  if (b.discontinuity) out["discontinuity"] = discontinuity_to_json(*b.discontinuity);
  std::cout << canonical_dump(out) << "\n";
  return kExitOk;
}

int run_verify(const FixtureArgs& a) {
  announce("verify", fixture_config(a), std::nullopt);
  const Built b = build_fixture(a);
  if (b.certificate) return print_certificate(*b.certificate);
  const DiscontinuityReport& r = *b.discontinuity;
  std::cout.precision(12);
  std::cout << "utility at epsilon = 0 (project 1 funded): " << r.funded_utility << "\n";
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    std::cout << "epsilon " << r.epsilons[k] << ": utility " << r.deviation_utilities[k]
              << "\n";
  }
  std::cout << "limit as epsilon -> 0: " << r.limit_utility << " (gap " << r.gap << ")\n";
  Certificate cert;
  cert.add("strictly increasing as epsilon shrinks", r.strictly_increasing, "");
  cert.add("every deviation beats the funded utility", r.all_exceed_funded, "");
  cert.add("supremum not attained", r.supremum_not_attained, "");
  return print_certificate(cert);
}

// ---- solve-pstar ----------------------------------------------------------

struct PstarArgs {
  std::string instance;
  double resolution = kDefaultResolution;
  std::string objective = "welfare";
  std::string method = "auto";
  RefundFlags refund;
};

int run_pstar(const PstarArgs& a) {
  announce("solve-pstar",
           {{"instance", a.instance},
            {"resolution", a.resolution},
            {"objective", a.objective},
            {"method", a.method}},
           std::nullopt);
  const Instance inst = load_instance(a.instance, a.refund);
  const WelfareObjective obj =
      a.objective == "valuation" ? WelfareObjective::kValuation : WelfareObjective::kWelfare;
  WelfareSolution s;
  if (a.method == "dp") {
    s = solve_pstar_dp(inst, a.resolution, obj);
  } else if (a.method == "bruteforce") {
    s = solve_pstar_bruteforce(inst, obj);
  } else {
    s = solve_pstar(inst, a.resolution, obj);
  }
  std::cout << canonical_dump(solution_to_json(s)) << "\n";
  return kExitOk;
}

// ---- best-response --------------------------------------------------------

struct BrArgs {
  std::string instance;
  int agent = 0;
  std::string others;
  double delta = kDefaultDelta;
  std::string method = "exact";
  RefundFlags refund;
};

int run_br(const BrArgs& a) {
  announce("best-response",
           {{"instance", a.instance},
            {"agent", a.agent},
            {"others", a.others},
            {"delta", a.delta},
            {"method", a.method}},
           std::nullopt);
  const Instance inst = load_instance(a.instance, a.refund);
  const ContributionProfile prof =
      a.others.empty() ? ContributionProfile::zeros(inst.n(), inst.p())
                       : profile_from_json(read_json_file(a.others));
  const ResidualView view = ResidualView::from_profile(inst, prof, a.agent);
  BestResponse br;
  if (a.method == "bruteforce") {
    br = best_response_bruteforce(view, a.delta);
  } else if (a.method == "knapsack") {
    br = knapsack_form_oracle(view, a.delta);
  } else {
    br = best_response_exact(view, a.delta);
  }
  std::cout << canonical_dump(best_response_to_json(br)) << "\n";
  return kExitOk;
}

// ---- play -----------------------------------------------------------------

struct PlayArgs {
  std::string instance;
  std::vector<std::string> heuristics = {"opt-welfare"};
  std::string order = "ascending";
  std::uint64_t seed = 1;
  double resolution = kDefaultResolution;
  RefundFlags refund;
};

int run_play(const PlayArgs& a) {
  announce("play",
           {{"instance", a.instance},
            {"heuristics", a.heuristics},
            {"order", a.order},
            {"resolution", a.resolution}},
           a.seed);
  const Instance inst = load_instance(a.instance, a.refund);
  Assignment assign;
  if (a.heuristics.size() == 1) {
    assign = Assignment::uniform(inst.n(), parse_heuristic(a.heuristics[0]));
  } else if (static_cast<int>(a.heuristics.size()) == inst.n()) {
    for (const std::string& h : a.heuristics) assign.heuristics.push_back(parse_heuristic(h));
  } else {
    throw InputError("--heuristic takes one name or one per agent (" +
                     std::to_string(inst.n()) + ")");
  }
  const WelfareSolution pstar = solve_pstar(inst, a.resolution);
  const Matrix xbar = thresholds(inst);
  const PlayOrder order =
      a.order == "random" ? PlayOrder::random(a.seed) : PlayOrder::ascending();
  const ContributionProfile prof = play(inst, assign, pstar.subset, xbar, order);
  const Outcome out = evaluate(inst, prof);
  Json result = {{"pstar", solution_to_json(pstar)},
                 {"profile", profile_to_json(prof)},
                 {"outcome", outcome_to_json(out)}};
  if (auto sw = sw_n(out, pstar.welfare)) {
    result["sw_n"] = *sw;
  } else {
    result["sw_n"] = nullptr;
  }
  std::cout << canonical_dump(result) << "\n";
  return kExitOk;
}

// ---- experiment -----------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::string out;
  bool full_scale = false;
  std::string emit_series;
  std::optional<std::uint64_t> seed;
  std::optional<int> instances;
  std::optional<int> threads;
  RefundFlags refund;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = experiment_config_from_json(read_json_file(a.config));
  if (a.seed) cfg.seed = *a.seed;
  if (a.instances) cfg.instances_per_cell = *a.instances;
  if (a.full_scale) cfg.instances_per_cell = kFullScaleInstances;
  if (a.threads) cfg.threads = *a.threads;
  if (a.refund.given()) cfg.sampler.refund = a.refund.resolve(cfg.sampler.refund);
  cfg.sampler.seed = cfg.seed;
  cfg.validate();
  Json shown = experiment_config_to_json(cfg);
  shown["out"] = a.out;
  shown["resolved_threads"] = resolve_threads(cfg.threads);
  announce("experiment", shown, cfg.seed);
  const ExperimentReport report = run_experiment(cfg);
  std::ostringstream csv;
  write_csv(report, csv);
  if (a.out.empty() || a.out == "-") {
    std::cout << csv.str();
  } else {
    write_text_file(a.out, csv.str());
  }
  if (!a.emit_series.empty()) emit_series(report, a.emit_series);
  std::cerr << "config hash: " << report.config_hash << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ccfund: civic crowdfunding games, solvers and experiments"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Sample instances to canonical JSON files");
  gen_cmd->add_option("--config", gen.config, "Sampler config JSON")->check(CLI::ExistingFile);
  gen_cmd->add_option("--count", gen.count, "Number of instances")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.seed, "Override the config seed");
  gen.refund.attach(gen_cmd);

  const std::vector<std::string> fixture_names = {"procedure1", "example1", "example2",
                                                  "theorem2", "appendixB"};
  FixtureArgs fixture;
  auto* fixture_cmd = app.add_subcommand("fixture", "Print a fixture and its certificate");
  fixture_cmd->add_option("--name", fixture.name, "Fixture name")
      ->required()
      ->check(CLI::IsMember(fixture_names));
  attach_fixture_flags(fixture_cmd, fixture);

  FixtureArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a fixture's checks");
  verify_cmd->add_option("name", verify.name, "Fixture name")
      ->required()
      ->check(CLI::IsMember(fixture_names));
  attach_fixture_flags(verify_cmd, verify);

  PstarArgs pstar;
  auto* pstar_cmd = app.add_subcommand("solve-pstar", "Welfare-maximizing project subset");
  pstar_cmd->add_option("--instance", pstar.instance, "Instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  pstar_cmd->add_option("--resolution", pstar.resolution, "DP cost grid")
      ->check(CLI::PositiveNumber);
  pstar_cmd->add_option("--objective", pstar.objective, "welfare or valuation")
      ->check(CLI::IsMember({"welfare", "valuation"}));
  pstar_cmd->add_option("--method", pstar.method, "auto, dp or bruteforce")
      ->check(CLI::IsMember({"auto", "dp", "bruteforce"}));
  pstar.refund.attach(pstar_cmd);

  BrArgs br;
  auto* br_cmd = app.add_subcommand("best-response", "Best response of one agent");
  br_cmd->add_option("--instance", br.instance, "Instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  br_cmd->add_option("--agent", br.agent, "Agent index (0-based)")->required();
  br_cmd->add_option("--others", br.others, "Profile JSON; the agent's own row is ignored")
      ->check(CLI::ExistingFile);
  br_cmd->add_option("--delta", br.delta, "Contribution grid")->check(CLI::PositiveNumber);
  br_cmd->add_option("--method", br.method, "exact, bruteforce or knapsack")
      ->check(CLI::IsMember({"exact", "bruteforce", "knapsack"}));
  br.refund.attach(br_cmd);

  PlayArgs pl;
  auto* play_cmd = app.add_subcommand("play", "Play heuristics out on an instance");
  play_cmd->add_option("--instance", pl.instance, "Instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  play_cmd->add_option("--heuristic", pl.heuristics, "One name for everyone, or one per agent")
      ->delimiter(',');
  play_cmd->add_option("--order", pl.order, "ascending or random")
      ->check(CLI::IsMember({"ascending", "random"}));
  play_cmd->add_option("--seed", pl.seed, "Seed for random order");
  play_cmd->add_option("--resolution", pl.resolution, "DP cost grid for P*")
      ->check(CLI::PositiveNumber);
  pl.refund.attach(play_cmd);

  ExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("experiment", "Monte-Carlo deviation experiment");
  ex_cmd->add_option("--config", ex.config, "Experiment config JSON")->check(CLI::ExistingFile);
  ex_cmd->add_option("--out", ex.out, "CSV path, - for stdout");
  ex_cmd->add_flag("--full-scale", ex.full_scale, "100000 instances per cell");
  ex_cmd->add_option("--emit-series", ex.emit_series, "Directory for per-curve JSON");
  ex_cmd->add_option("--seed", ex.seed, "Override the config seed");
  ex_cmd->add_option("--instances", ex.instances, "Instances per cell")
      ->check(CLI::PositiveNumber);
  ex_cmd->add_option("--threads", ex.threads, "Worker threads")->check(CLI::PositiveNumber);
  ex.refund.attach(ex_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*fixture_cmd) return run_fixture(fixture);
    if (*verify_cmd) return run_verify(verify);
    if (*pstar_cmd) return run_pstar(pstar);
    if (*br_cmd) return run_br(br);
    if (*play_cmd) return run_play(pl);
    if (*ex_cmd) return run_experiment_cmd(ex);
  } catch (const BudgetViolation& e) {
    std::cerr << "budget violation: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GuardExceeded& e) {
    std::cerr << "solver limit: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
