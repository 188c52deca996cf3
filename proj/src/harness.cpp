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

#include "ccfund/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "ccfund/error.hpp"
#include "ccfund/refunds.hpp"
#include "ccfund/rng.hpp"

namespace ccfund {
namespace {

constexpr std::uint64_t kDeviatorStream = 0x44455649;  // "DEVI"
constexpr std::uint64_t kOrderStream = 0x4f524452;     // "ORDR"
constexpr int kChunk = 512;

// Neumaier-compensated running sum with a count and sum of squares.
class Accumulator {
 public:
  void add(double v) {
    add_to(sum_, comp_, v);
    add_to(sq_, sq_comp_, v * v);
    ++count_;
  }
  long long count() const { return count_; }
  double mean() const { return count_ ? (sum_ + comp_) / count_ : 0.0; }
  // Standard error of the mean.
  double se() const {
    if (count_ < 2) return 0.0;
    const double m = mean();
    const double var = ((sq_ + sq_comp_) - count_ * m * m) / (count_ - 1);
    return std::sqrt(std::max(0.0, var) / count_);
  }

 private:
  static void add_to(double& sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double sum_ = 0.0, comp_ = 0.0, sq_ = 0.0, sq_comp_ = 0.0;
  long long count_ = 0;
};

struct InstanceMetrics {
  std::optional<double> sw;
  std::optional<double> au;
  std::optional<double> dev;
  std::optional<double> nondev;
  int excluded_agents = 0;
};

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string describe(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  const SamplerConfig& s = cfg.sampler;
  os << "n=" << s.n << ";p=" << s.p << ";dist=" << static_cast<int>(s.valuations.kind)
     << "," << s.valuations.lo << "," << s.valuations.hi << "," << s.valuations.rate
     << ";beta=" << s.beta_lo << "," << s.beta_hi
     << ";bonus=" << static_cast<int>(s.bonus.kind) << "," << s.bonus.fraction
     << ";rho=" << s.rho_lo << "," << s.rho_hi
     << ";refund=" << refund_kind_name(s.refund.kind) << ","
     << (s.refund.slope ? *s.refund.slope : -1.0) << ";rej=" << s.max_rejections
     << ";alphas=";
  for (double a : cfg.alphas) os << a << ",";
  os << ";h=";
  for (Heuristic h : cfg.heuristics) os << heuristic_name(h) << ",";
  os << ";k=" << cfg.instances_per_cell << ";seed=" << cfg.seed
     << ";order=" << static_cast<int>(cfg.play_order) << ";delta=" << cfg.delta
     << ";matched=" << cfg.scheme_matched_baseline;
  return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "NA"; }

}  // namespace

void ExperimentConfig::validate() const {
  sampler.validate();
  if (alphas.empty()) throw InputError("experiment needs at least one alpha");
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (!(alphas[k] > 0.0 && alphas[k] <= 1.0)) {
      throw InputError("alphas must lie in (0, 1]");
    }
    if (k > 0 && !(alphas[k] > alphas[k - 1])) {
      throw InputError("alphas must be strictly ascending");
    }
  }
  if (heuristics.empty()) throw InputError("experiment needs at least one heuristic");
  if (instances_per_cell < 1) throw InputError("instances_per_cell must be >= 1");
  if (!(delta > 0.0)) throw InputError("delta must be positive");
}

const CellResult* ExperimentReport::find(Heuristic h, double alpha) const {
  for (const CellResult& c : cells) {
    if (c.heuristic == h && std::abs(c.alpha - alpha) < 1e-12) return &c;
  }
  return nullptr;
}

std::optional<double> sw_n(const Outcome& outcome, double pstar_welfare) {
  if (pstar_welfare <= kTolerance) return std::nullopt;
  return outcome.social_welfare / pstar_welfare;
}

std::vector<std::optional<double>> au_n(const Instance& instance,
                                        const Outcome& outcome,
                                        const Matrix& baseline_thresholds) {
  std::vector<std::optional<double>> out(instance.n());
  for (int i = 0; i < instance.n(); ++i) {
    double baseline = 0.0;
    for (int j = 0; j < instance.p(); ++j) {
      baseline += instance.valuation(i, j) - baseline_thresholds(i, j);
    }
    if (baseline > kTolerance) out[i] = outcome.agent_utilities[i] / baseline;
  }
  return out;
}

DeviationSplit deviation_split(const std::vector<std::optional<double>>& au,
                               const std::vector<bool>& deviator_mask) {
  if (au.size() != deviator_mask.size()) {
    throw InputError("deviation_split: mask length differs");
  }
  double s[2] = {0.0, 0.0};
  int c[2] = {0, 0};
  for (std::size_t i = 0; i < au.size(); ++i) {
    if (!au[i]) continue;
    const int k = deviator_mask[i] ? 0 : 1;
    s[k] += *au[i];
    ++c[k];
  }
  DeviationSplit out;
  if (c[0]) out.deviators = s[0] / c[0];
  if (c[1]) out.non_deviators = s[1] / c[1];
  return out;
}

std::vector<bool> select_deviators(int n, double alpha, std::uint64_t seed) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  for (int k = n - 1; k > 0; --k) std::swap(perm[k], perm[rng.below(k + 1)]);
  // Guard against alpha * n landing a hair under an integer.
  const int count = std::clamp(static_cast<int>(std::floor(alpha * n + 1e-9)), 0, n);
  std::vector<bool> mask(n, false);
  for (int k = 0; k < count; ++k) mask[perm[k]] = true;
  return mask;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CCFUND_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  SamplerConfig sampler = cfg.sampler;
  sampler.seed = cfg.seed;
  const int threads = resolve_threads(cfg.threads);
  const std::size_t n_alpha = cfg.alphas.size();
  const std::size_t n_cells = cfg.heuristics.size() * n_alpha;

  struct CellAcc {
    Accumulator sw, au, dev, nondev;
    int excluded = 0;
    long long excluded_agents = 0;
  };
  std::vector<CellAcc> acc(n_cells);

  const int total = cfg.instances_per_cell;
  for (int start = 0; start < total; start += kChunk) {
    const int count = std::min(kChunk, total - start);
    std::vector<InstanceMetrics> metrics(static_cast<std::size_t>(count) * n_cells);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto worker = [&]() {
      try {
        for (int k; (k = next.fetch_add(1)) < count;) {
          const std::uint64_t index = start + k;
          const SampledInstance s = sample_instance(sampler, index);
          const Instance& inst = s.instance;
          const Matrix xbar = thresholds(inst);
          const Matrix baseline = cfg.scheme_matched_baseline ? xbar : ppr_thresholds(inst);
          const std::uint64_t dev_seed = derive_seed(cfg.seed, kDeviatorStream, index);
          const PlayOrder order =
              cfg.play_order == PlayOrder::Mode::kRandom
                  ? PlayOrder::random(derive_seed(cfg.seed, kOrderStream, index))
                  : PlayOrder::ascending();
          for (std::size_t a = 0; a < n_alpha; ++a) {
            const std::vector<bool> mask = select_deviators(inst.n(), cfg.alphas[a], dev_seed);
            for (std::size_t h = 0; h < cfg.heuristics.size(); ++h) {
              Assignment assign = Assignment::uniform(inst.n(), Heuristic::kOptWelfare);
              for (int i = 0; i < inst.n(); ++i) {
                if (mask[i]) assign.heuristics[i] = cfg.heuristics[h];
              }
              const ContributionProfile prof = play(inst, assign, s.pstar.subset, xbar, order);
              const Outcome out = evaluate(inst, prof);
              InstanceMetrics& m = metrics[k * n_cells + h * n_alpha + a];
              m.sw = sw_n(out, s.pstar.welfare);
              const auto au = au_n(inst, out, baseline);
              double sum = 0.0;
              int defined = 0;
              for (const auto& v : au) {
                if (v) {
                  sum += *v;
                  ++defined;
                } else {
                  ++m.excluded_agents;
                }
              }
              if (defined) m.au = sum / defined;
              // Deviation classes follow the mask, so the control row
              // (everyone on OptWelfare) still splits along it.
              const DeviationSplit split = deviation_split(au, mask);
              m.dev = split.deviators;
              m.nondev = split.non_deviators;
            }
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    };
    const int workers = std::min(threads, count);
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    // Accumulate in instance order so the result does not depend on threads.
    for (int k = 0; k < count; ++k) {
      for (std::size_t c = 0; c < n_cells; ++c) {
        const InstanceMetrics& m = metrics[k * n_cells + c];
        CellAcc& a = acc[c];
        a.excluded_agents += m.excluded_agents;
        if (!m.sw) {
          ++a.excluded;
          continue;
        }
        a.sw.add(*m.sw);
        if (m.au) a.au.add(*m.au);
        if (m.dev) a.dev.add(*m.dev);
        if (m.nondev) a.nondev.add(*m.nondev);
      }
    }
  }

  ExperimentReport report;
  report.seed = cfg.seed;
  report.config_hash = hex64(fnv1a(describe(cfg)));
  for (std::size_t h = 0; h < cfg.heuristics.size(); ++h) {
    for (std::size_t a = 0; a < n_alpha; ++a) {
      const CellAcc& c = acc[h * n_alpha + a];
      CellResult r;
      r.heuristic = cfg.heuristics[h];
      r.alpha = cfg.alphas[a];
      r.instances = static_cast<int>(c.sw.count());
      r.sw_n_mean = c.sw.mean();
      r.sw_n_se = c.sw.se();
      r.au_n_mean = c.au.mean();
      r.au_n_se = c.au.se();
      if (c.dev.count()) r.au_n_dev_mean = c.dev.mean();
      if (c.nondev.count()) r.au_n_nondev_mean = c.nondev.mean();
      r.excluded_cells = c.excluded;
      r.excluded_agents = c.excluded_agents;
      report.cells.push_back(r);
    }
  }
  return report;
}

void write_csv(const ExperimentReport& report, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const CellResult& c : report.cells) {
    out << heuristic_name(c.heuristic) << "," << num(c.alpha) << "," << c.instances
        << "," << num(c.sw_n_mean) << "," << num(c.sw_n_se) << "," << num(c.au_n_mean)
        << "," << num(c.au_n_se) << "," << opt_num(c.au_n_dev_mean) << ","
        << opt_num(c.au_n_nondev_mean) << "," << c.excluded_cells << "," << report.seed
        << "\n";
  }
}

void emit_series(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<Heuristic> seen;
  for (const CellResult& c : report.cells) {
    if (std::find(seen.begin(), seen.end(), c.heuristic) == seen.end()) {
      seen.push_back(c.heuristic);
    }
  }
  for (Heuristic h : seen) {
    nlohmann::json x = nlohmann::json::array();
    nlohmann::json sw = nlohmann::json::array(), au = nlohmann::json::array(),
                   dev = nlohmann::json::array(), nondev = nlohmann::json::array();
    for (const CellResult& c : report.cells) {
      if (c.heuristic != h) continue;
      x.push_back(c.alpha);
      sw.push_back(c.sw_n_mean);
      au.push_back(c.au_n_mean);
      dev.push_back(c.au_n_dev_mean ? nlohmann::json(*c.au_n_dev_mean) : nlohmann::json());
      nondev.push_back(c.au_n_nondev_mean ? nlohmann::json(*c.au_n_nondev_mean)
                                          : nlohmann::json());
    }
    const std::pair<const char*, nlohmann::json*> metrics[] = {
        {"sw_n", &sw}, {"au_n", &au}, {"au_n_dev", &dev}, {"au_n_nondev", &nondev}};
    for (const auto& [name, ys] : metrics) {
      const auto path = dir / (std::string(heuristic_name(h)) + "_" + name + ".json");
      std::ofstream f(path);
      if (!f) throw InputError("cannot write " + path.string());
      f << nlohmann::json{{"x", x}, {"y", *ys}}.dump() << "\n";
    }
  }
}

}  // namespace ccfund
