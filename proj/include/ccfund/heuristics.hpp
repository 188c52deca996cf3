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

#ifndef CCFUND_HEURISTICS_HPP_
#define CCFUND_HEURISTICS_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "ccfund/model.hpp"

namespace ccfund {

enum class Heuristic {
  kSymmetric,
  kWeighted,
  kGreedyTheta,
  kGreedyVartheta,
  kOptWelfare,
};

// symmetric | weighted | greedy-theta | greedy-vartheta | opt-welfare
std::string_view heuristic_name(Heuristic h);
Heuristic parse_heuristic(std::string_view name);

inline constexpr Heuristic kDeviantHeuristics[] = {
    Heuristic::kSymmetric, Heuristic::kWeighted, Heuristic::kGreedyTheta,
    Heuristic::kGreedyVartheta};

struct Assignment {
  std::vector<Heuristic> heuristics;  // one per agent

  static Assignment uniform(int n, Heuristic h) {
    return {std::vector<Heuristic>(n, h)};
  }
  bool is_deviator(int i) const { return heuristics[i] != Heuristic::kOptWelfare; }
  std::vector<bool> deviator_mask() const;
};

// What agent i would like to contribute to each project before clamping.
// pstar/thresholds are required by OptWelfare and the greedy rules.
std::vector<double> intent(Heuristic h, const Instance& instance, int agent,
                           const ProjectSet& pstar, const Matrix& thresholds);

struct PlayOrder {
  enum class Mode { kAscending, kRandom };
  Mode mode = Mode::kAscending;
  std::uint64_t seed = 0;

  static PlayOrder ascending() { return {}; }
  static PlayOrder random(std::uint64_t seed) { return {Mode::kRandom, seed}; }
};

// Plays intents out project by project (index order), agents in `order`.
// Each agent gives min(intent, remaining need), so no project is overfunded.
ContributionProfile play(const Instance& instance, const Assignment& assignment,
                         const ProjectSet& pstar, const Matrix& thresholds,
                         const PlayOrder& order = PlayOrder::ascending());

}  // namespace ccfund

#endif  // CCFUND_HEURISTICS_HPP_
