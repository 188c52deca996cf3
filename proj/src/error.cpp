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

#include "ccfund/error.hpp"

#include <sstream>

namespace ccfund {
namespace {

std::string budget_message(int agent, double spent, double budget) {
  std::ostringstream os;
  os.precision(17);
  os << "agent " << agent << " contributes " << spent << " but has budget "
     << budget;
  return os.str();
}

}  // namespace

BudgetViolation::BudgetViolation(int agent, double spent, double budget)
    : InputError(budget_message(agent, spent, budget)),
      agent_(agent),
      spent_(spent),
      budget_(budget) {}

}  // namespace ccfund
