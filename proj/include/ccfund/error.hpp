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

#ifndef CCFUND_ERROR_HPP_
#define CCFUND_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ccfund {

// Base for every error raised by the library. The CLI maps the subclasses
// onto exit codes: InputError -> 2, everything numeric -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad dimensions, violated invariants,
// out-of-range indices, unparseable files.
class InputError : public Error {
 public:
  using Error::Error;
};

// A contribution profile spends more than an agent's budget.
class BudgetViolation : public InputError {
 public:
  BudgetViolation(int agent, double spent, double budget);

  int agent() const { return agent_; }
  double spent() const { return spent_; }
  double budget() const { return budget_; }

 private:
  int agent_;
  double spent_;
  double budget_;
};

// Root finding failed, an enumeration/table guard tripped, or a sampler ran
// out of attempts.
class NumericError : public Error {
 public:
  using Error::Error;
};

class GuardExceeded : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace ccfund

#endif  // CCFUND_ERROR_HPP_
