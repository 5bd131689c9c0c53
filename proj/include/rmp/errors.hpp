// Copyright 2026 The rmp Authors
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

#ifndef RMP_ERRORS_HPP_
#define RMP_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rmp {

// Numeric values are part of the C API (rmp_c.h mirrors them).
enum class ErrorCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kParse = 2,
  kNonTransient = 3,
  kLpInfeasible = 4,
  kLpUnbounded = 5,
  kNonConvergent = 6,
  kRetryExhausted = 7,
  kTooManyBinaries = 8,
  kStateSpaceTooLarge = 9,
  kLimitReached = 10,
  kInternal = 11,
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kNonTransient: return "NonTransient";
    case ErrorCode::kLpInfeasible: return "Infeasible";
    case ErrorCode::kLpUnbounded: return "Unbounded";
    case ErrorCode::kNonConvergent: return "NonConvergent";
    case ErrorCode::kRetryExhausted: return "RetryExhausted";
    case ErrorCode::kTooManyBinaries: return "TooManyBinaries";
    case ErrorCode::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::kLimitReached: return "LimitReached";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class NonTransientError : public Error {
 public:
  explicit NonTransientError(std::vector<int> states)
      : Error(ErrorCode::kNonTransient,
              "MDP is not transient (" + std::to_string(states.size()) +
                  " states retain mass)"),
        states_(std::move(states)) {}
  const std::vector<int>& states() const { return states_; }

 private:
  std::vector<int> states_;
};

}  // namespace rmp

#endif  // RMP_ERRORS_HPP_
