// Copyright 2026 The gmoe Authors
//
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gmoe {

enum class ErrorKind {
  InvalidDimension,
  DomainError,
  CutoffTooSmall,
  NotPositive,
  ShapeError,
  GridError,
  UnphysicalState,
  SpecError,
  StepError,
  ConstraintError,
  ResourceError,
  InvalidState,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in the library is reported through this exception. The kind
/// is stable and is what the CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::CutoffTooSmall: return "cutoff-too-small";
    case ErrorKind::NotPositive: return "not-positive";
    case ErrorKind::ShapeError: return "shape-error";
    case ErrorKind::GridError: return "grid-error";
    case ErrorKind::UnphysicalState: return "unphysical-state";
    case ErrorKind::SpecError: return "spec-error";
    case ErrorKind::StepError: return "step-error";
    case ErrorKind::ConstraintError: return "constraint-error";
    case ErrorKind::ResourceError: return "resource-error";
    case ErrorKind::InvalidState: return "invalid-state";
  }
  return "unknown";
}

}  // namespace gmoe
