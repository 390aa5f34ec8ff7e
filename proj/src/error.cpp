// Copyright 2026 The gwasverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gwv/error.hpp"

namespace gwv {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
      return "usage";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kDomain:
      return "domain";
    case ErrorCode::kEmptyGroup:
      return "empty-group";
    case ErrorCode::kLengthMismatch:
      return "length-mismatch";
    case ErrorCode::kInfeasibleConfig:
      return "infeasible-config";
    case ErrorCode::kDegenerateTable:
      return "degenerate-table";
    case ErrorCode::kUnidentifiable:
      return "unidentifiable";
    case ErrorCode::kUndefinedDeviation:
      return "undefined-deviation";
    case ErrorCode::kOffsetRange:
      return "offset-range";
    case ErrorCode::kCalibrationFailure:
      return "calibration-failure";
    case ErrorCode::kMismatch:
      return "mismatch";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gwv
