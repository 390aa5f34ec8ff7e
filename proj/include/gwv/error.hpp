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

#ifndef GWV_ERROR_HPP_
#define GWV_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gwv {

// Stable machine-readable failure codes. The CLI prints them as
// `error[<code>]: message` and tests assert on them.
enum class ErrorCode {
  kUsage,
  kIo,
  kParse,
  kDomain,
  kEmptyGroup,
  kLengthMismatch,
  kInfeasibleConfig,
  kDegenerateTable,
  kUnidentifiable,
  kUndefinedDeviation,
  kOffsetRange,
  kCalibrationFailure,
  kMismatch,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace gwv

#endif  // GWV_ERROR_HPP_
