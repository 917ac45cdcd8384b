// Copyright 2026 The storyeval Authors.
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

#ifndef STORYEVAL_ERRORS_HPP_
#define STORYEVAL_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace storyeval {

enum class ErrorCode {
  kEmptyText,
  kIdMismatch,
  kArityMismatch,
  kNoBoxes,
  kEmptyCorpus,
  kThresholdMissing,
  kThresholdMismatch,
  kDegenerateSample,
  kSampleTooLarge,
  kUnknownOption,
  kParseError,
  kSchemaVersionMismatch,
  kSchemaViolation,
  kMissingBundle,
  kIncompleteRun,
  kDuplicateJudgment,
  kUnknownAnnotator,
  kUnknownTask,
  kExhaustedTasks,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Schema version mismatches and structural validation failures form one class.
inline bool IsSchemaError(ErrorCode code) {
  return code == ErrorCode::kSchemaVersionMismatch ||
         code == ErrorCode::kSchemaViolation;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace storyeval

#endif  // STORYEVAL_ERRORS_HPP_
