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

#include "storyeval/errors.hpp"

namespace storyeval {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kNoBoxes: return "NoBoxes";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kThresholdMissing: return "ThresholdMissing";
    case ErrorCode::kThresholdMismatch: return "ThresholdMismatch";
    case ErrorCode::kDegenerateSample: return "DegenerateSample";
    case ErrorCode::kSampleTooLarge: return "SampleTooLarge";
    case ErrorCode::kUnknownOption: return "UnknownOption";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kMissingBundle: return "MissingBundle";
    case ErrorCode::kIncompleteRun: return "IncompleteRun";
    case ErrorCode::kDuplicateJudgment: return "DuplicateJudgment";
    case ErrorCode::kUnknownAnnotator: return "UnknownAnnotator";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kExhaustedTasks: return "ExhaustedTasks";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace storyeval
