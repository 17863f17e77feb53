// Copyright 2026 The TetraDec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef TETRADEC_ERROR_HPP_
#define TETRADEC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tetradec {

enum class ErrorCode {
  kInvalidArgument = 1,
  kShapeError,
  kShapeMismatch,
  kDegenerateGeometry,
  kInvalidAnnotation,
  kEmptyMask,
  kDegenerateMask,
  kBadGtCardinality,
  kConfigInfeasible,
  kMalformedInput,
  kIoError,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure raised by the core carries one of the codes above so the C
// API can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the file-format readers. Carries the offending file and the byte
// offset where parsing failed.
class MalformedInput : public Error {
 public:
  MalformedInput(const std::string& file, size_t offset,
                 const std::string& what)
      : Error(ErrorCode::kMalformedInput,
              file + ": byte " + std::to_string(offset) + ": " + what),
        file_(file),
        offset_(offset) {}

  const std::string& file() const { return file_; }
  size_t offset() const { return offset_; }

 private:
  std::string file_;
  size_t offset_;
};

}  // namespace tetradec

#endif  // TETRADEC_ERROR_HPP_
