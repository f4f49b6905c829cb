// Copyright 2026 qvar developers
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

#ifndef QVAR_ERROR_HPP
#define QVAR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qvar {

// Error categories shared by the whole library. The numeric values double as
// process exit codes for the CLI and as status codes in the C API, so keep
// them stable.
enum class ErrorCode {
  kInvalidArgument = 2,
  kCapacityExceeded = 3,
  kIo = 4,
  kInsufficientData = 5,
  kInternal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

[[noreturn]] inline void throw_capacity(const std::string& message) {
  throw Error(ErrorCode::kCapacityExceeded, message);
}

[[noreturn]] inline void throw_io(const std::string& message) {
  throw Error(ErrorCode::kIo, message);
}

[[noreturn]] inline void throw_insufficient(const std::string& message) {
  throw Error(ErrorCode::kInsufficientData, message);
}

[[noreturn]] inline void throw_internal(const std::string& message) {
  throw Error(ErrorCode::kInternal, message);
}

}  // namespace qvar

#endif  // QVAR_ERROR_HPP
