// Copyright 2026 The flowsieve Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOWSIEVE_ERROR_HPP_
#define FLOWSIEVE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace flowsieve {

// Numeric values double as process exit codes and C API status codes.
enum class ErrorKind : int {
  kUsage = 1,     // bad parameters or preconditions supplied by the caller
  kData = 2,      // malformed or unsuitable input data
  kInternal = 3,  // invariant violation inside the library
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& msg) { throw Error(ErrorKind::kUsage, msg); }
[[noreturn]] inline void throw_data(const std::string& msg) { throw Error(ErrorKind::kData, msg); }
[[noreturn]] inline void throw_internal(const std::string& msg) {
  throw Error(ErrorKind::kInternal, msg);
}

}  // namespace flowsieve

#endif  // FLOWSIEVE_ERROR_HPP_
