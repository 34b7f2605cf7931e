/* Copyright 2026 The sarcgen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace sarc {

// Error categories double as CLI exit codes.
enum class ErrorKind : int {
  kConfig = 2,
  kData = 3,
  kDivergence = 4,
  kIo = 5,
  kTransport = 6,
  kState = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::kConfig:
        return 2;
      case ErrorKind::kDivergence:
        return 4;
      default:
        return 3;
    }
  }

 private:
  ErrorKind kind_;
};

inline Error config_error(const std::string& what) {
  return Error(ErrorKind::kConfig, what);
}
inline Error data_error(const std::string& what) {
  return Error(ErrorKind::kData, what);
}
inline Error divergence_error(const std::string& what) {
  return Error(ErrorKind::kDivergence, what);
}
inline Error io_error(const std::string& what) {
  return Error(ErrorKind::kIo, what);
}
inline Error state_error(const std::string& what) {
  return Error(ErrorKind::kState, what);
}

}  // namespace sarc
