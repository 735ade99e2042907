// Copyright 2026 The symfl Authors
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

#ifndef SYMFL_ERRORS_H_
#define SYMFL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace symfl {

// Invalid input data or configuration: bad survey record, unembeddable
// phrase, out-of-range parameter. Maps to CLI exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or unreadable file, failed write. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace symfl

#endif  // SYMFL_ERRORS_H_
