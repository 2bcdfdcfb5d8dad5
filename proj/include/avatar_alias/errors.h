// Copyright 2026 The Avatar Alias Authors.
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

#ifndef AVATAR_ALIAS_ERRORS_H_
#define AVATAR_ALIAS_ERRORS_H_

#include <stdexcept>
#include <string>

namespace avatar_alias {

// Malformed or inconsistent input data (files, matrices, datasets).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter outside its documented range.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace avatar_alias

#endif  // AVATAR_ALIAS_ERRORS_H_
