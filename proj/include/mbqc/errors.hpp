// Copyright 2019-2024 Cambridge Quantum Computing
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

#pragma once

#include <stdexcept>
#include <string>

namespace mbqc {

/** Malformed or unsupported user input. */
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string &msg) : std::runtime_error(msg) {}
};

/** A structural guarantee of the pipeline did not hold. */
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string &msg) : std::logic_error(msg) {}
};

}  // namespace mbqc
