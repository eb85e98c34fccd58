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

#include <json.hpp>
#include <string>

namespace mbqc {

/** Exact angle num/den * pi, reduced and normalised into [0, 2pi). */
class Angle {
 public:
  Angle() = default;
  Angle(long num, long den);

  long num() const { return num_; }
  long den() const { return den_; }
  double radians() const;

  Angle operator-() const { return Angle(-num_, den_); }
  Angle operator+(const Angle &o) const;
  bool operator==(const Angle &o) const = default;

  /** 0 or pi */
  bool is_multiple_of_pi() const { return den_ == 1; }
  /** pi/2 or 3pi/2 */
  bool is_odd_half_pi() const { return den_ == 2; }

  std::string str() const;

 private:
  long num_ = 0;
  long den_ = 1;
};

nlohmann::json angle_to_json(const Angle &a);
Angle angle_from_json(const nlohmann::json &j);

}  // namespace mbqc
