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

#include "mbqc/angle.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "mbqc/errors.hpp"

namespace mbqc {

Angle::Angle(long num, long den) {
  if (den == 0) throw InputError("angle with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  const long period = 2 * den;
  num %= period;
  if (num < 0) num += period;
  num_ = num;
  den_ = den;
}

double Angle::radians() const {
  return std::numbers::pi * static_cast<double>(num_) /
         static_cast<double>(den_);
}

Angle Angle::operator+(const Angle &o) const {
  return Angle(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

std::string Angle::str() const {
  if (num_ == 0) return "0";
  std::string s = num_ == 1 ? "pi" : std::to_string(num_) + "pi";
  if (den_ != 1) s += "/" + std::to_string(den_);
  return s;
}

nlohmann::json angle_to_json(const Angle &a) {
  return {{"num", a.num()}, {"den", a.den()}};
}

Angle angle_from_json(const nlohmann::json &j) {
  try {
    if (j.is_number_integer()) return Angle(j.get<long>(), 1);
    return Angle(j.at("num").get<long>(), j.value("den", 1L));
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed angle: ") + e.what());
  }
}

}  // namespace mbqc
