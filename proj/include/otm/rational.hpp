// Copyright 2026 The otm-sdp Authors
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

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "otm/errors.hpp"

namespace otm {

/// Arbitrary-precision rational in canonical reduced form (denominator > 0).
class ExactRational {
 public:
  using Int = boost::multiprecision::cpp_int;
  using Rep = boost::multiprecision::cpp_rational;

  ExactRational() = default;
  ExactRational(std::int64_t v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  explicit ExactRational(const Int& v) : q_(v) {}
  ExactRational(const Int& num, const Int& den) {
    if (den == 0) throw InvalidArgument("zero denominator");
    q_ = Rep(num, den);
  }

  static ExactRational pow2(unsigned e) { return ExactRational(Int(1) << e); }

  static ExactRational pow(const ExactRational& base, unsigned e) {
    ExactRational acc(1);
    for (unsigned i = 0; i < e; ++i) acc *= base;
    return acc;
  }

  static ExactRational binomial(unsigned n, unsigned k) {
    if (k > n) return ExactRational(0);
    Int acc = 1;
    for (unsigned i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return ExactRational(acc);
  }

  Int numerator() const { return boost::multiprecision::numerator(q_); }
  Int denominator() const { return boost::multiprecision::denominator(q_); }
  bool is_integer() const { return denominator() == 1; }

  /// Integer value; throws if the number is not integral.
  Int to_integer() const {
    if (!is_integer()) throw InvalidArgument("rational is not an integer: " + str());
    return numerator();
  }

  double to_double() const { return q_.convert_to<double>(); }

  /// "p/q", or "p" when integral.
  std::string str() const {
    return is_integer() ? numerator().str() : numerator().str() + "/" + denominator().str();
  }

  ExactRational& operator+=(const ExactRational& o) { q_ += o.q_; return *this; }
  ExactRational& operator-=(const ExactRational& o) { q_ -= o.q_; return *this; }
  ExactRational& operator*=(const ExactRational& o) { q_ *= o.q_; return *this; }
  ExactRational& operator/=(const ExactRational& o) {
    if (o.q_ == 0) throw InvalidArgument("division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }
  friend ExactRational operator-(ExactRational a) { a.q_ = -a.q_; return a; }

  friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    if (a.q_ < b.q_) return std::strong_ordering::less;
    if (a.q_ > b.q_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactRational& r) { return os << r.str(); }

 private:
  Rep q_{0};
};

}  // namespace otm
