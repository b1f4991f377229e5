// Copyright 2026 The Authors.
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

#ifndef BFM_RATIONAL_HPP_
#define BFM_RATIONAL_HPP_

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace bfm {

// Exact arbitrary-precision rational. Every weight, cost, bid, budget and
// payment in the library is one of these.
using Rational = boost::multiprecision::mpq_rational;

// Malformed user input. `field` names the offending JSON path or argument
// when one is known.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& message, std::string field = {})
      : std::invalid_argument(field.empty() ? message
                                            : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A configured size cap (exhaustive enumeration) was exceeded.
class CapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Parses "p/q", "p" or a finite decimal such as "2.5". Signs are accepted;
// callers enforce positivity where the domain requires it.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw InputError("not a rational number: \"" + std::string(text) + "\"");
  };
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
    --end;
  std::string_view body = text.substr(begin, end - begin);
  if (body.empty()) return fail();

  auto is_integer = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  auto to_integer = [](std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return Rational(boost::multiprecision::mpz_int(std::string(s)));
  };

  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!is_integer(num) || !is_integer(den) || den.front() == '-' ||
        den.front() == '+')
      return fail();
    Rational d = to_integer(den);
    if (d == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
    return to_integer(num) / d;
  }
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    std::string_view magnitude = whole;
    if (!magnitude.empty() && (magnitude.front() == '-' || magnitude.front() == '+'))
      magnitude.remove_prefix(1);
    if (frac.empty() || !is_integer(frac) || frac.front() == '-' ||
        frac.front() == '+' || (!magnitude.empty() && !is_integer(magnitude)))
      return fail();
    Rational scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational value = (magnitude.empty() ? Rational(0) : to_integer(magnitude)) +
                     to_integer(frac) / scale;
    return negative ? Rational(-value) : value;
  }
  if (!is_integer(body)) return fail();
  return to_integer(body);
}

// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_fraction_string(const Rational& value) {
  return value.str();
}

// Display-only rendering with `significant` significant digits.
inline std::string to_decimal_string(const Rational& value, int significant = 12) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", significant,
                value.convert_to<double>());
  return buffer;
}

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

// Buck-per-bang rate or payment-per-weight price. Either a nonnegative
// rational or the +infinity sentinel used for bb(0) and b/0.
class Rate {
 public:
  Rate() : infinite_(true) {}
  explicit Rate(Rational value) : infinite_(false), value_(std::move(value)) {}

  static Rate infinity() { return Rate(); }

  bool is_infinite() const { return infinite_; }
  // Precondition: !is_infinite().
  const Rational& value() const {
    if (infinite_) throw std::logic_error("value() of an infinite rate");
    return value_;
  }

  friend bool operator==(const Rate& a, const Rate& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const Rate& a, const Rate& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }

  std::string str() const { return infinite_ ? "inf" : to_fraction_string(value_); }

 private:
  bool infinite_;
  Rational value_;
};

inline const Rate& min(const Rate& a, const Rate& b) { return b < a ? b : a; }

// numerator / denominator with x/0 read as +infinity.
inline Rate ratio_or_infinity(const Rational& numerator, const Rational& denominator) {
  if (denominator == 0) return Rate::infinity();
  return Rate(numerator / denominator);
}

}  // namespace bfm

#endif  // BFM_RATIONAL_HPP_
