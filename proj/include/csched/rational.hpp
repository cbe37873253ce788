#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace csched {

// All quantities (demands, durations, delays, windows) are exact nonnegative
// rationals so that ratio certificates and oracle comparisons need no
// tolerances. Doubles appear only in reports.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat make_rat(std::int64_t num, std::int64_t den = 1) {
  return Rat(Int(num), Int(den));
}

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integral(const Rat& r) { return rat_den(r) == 1; }

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

// Floor of a nonnegative rational as an Int.
inline Int rat_floor(const Rat& r) { return rat_num(r) / rat_den(r); }

inline std::optional<std::int64_t> to_int64(const Rat& r) {
  if (!is_integral(r)) return std::nullopt;
  const Int& n = rat_num(r);
  if (n < std::numeric_limits<std::int64_t>::min() ||
      n > std::numeric_limits<std::int64_t>::max()) {
    return std::nullopt;
  }
  return n.template convert_to<std::int64_t>();
}

// "p", "-p", "p/q" or a plain decimal like "0.25". Returns nullopt when the
// text is not a number.
inline std::optional<Rat> parse_rat(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  auto read_digits = [&](Int& out) -> bool {
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) return false;
    out = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      out = out * 10 + (text[pos] - '0');
      ++pos;
    }
    return true;
  };
  Int whole;
  if (!read_digits(whole)) return std::nullopt;
  Rat value(whole);
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    Int den;
    if (!read_digits(den) || pos != text.size() || den == 0) return std::nullopt;
    value = Rat(whole, den);
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    Int frac = 0, scale = 1;
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) return std::nullopt;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      frac = frac * 10 + (text[pos] - '0');
      scale *= 10;
      ++pos;
    }
    if (pos != text.size()) return std::nullopt;
    value = Rat(whole) + Rat(frac, scale);
  } else if (pos != text.size()) {
    return std::nullopt;
  }
  return negative ? Rat(-value) : value;
}

inline Rat to_rat(const Rat& v) { return v; }
inline Rat to_rat(std::int64_t v) { return Rat(v); }

// "p" when integral, "p/q" otherwise; round-trips exactly through parse_rat.
inline std::string rat_to_string(const Rat& r) {
  std::string s = rat_num(r).str();
  if (!is_integral(r)) {
    s += '/';
    s += rat_den(r).str();
  }
  return s;
}

}  // namespace csched
