#ifndef TRICHROME_RATIONAL_HPP
#define TRICHROME_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trichrome {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class parse_error : public std::runtime_error {
public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

class domain_error : public std::runtime_error {
public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

class resource_error : public std::runtime_error {
public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// Counts exact-arithmetic operations so cost-shape claims can be checked in tests.
struct OpCounter {
  std::uint64_t adds = 0;
  std::uint64_t muls = 0;

  void reset() { adds = muls = 0; }
  std::uint64_t total() const { return adds + muls; }
};

/// Parses "p/q" or a plain integer, with optional sign. Throws parse_error.
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(Int(text));
    }
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) throw parse_error("zero denominator in rational: " + text);
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception&) {
    throw parse_error("malformed rational: " + text);
  }
}

inline std::string rational_to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Floor of a rational as an exact integer.
inline Int floor_rational(const Rational& q) {
  Int n = numerator(q), d = denominator(q);
  Int quot = n / d;
  if (n % d != 0 && n < 0) --quot;
  return quot;
}

/// Ceiling of a rational as an exact integer.
inline Int ceil_rational(const Rational& q) {
  Int n = numerator(q), d = denominator(q);
  Int quot = n / d;
  if (n % d != 0 && n > 0) ++quot;
  return quot;
}

inline std::int64_t to_int64(const Int& v) { return static_cast<std::int64_t>(v); }

}  // namespace trichrome

#endif  // TRICHROME_RATIONAL_HPP
