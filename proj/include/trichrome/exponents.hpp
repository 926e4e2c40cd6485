#ifndef TRICHROME_EXPONENTS_HPP
#define TRICHROME_EXPONENTS_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <array>
#include <string>

#include "trichrome/rational.hpp"

namespace trichrome {

/// Parses "1.7215", "0.5", "3", or "p/q" into an exact rational.
inline Rational parse_decimal_rational(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return parse_rational(s);
  std::string whole = s.substr(0, dot);
  std::string frac = s.substr(dot + 1);
  if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
    throw parse_error("bad decimal literal '" + s + "'");
  bool neg = !whole.empty() && whole[0] == '-';
  if (neg) whole = whole.substr(1);
  if (whole.empty()) whole = "0";
  if (whole.find_first_not_of("0123456789") != std::string::npos)
    throw parse_error("bad decimal literal '" + s + "'");
  Int den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  Rational v = Rational(Int(whole)) + Rational(Int(frac), den);
  return neg ? -v : v;
}

struct ExponentReport {
  double ta = 0, tb = 0, tc = 0, td = 0, te = 0;
  double max_base = 0;       // overall bound: max of the five
  double certified_error = 0;  // worst disagreement between the two precisions
};

namespace detail {

using Real50 = boost::multiprecision::cpp_bin_float_50;
using Real100 = boost::multiprecision::cpp_bin_float_100;

template <class Real>
Real binary_entropy(const Real& p) {
  if (p == 0 || p == 1) return Real(0);
  if (!(p > 0 && p < 1)) throw domain_error("entropy argument outside [0,1]");
  using std::log;
  return (-p * log(p) - (1 - p) * log(1 - p)) / log(Real(2));
}

template <class Real>
Real to_real(const Rational& q) {
  return Real(numerator(q)) / Real(denominator(q));
}

/// Per-case bases of the running-time bounds t^n:
///   t_a = t3
///   t_b = 2^{H(6 delta)} * t4^{1 - 6 delta}
///   t_c = 2^{H(1/2 - delta)}
///   t_d = (2 * 2^{H[(1/6 + 7 delta/3) / (1/2 + delta)]})^{(1/2 + delta)(1 + eps)}
///   t_e = 2^{H(1/2 - delta)(1 + eps)}
template <class Real>
std::array<Real, 5> exponent_bases(const Rational& delta, const Rational& epsilon,
                                   const Rational& t3, const Rational& t4) {
  using std::pow;
  Real dl = to_real<Real>(delta);
  Real ep = to_real<Real>(epsilon);
  Real two(2), half = Real(1) / 2;
  Real ta = to_real<Real>(t3);
  Real tb = pow(two, binary_entropy(6 * dl)) * pow(to_real<Real>(t4), 1 - 6 * dl);
  Real tc = pow(two, binary_entropy(half - dl));
  Real inner = (Real(1) / 6 + Real(7) * dl / 3) / (half + dl);
  Real td = pow(two * pow(two, binary_entropy(inner)), (half + dl) * (1 + ep));
  Real te = pow(two, binary_entropy(half - dl) * (1 + ep));
  return {ta, tb, tc, td, te};
}

}  // namespace detail

/// Evaluates the five case bases at the given parameters, in 50- and
/// 100-digit arithmetic; the report carries the worst cross-precision
/// disagreement as its certificate. Requires 0 < delta < 1/12 (so 6*delta
/// stays below 1/2) and epsilon >= 0.
inline ExponentReport exponent_report(const Rational& delta, const Rational& epsilon,
                                      const Rational& t3, const Rational& t4) {
  if (!(delta > 0 && delta < Rational(1, 12))) throw domain_error("delta must be in (0, 1/12)");
  if (epsilon < 0) throw domain_error("epsilon must be nonnegative");
  if (!(t3 > 1 && t4 > 1)) throw domain_error("base exponents must exceed 1");
  auto lo = detail::exponent_bases<detail::Real50>(delta, epsilon, t3, t4);
  auto hi = detail::exponent_bases<detail::Real100>(delta, epsilon, t3, t4);
  ExponentReport r;
  double* slots[5] = {&r.ta, &r.tb, &r.tc, &r.td, &r.te};
  for (int i = 0; i < 5; ++i) {
    double a = static_cast<double>(lo[i]);
    double b = static_cast<double>(hi[i]);
    using std::abs;
    r.certified_error = std::max(r.certified_error, std::abs(a - b));
    *slots[i] = b;
    r.max_base = std::max(r.max_base, b);
  }
  if (r.certified_error > 1e-6) throw domain_error("precision certificate failed");
  return r;
}

}  // namespace trichrome

#endif  // TRICHROME_EXPONENTS_HPP
