#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace algcpd {

/// Exact rational scalar over arbitrary-precision integers.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline Rational factorial(unsigned n)
{
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return Rational(r);
}

inline Rational binomial(unsigned n, unsigned k)
{
  if (k > n) return Rational(0);
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i)
  {
    r *= (n - k + i);
    r /= i;
  }
  return Rational(r);
}

inline double to_double(const Rational& q)
{
  return static_cast<double>(q);
}

/// Exact conversion of a finite binary double.
inline Rational from_double(double x)
{
  return Rational(x);
}

/// Renders as `p` or `p/q` with q > 0.
inline std::string to_string(const Rational& q)
{
  const BigInt& num = boost::multiprecision::numerator(q);
  const BigInt& den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

} // namespace algcpd
