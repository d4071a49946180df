#pragma once

#include "algcpd/algebra/text.hpp"

namespace algcpd::test {

inline RationalFunction s(int k = 1) { return RationalFunction::s_power(k); }

inline RationalFunction rf(std::initializer_list<Rational> num,
                           std::initializer_list<Rational> den = {1})
{
  return RationalFunction(Polynomial(num), Polynomial(den));
}

} // namespace algcpd::test

#include "algcpd/algebra/diff_operator.hpp"

#include <random>

namespace algcpd::test {

/// Small random exact objects for the property suites.
class RandomAlgebra
{
public:
  explicit RandomAlgebra(std::uint64_t seed) : mRng(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(mRng); }

  Rational scalar()
  {
    int n = 0;
    while (n == 0) n = integer(-6, 6);
    return Rational(n) / integer(1, 4);
  }

  Polynomial polynomial(int maxDeg)
  {
    const int deg = integer(0, maxDeg);
    std::vector<Rational> c(static_cast<std::size_t>(deg + 1));
    for (auto& x : c) x = Rational(integer(-4, 4));
    c.back() = scalar();
    return Polynomial(std::move(c));
  }

  /// Denominators are either s^k or a low-degree polynomial, numerator
  /// degree <= maxDeg.
  RationalFunction rational(int maxDeg = 3)
  {
    Polynomial den;
    switch (integer(0, 3))
    {
    case 0: den = Polynomial::constant(1); break;
    case 1: den = Polynomial::monomial(1, static_cast<unsigned>(integer(1, maxDeg))); break;
    default:
      den = polynomial(std::min(maxDeg, 2));
      if (den.is_constant()) den = Polynomial({Rational(integer(1, 3)), 1});
      break;
    }
    return RationalFunction(polynomial(maxDeg), den);
  }

  /// Denominator built from the factor pool {s, s+1, s-2, s^2+1} with total
  /// degree <= maxDeg, so spans share factors the way model bases do.
  RationalFunction pooled_rational(int maxDeg = 4)
  {
    static const Polynomial pool[] = {Polynomial({0, 1}), Polynomial({1, 1}),
                                      Polynomial({-2, 1}), Polynomial({1, 0, 1})};
    Polynomial den = Polynomial::constant(1);
    const int target = integer(0, maxDeg);
    while (den.degree() < target)
    {
      const Polynomial& f = pool[integer(0, 3)];
      if (den.degree() + f.degree() > maxDeg) break;
      den = den * f;
    }
    return RationalFunction(polynomial(maxDeg), den);
  }

  DiffOperator op(unsigned maxOrder = 4, int maxDeg = 3, int maxTerms = 2)
  {
    DiffOperator::Terms t;
    const int n = integer(1, maxTerms);
    for (int i = 0; i < n; ++i)
      t[static_cast<unsigned>(integer(0, static_cast<int>(maxOrder)))] = rational(maxDeg);
    return DiffOperator(std::move(t));
  }

private:
  std::mt19937_64 mRng;
};

} // namespace algcpd::test
