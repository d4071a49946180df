#pragma once

#include "algcpd/algebra/scalar.hpp"
#include "algcpd/error.hpp"

#include <algorithm>
#include <initializer_list>
#include <utility>
#include <vector>

namespace algcpd {

/// Univariate polynomial over the rationals, coefficients stored by degree.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and reports `kZeroDegree`.
class Polynomial
{
public:
  static constexpr int kZeroDegree = -1;

  Polynomial() = default;

  Polynomial(std::vector<Rational> coeffs) : mCoeffs(std::move(coeffs))
  {
    trim();
  }

  Polynomial(std::initializer_list<Rational> coeffs)
      : mCoeffs(coeffs.begin(), coeffs.end())
  {
    trim();
  }

  static Polynomial constant(const Rational& c) { return Polynomial({c}); }

  static Polynomial monomial(const Rational& c, unsigned degree)
  {
    std::vector<Rational> v(degree + 1, Rational(0));
    v[degree] = c;
    return Polynomial(std::move(v));
  }

  /// The indeterminate itself.
  static Polynomial s() { return monomial(Rational(1), 1); }

  int degree() const { return static_cast<int>(mCoeffs.size()) - 1; }
  bool is_zero() const { return mCoeffs.empty(); }
  bool is_constant() const { return mCoeffs.size() <= 1; }

  const std::vector<Rational>& coefficients() const { return mCoeffs; }

  Rational coeff(int i) const
  {
    if (i < 0 || i > degree()) return Rational(0);
    return mCoeffs[static_cast<std::size_t>(i)];
  }

  Rational leading() const
  {
    return is_zero() ? Rational(0) : mCoeffs.back();
  }

  /// Lowest degree with a nonzero coefficient; 0 for the zero polynomial.
  int valuation() const
  {
    for (std::size_t i = 0; i < mCoeffs.size(); ++i)
      if (mCoeffs[i] != 0) return static_cast<int>(i);
    return 0;
  }

  bool is_monomial() const
  {
    return !is_zero() && valuation() == degree();
  }

  /// Exact division by s^k; requires valuation() >= k.
  Polynomial divide_by_s_power(int k) const
  {
    if (k == 0 || is_zero()) return *this;
    if (k < 0 || valuation() < k)
      throw Error("divide_by_s_power: polynomial not divisible by s^k");
    return Polynomial(
        std::vector<Rational>(mCoeffs.begin() + k, mCoeffs.end()));
  }

  Polynomial multiply_by_s_power(unsigned k) const
  {
    if (is_zero() || k == 0) return *this;
    std::vector<Rational> v(k, Rational(0));
    v.insert(v.end(), mCoeffs.begin(), mCoeffs.end());
    return Polynomial(std::move(v));
  }

  Polynomial monic() const
  {
    if (is_zero()) return *this;
    Polynomial r = *this;
    const Rational lc = leading();
    for (auto& c : r.mCoeffs) c /= lc;
    return r;
  }

  Polynomial derivative() const
  {
    if (mCoeffs.size() <= 1) return {};
    std::vector<Rational> v(mCoeffs.size() - 1);
    for (std::size_t i = 1; i < mCoeffs.size(); ++i)
      v[i - 1] = mCoeffs[i] * static_cast<long>(i);
    return Polynomial(std::move(v));
  }

  /// Antiderivative with zero constant term.
  Polynomial integral() const
  {
    if (is_zero()) return {};
    std::vector<Rational> v(mCoeffs.size() + 1, Rational(0));
    for (std::size_t i = 0; i < mCoeffs.size(); ++i)
      v[i + 1] = mCoeffs[i] / static_cast<long>(i + 1);
    return Polynomial(std::move(v));
  }

  Rational operator()(const Rational& x) const
  {
    Rational acc = 0;
    for (auto it = mCoeffs.rbegin(); it != mCoeffs.rend(); ++it)
      acc = acc * x + *it;
    return acc;
  }

  double operator()(double x) const
  {
    double acc = 0.0;
    for (auto it = mCoeffs.rbegin(); it != mCoeffs.rend(); ++it)
      acc = acc * x + to_double(*it);
    return acc;
  }

  /// p(q(s)) by Horner's scheme.
  Polynomial compose(const Polynomial& inner) const
  {
    Polynomial acc;
    for (auto it = mCoeffs.rbegin(); it != mCoeffs.rend(); ++it)
      acc = acc * inner + constant(*it);
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o)
  {
    if (o.mCoeffs.size() > mCoeffs.size())
      mCoeffs.resize(o.mCoeffs.size(), Rational(0));
    for (std::size_t i = 0; i < o.mCoeffs.size(); ++i) mCoeffs[i] += o.mCoeffs[i];
    trim();
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o)
  {
    if (o.mCoeffs.size() > mCoeffs.size())
      mCoeffs.resize(o.mCoeffs.size(), Rational(0));
    for (std::size_t i = 0; i < o.mCoeffs.size(); ++i) mCoeffs[i] -= o.mCoeffs[i];
    trim();
    return *this;
  }

  Polynomial& operator*=(const Rational& c)
  {
    if (c == 0)
    {
      mCoeffs.clear();
      return *this;
    }
    for (auto& x : mCoeffs) x *= c;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

  friend Polynomial operator-(Polynomial a)
  {
    for (auto& x : a.mCoeffs) x = -x;
    return a;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
  {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.mCoeffs.size() + b.mCoeffs.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.mCoeffs.size(); ++i)
    {
      if (a.mCoeffs[i] == 0) continue;
      for (std::size_t j = 0; j < b.mCoeffs.size(); ++j)
        v[i + j] += a.mCoeffs[i] * b.mCoeffs[j];
    }
    return Polynomial(std::move(v));
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b)
  {
    return a.mCoeffs == b.mCoeffs;
  }

  /// Euclidean division: returns (quotient, remainder).
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a,
                                                  const Polynomial& b)
  {
    if (b.is_zero()) throw Error("polynomial division by zero");
    if (a.degree() < b.degree()) return {Polynomial{}, a};
    std::vector<Rational> rem = a.mCoeffs;
    std::vector<Rational> quo(static_cast<std::size_t>(a.degree() - b.degree() + 1),
                              Rational(0));
    const Rational lc = b.leading();
    const std::size_t db = b.mCoeffs.size() - 1;
    for (std::size_t k = quo.size(); k-- > 0;)
    {
      const Rational f = rem[k + db] / lc;
      quo[k] = f;
      if (f == 0) continue;
      for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= f * b.mCoeffs[j];
    }
    return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
  }

  /// Monic greatest common divisor; gcd(0, 0) = 0.
  friend Polynomial gcd(Polynomial a, Polynomial b)
  {
    if (a.is_monomial() || b.is_monomial())
    {
      if (a.is_zero()) return b.monic();
      if (b.is_zero()) return a.monic();
      return monomial(Rational(1), static_cast<unsigned>(std::min(a.valuation(), b.valuation())));
    }
    while (!b.is_zero())
    {
      Polynomial r = divmod(a, b).second;
      a = std::move(b);
      b = r.monic();
    }
    return a.monic();
  }

  /// Monic least common multiple.
  friend Polynomial lcm(const Polynomial& a, const Polynomial& b)
  {
    if (a.is_zero() || b.is_zero()) return {};
    Polynomial g = gcd(a, b);
    return (divmod(a, g).first * b).monic();
  }

private:
  void trim()
  {
    while (!mCoeffs.empty() && mCoeffs.back() == 0) mCoeffs.pop_back();
  }

  std::vector<Rational> mCoeffs;
};

} // namespace algcpd
