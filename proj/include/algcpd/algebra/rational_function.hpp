#pragma once

#include "algcpd/algebra/polynomial.hpp"

#include <map>
#include <optional>

namespace algcpd {

/// Element of Q(s), kept as a reduced quotient with a monic denominator.
class RationalFunction
{
public:
  RationalFunction() : mDen(Polynomial::constant(1)) {}

  RationalFunction(const Rational& c)
      : mNum(Polynomial::constant(c)), mDen(Polynomial::constant(1))
  {}

  RationalFunction(int c) : RationalFunction(Rational(c)) {}

  RationalFunction(Polynomial num)
      : mNum(std::move(num)), mDen(Polynomial::constant(1))
  {}

  RationalFunction(Polynomial num, Polynomial den)
      : mNum(std::move(num)), mDen(std::move(den))
  {
    if (mDen.is_zero()) throw Error("rational function with zero denominator");
    canonicalize();
  }

  /// s^k for any integer k.
  static RationalFunction s_power(int k, const Rational& c = Rational(1))
  {
    if (k >= 0) return RationalFunction(Polynomial::monomial(c, static_cast<unsigned>(k)));
    return RationalFunction(Polynomial::constant(c),
                            Polynomial::monomial(Rational(1), static_cast<unsigned>(-k)));
  }

  const Polynomial& numerator() const { return mNum; }
  const Polynomial& denominator() const { return mDen; }

  bool is_zero() const { return mNum.is_zero(); }
  bool is_polynomial() const { return mDen.degree() == 0; }

  bool is_proper() const { return mNum.degree() <= mDen.degree(); }
  bool is_strictly_proper() const { return mNum.degree() < mDen.degree(); }

  /// Denominator is s^k (k >= 0).
  bool has_s_power_denominator() const { return mDen.is_monomial(); }

  /// Member of Q[1/s].
  bool in_finite_integral_form() const
  {
    return has_s_power_denominator() && mNum.degree() <= mDen.degree();
  }

  /// Member of (1/s) Q[1/s].
  bool in_strictly_finite_integral_form() const
  {
    return has_s_power_denominator() && mNum.degree() < mDen.degree();
  }

  /// Laurent expansion exponent -> coefficient when the denominator is a
  /// power of s; empty optional otherwise.
  std::optional<std::map<int, Rational>> laurent_terms() const
  {
    if (!has_s_power_denominator()) return std::nullopt;
    std::map<int, Rational> out;
    const int shift = mDen.degree();
    const auto& c = mNum.coefficients();
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] != 0) out.emplace(static_cast<int>(j) - shift, c[j]);
    return out;
  }

  RationalFunction derivative() const
  {
    if (is_polynomial()) return RationalFunction(mNum.derivative());
    // (n/d)' = (n' (d/g) - n (d'/g)) / (d (d/g)) with g = gcd(d, d')
    const Polynomial dd = mDen.derivative();
    const Polynomial g = gcd(mDen, dd);
    const Polynomial d1 = divmod(mDen, g).first;
    return RationalFunction(mNum.derivative() * d1 - mNum * divmod(dd, g).first, mDen * d1);
  }

  Rational operator()(const Rational& x) const
  {
    const Rational d = mDen(x);
    if (d == 0) throw Error("rational function evaluated at a pole");
    return mNum(x) / d;
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b)
  {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.mDen == b.mDen) return RationalFunction(a.mNum + b.mNum, a.mDen);
    // Henrici: only the common part g of the denominators can cancel.
    const Polynomial g = gcd(a.mDen, b.mDen);
    if (g.degree() == 0)
      return reduced(a.mNum * b.mDen + b.mNum * a.mDen, a.mDen * b.mDen);
    const Polynomial ag = divmod(a.mDen, g).first;
    const Polynomial bg = divmod(b.mDen, g).first;
    Polynomial num = a.mNum * bg + b.mNum * ag;
    Polynomial den = ag * b.mDen;
    if (num.is_zero()) return {};
    const Polynomial h = gcd(num, g);
    if (h.degree() > 0)
    {
      num = divmod(num, h).first;
      den = divmod(den, h).first;
    }
    return reduced(std::move(num), std::move(den));
  }

  friend RationalFunction operator-(const RationalFunction& a)
  {
    RationalFunction r = a;
    r.mNum = -r.mNum;
    return r;
  }

  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b)
  {
    return a + (-b);
  }

  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b)
  {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_polynomial() && b.is_polynomial())
      return RationalFunction(a.mNum * b.mNum);
    // Cross-cancel before multiplying so the product is already reduced.
    Polynomial an = a.mNum, ad = a.mDen, bn = b.mNum, bd = b.mDen;
    cancel(an, bd);
    cancel(bn, ad);
    return reduced(an * bn, ad * bd);
  }

  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b)
  {
    if (b.is_zero()) throw Error("division by the zero rational function");
    return a * RationalFunction(b.mDen, b.mNum);
  }

  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  /// Canonical forms make structural equality coincide with a*d == b*c.
  friend bool operator==(const RationalFunction& a, const RationalFunction& b)
  {
    return a.mNum == b.mNum && a.mDen == b.mDen;
  }

private:
  struct Trusted {};

  RationalFunction(Polynomial num, Polynomial den, Trusted)
      : mNum(std::move(num)), mDen(std::move(den))
  {}

  // num/den known coprime; only the leading coefficient needs fixing.
  static RationalFunction reduced(Polynomial num, Polynomial den)
  {
    if (num.is_zero()) return {};
    const Rational lc = den.leading();
    if (lc != 1)
    {
      num *= Rational(1) / lc;
      den *= Rational(1) / lc;
    }
    return RationalFunction(std::move(num), std::move(den), Trusted{});
  }

  static void cancel(Polynomial& num, Polynomial& den)
  {
    if (den.degree() == 0) return;
    const Polynomial g = gcd(num, den);
    if (g.degree() <= 0) return;
    num = divmod(num, g).first;
    den = divmod(den, g).first;
  }

  void canonicalize()
  {
    if (mNum.is_zero())
    {
      mDen = Polynomial::constant(1);
      return;
    }
    if (mDen.degree() > 0)
    {
      // Fast path for the s^k denominators produced by the builders.
      if (mDen.is_monomial())
      {
        const int k = std::min(mNum.valuation(), mDen.degree());
        mNum = mNum.divide_by_s_power(k);
        mDen = mDen.divide_by_s_power(k);
      }
      else
      {
        Polynomial g = gcd(mNum, mDen);
        if (g.degree() > 0)
        {
          mNum = divmod(mNum, g).first;
          mDen = divmod(mDen, g).first;
        }
      }
    }
    const Rational lc = mDen.leading();
    if (lc != 1)
    {
      mNum *= Rational(1) / lc;
      mDen *= Rational(1) / lc;
    }
  }

  Polynomial mNum;
  Polynomial mDen;
};

inline RationalFunction derivative(const RationalFunction& f) { return f.derivative(); }

} // namespace algcpd
