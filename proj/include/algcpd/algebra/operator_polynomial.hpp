#pragma once

#include "algcpd/algebra/diff_operator.hpp"

#include <vector>

namespace algcpd {

/// Polynomial in the delay symbol t_r with differential-operator
/// coefficients: sum_nu t_r^nu * coeffs[nu].
///
/// t_r is a constant, so it commutes with s and with d/ds; products only
/// need to convolve the coefficient lists.
class OperatorPolynomial
{
public:
  OperatorPolynomial() = default;

  OperatorPolynomial(std::vector<DiffOperator> coeffs) : mCoeffs(std::move(coeffs))
  {
    trim();
  }

  OperatorPolynomial(const DiffOperator& constant)
  {
    if (!constant.is_zero()) mCoeffs.push_back(constant);
  }

  /// The bare symbol t_r (times the identity operator).
  static OperatorPolynomial delay_symbol()
  {
    return OperatorPolynomial({DiffOperator(), DiffOperator(RationalFunction(1))});
  }

  /// Degree in t_r; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(mCoeffs.size()) - 1; }
  bool is_zero() const { return mCoeffs.empty(); }

  const std::vector<DiffOperator>& coefficients() const { return mCoeffs; }

  const DiffOperator& operator[](std::size_t nu) const { return mCoeffs.at(nu); }

  /// Highest derivative order across all coefficients.
  unsigned max_order() const
  {
    unsigned m = 0;
    for (const auto& c : mCoeffs) m = std::max(m, c.order());
    return m;
  }

  /// Numeric substitution of t_r.
  DiffOperator evaluate(const Rational& t) const
  {
    DiffOperator acc;
    Rational tp = 1;
    for (const auto& c : mCoeffs)
    {
      if (tp != 0) acc += RationalFunction(tp) * c;
      tp *= t;
    }
    return acc;
  }

  friend OperatorPolynomial operator+(const OperatorPolynomial& a, const OperatorPolynomial& b)
  {
    std::vector<DiffOperator> v(std::max(a.mCoeffs.size(), b.mCoeffs.size()));
    for (std::size_t i = 0; i < a.mCoeffs.size(); ++i) v[i] += a.mCoeffs[i];
    for (std::size_t i = 0; i < b.mCoeffs.size(); ++i) v[i] += b.mCoeffs[i];
    return OperatorPolynomial(std::move(v));
  }

  friend OperatorPolynomial compose(const OperatorPolynomial& a, const OperatorPolynomial& b)
  {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<DiffOperator> v(a.mCoeffs.size() + b.mCoeffs.size() - 1);
    for (std::size_t i = 0; i < a.mCoeffs.size(); ++i)
      for (std::size_t j = 0; j < b.mCoeffs.size(); ++j)
        v[i + j] += compose(a.mCoeffs[i], b.mCoeffs[j]);
    return OperatorPolynomial(std::move(v));
  }

  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b)
  {
    return compose(a, b);
  }

  /// Left multiplication of every coefficient by a rational function.
  friend OperatorPolynomial operator*(const RationalFunction& rho, OperatorPolynomial p)
  {
    for (auto& c : p.mCoeffs) c = rho * c;
    p.trim();
    return p;
  }

  friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b)
  {
    return a.mCoeffs == b.mCoeffs;
  }

private:
  void trim()
  {
    while (!mCoeffs.empty() && mCoeffs.back().is_zero()) mCoeffs.pop_back();
  }

  std::vector<DiffOperator> mCoeffs;
};

/// Substitutes (d/ds + t_r) for d/ds. Since t_r is constant,
/// rho (d/ds + t_r)^a = sum_j C(a,j) t_r^j rho (d/ds)^(a-j).
inline OperatorPolynomial conjugate_by_delay(const DiffOperator& p)
{
  std::vector<DiffOperator> v(p.order() + 1);
  for (const auto& [a, rho] : p.terms())
    for (unsigned j = 0; j <= a; ++j)
      v[j] += DiffOperator::term(rho * RationalFunction(binomial(a, j)), a - j);
  return OperatorPolynomial(std::move(v));
}

} // namespace algcpd
