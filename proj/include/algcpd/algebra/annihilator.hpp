#pragma once

#include "algcpd/algebra/operator_polynomial.hpp"
#include "algcpd/algebra/text.hpp"

#include <span>
#include <vector>

namespace algcpd {

/// Annihilator of the Q-span of `basis`, built as (d/ds)^(D+1) o q.
///
/// q is the monic lcm of the denominators, so q*f is a polynomial of degree
/// at most D for every f in the span, and D^(D+1) kills it. The result is
/// sound but not necessarily of minimal order. Zero elements are dropped.
inline DiffOperator annihilator_of_span(std::span<const RationalFunction> basis)
{
  Polynomial q = Polynomial::constant(1);
  bool any = false;
  for (const auto& f : basis)
  {
    if (f.is_zero()) continue;
    any = true;
    q = lcm(q, f.denominator());
  }
  if (!any) throw Error("annihilator_of_span: basis has no nonzero element");

  int maxDeg = 0;
  for (const auto& f : basis)
  {
    if (f.is_zero()) continue;
    const Polynomial cleared = f.numerator() * divmod(q, f.denominator()).first;
    maxDeg = std::max(maxDeg, cleared.degree());
  }
  return compose(DiffOperator::D(static_cast<unsigned>(maxDeg + 1)),
                 DiffOperator(RationalFunction(q)));
}

inline DiffOperator annihilator_of_span(const std::vector<RationalFunction>& basis)
{
  return annihilator_of_span(std::span<const RationalFunction>(basis));
}

struct IntegralForm
{
  unsigned depth = 0;       ///< N in s^{-N} o p
  OperatorPolynomial op;    ///< s^{-N} o p
};

/// Smallest N >= 0 with s^{-N} o p strictly finite integral, i.e. every
/// coefficient a polynomial in 1/s without constant term.
///
/// Every coefficient must already have a pure s^k denominator.
inline IntegralForm to_integral_form(const OperatorPolynomial& p)
{
  int maxExp = -1;
  const auto& coeffs = p.coefficients();
  for (std::size_t nu = 0; nu < coeffs.size(); ++nu)
  {
    for (const auto& [k, rho] : coeffs[nu].terms())
    {
      if (!rho.has_s_power_denominator())
        throw Error("to_integral_form: coefficient " + to_text(rho) + " of t^" +
                    std::to_string(nu) + "*D^" + std::to_string(k) +
                    " has a denominator that is not a power of s");
      maxExp = std::max(maxExp, rho.numerator().degree() - rho.denominator().degree());
    }
  }
  const unsigned depth = static_cast<unsigned>(std::max(0, maxExp + 1));
  if (depth == 0) return {0, p};
  return {depth, RationalFunction::s_power(-static_cast<int>(depth)) * p};
}

} // namespace algcpd
