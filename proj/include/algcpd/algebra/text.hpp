#pragma once

// Plain-text rendering of the symbolic objects. The grammar is documented in
// docs/operator_text.md; golden-file tests depend on it staying stable.

#include "algcpd/algebra/operator_polynomial.hpp"

#include <ostream>
#include <string>

namespace algcpd {
namespace detail {

inline bool is_negative(const Rational& q) { return q < 0; }

// Coefficient as a product factor: `3`, `(1/2)`.
inline std::string scalar_factor(const Rational& q)
{
  const BigInt& den = boost::multiprecision::denominator(q);
  if (den == 1) return boost::multiprecision::numerator(q).str();
  return "(" + to_string(q) + ")";
}

// Nonnegative-coefficient monomial `c*var^k`, omitting unit pieces.
inline std::string monomial_text(const Rational& absC, int k, const std::string& var)
{
  std::string power;
  if (k == 1) power = var;
  else if (k > 1) power = var + "^" + std::to_string(k);
  if (power.empty()) return scalar_factor(absC);
  if (absC == 1) return power;
  return scalar_factor(absC) + "*" + power;
}

} // namespace detail

/// Descending powers joined with ` + ` / ` - `, e.g. `s^2 - (1/2)*s + 3`.
inline std::string to_text(const Polynomial& p, const std::string& var = "s")
{
  if (p.is_zero()) return "0";
  std::string out;
  const auto& c = p.coefficients();
  for (int k = p.degree(); k >= 0; --k)
  {
    const Rational& q = c[static_cast<std::size_t>(k)];
    if (q == 0) continue;
    const bool neg = detail::is_negative(q);
    const std::string body = detail::monomial_text(neg ? Rational(-q) : q, k, var);
    if (out.empty()) out = neg ? "-" + body : body;
    else out += (neg ? " - " : " + ") + body;
  }
  return out;
}

/// Rational functions render as a polynomial when the denominator is 1,
/// and as `(num/den)` otherwise, with multi-term parts parenthesized.
/// `c/s^k` is written `(a/(b*s^k))` for c = a/b.
inline std::string to_text(const RationalFunction& f)
{
  const Polynomial& num = f.numerator();
  const Polynomial& den = f.denominator();
  if (den.degree() == 0) return to_text(num);

  if (num.degree() == 0 && den.is_monomial())
  {
    const Rational c = num.leading();
    const BigInt& a = boost::multiprecision::numerator(c);
    const BigInt& b = boost::multiprecision::denominator(c);
    const std::string sp = detail::monomial_text(Rational(1), den.degree(), "s");
    if (b == 1) return "(" + a.str() + "/" + sp + ")";
    return "(" + a.str() + "/(" + b.str() + "*" + sp + "))";
  }

  auto wrap = [](const Polynomial& p) {
    const std::string t = to_text(p);
    const bool single = p.is_monomial() && !detail::is_negative(p.leading());
    return single ? t : "(" + t + ")";
  };
  return "(" + wrap(num) + "/" + wrap(den) + ")";
}

/// Terms in descending derivative order, `coeff*D^k`, e.g.
/// `(1/s^2)*D^1 + 2*s*D^0`. Leading signs of single-term polynomial
/// coefficients and of `(c/s^k)` coefficients are pulled into the join.
inline std::string to_text(const DiffOperator& op)
{
  if (op.is_zero()) return "0";
  std::string out;
  const auto& terms = op.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it)
  {
    const auto& [k, rho] = *it;
    const Polynomial& num = rho.numerator();
    const bool pullSign = num.degree() == 0 ? detail::is_negative(num.leading())
                                            : (rho.is_polynomial() && num.is_monomial() &&
                                               detail::is_negative(num.leading()));
    const RationalFunction body = pullSign ? -rho : rho;
    const std::string coeff = to_text(body) + "*D^" + std::to_string(k);
    if (out.empty()) out = pullSign ? "-" + coeff : coeff;
    else out += (pullSign ? " - " : " + ") + coeff;
  }
  return out;
}

/// One line per power of t_r: `t^0: ...`.
inline std::string to_text(const OperatorPolynomial& p)
{
  if (p.is_zero()) return "0\n";
  std::string out;
  for (std::size_t nu = 0; nu < p.coefficients().size(); ++nu)
    out += "t^" + std::to_string(nu) + ": " + to_text(p[nu]) + "\n";
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << to_text(p); }
inline std::ostream& operator<<(std::ostream& os, const RationalFunction& f) { return os << to_text(f); }
inline std::ostream& operator<<(std::ostream& os, const DiffOperator& op) { return os << to_text(op); }
inline std::ostream& operator<<(std::ostream& os, const OperatorPolynomial& p) { return os << to_text(p); }

} // namespace algcpd
