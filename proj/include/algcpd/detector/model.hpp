#pragma once

#include "algcpd/algebra/polynomial.hpp"
#include "algcpd/algebra/text.hpp"
#include "algcpd/error.hpp"

#include <string>
#include <variant>

namespace algcpd {

/// Post-change term gamma/s^(n2+1) with a single unknown amplitude.
struct MonomialJump
{
  unsigned n2 = 0;
};

/// Known post-change shape a/b (coprime, a != 0).
struct RationalJump
{
  Polynomial a = Polynomial::constant(1);
  Polynomial b = Polynomial::s();
};

/// Post-change polynomial sum_{nu <= n2} gamma_nu / s^(nu+1) with unknown
/// coefficients.
struct PolynomialJump
{
  unsigned n2 = 0;
};

using JumpModel = std::variant<MonomialJump, RationalJump, PolynomialJump>;

/// Local signal model around a change point.
///
/// The measured signal X satisfies s^order X = x1 + x2 e^{-t_r s}, where
/// x1 ranges over polynomials of degree <= n1 and x2 is given by `jump`.
/// order 0 is a jump in the signal itself, order k a jump in its k-th
/// derivative.
struct ModelSpec
{
  unsigned n1 = 0;
  JumpModel jump = MonomialJump{};
  unsigned order = 0;

  static constexpr unsigned kDefaultMaxParam = 8;

  /// Degree n2 for the monomial and polynomial jump kinds, 0 otherwise.
  unsigned n2() const
  {
    if (auto* m = std::get_if<MonomialJump>(&jump)) return m->n2;
    if (auto* p = std::get_if<PolynomialJump>(&jump)) return p->n2;
    return 0;
  }

  void validate(unsigned maxParam = kDefaultMaxParam) const
  {
    if (n1 > maxParam || order > maxParam || n2() > maxParam)
      throw Error("model parameters exceed the configured maximum of " +
                  std::to_string(maxParam));
    if (auto* r = std::get_if<RationalJump>(&jump))
    {
      if (r->a.is_zero()) throw Error("rational jump model requires a != 0");
      if (r->b.is_zero()) throw Error("rational jump model requires b != 0");
      if (gcd(r->a, r->b).degree() > 0) throw Error("rational jump model requires coprime a, b");
    }
  }

  std::string describe() const
  {
    std::string kind;
    if (std::holds_alternative<MonomialJump>(jump)) kind = "monomial n2=" + std::to_string(n2());
    else if (std::holds_alternative<PolynomialJump>(jump)) kind = "polynomial n2=" + std::to_string(n2());
    else
    {
      const auto& r = std::get<RationalJump>(jump);
      kind = "rational a=" + to_text(r.a) + " b=" + to_text(r.b);
    }
    return "n1=" + std::to_string(n1) + " x2=" + kind + " order=" + std::to_string(order);
  }
};

} // namespace algcpd
