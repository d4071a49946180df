#pragma once

#include "algcpd/algebra/rational_function.hpp"

#include <map>
#include <vector>

namespace algcpd {

/// Linear differential operator sum_a rho_a(s) (d/ds)^a in Q(s)[d/ds].
///
/// Coefficients always sit to the LEFT of the derivative powers, and zero
/// coefficients are never stored.
class DiffOperator
{
public:
  using Terms = std::map<unsigned, RationalFunction>;

  DiffOperator() = default;

  /// Order-0 operator: multiplication by `rho`.
  DiffOperator(const RationalFunction& rho)
  {
    if (!rho.is_zero()) mTerms.emplace(0u, rho);
  }

  DiffOperator(Terms terms) : mTerms(std::move(terms)) { prune(); }

  /// (d/ds)^k
  static DiffOperator D(unsigned k = 1)
  {
    return DiffOperator(Terms{{k, RationalFunction(1)}});
  }

  /// rho (d/ds)^k
  static DiffOperator term(const RationalFunction& rho, unsigned k)
  {
    return DiffOperator(Terms{{k, rho}});
  }

  const Terms& terms() const { return mTerms; }
  bool is_zero() const { return mTerms.empty(); }

  /// Highest derivative order; 0 for the zero operator.
  unsigned order() const { return mTerms.empty() ? 0u : mTerms.rbegin()->first; }

  RationalFunction coefficient(unsigned k) const
  {
    auto it = mTerms.find(k);
    return it == mTerms.end() ? RationalFunction() : it->second;
  }

  /// sum_a rho_a f^(a)
  RationalFunction apply(const RationalFunction& f) const
  {
    if (is_zero() || f.is_zero()) return {};
    // Unreduced derivatives f^(a) = N_a / d^(a+1), with
    // N_{a+1} = N_a' d - (a+1) N_a d'. Everything is summed over the common
    // denominator lcm(q_a) d^(K+1) and reduced once at the end.
    const Polynomial& d = f.denominator();
    const Polynomial dd = d.derivative();
    const unsigned K = order();
    std::vector<Polynomial> N{f.numerator()};
    for (unsigned a = 0; a < K; ++a)
      N.push_back(N[a].derivative() * d - N[a] * dd * Rational(a + 1));

    Polynomial qlcm = Polynomial::constant(1);
    for (const auto& [k, rho] : mTerms) qlcm = lcm(qlcm, rho.denominator());

    std::vector<Polynomial> dpow{Polynomial::constant(1)};
    for (unsigned a = 0; a < K; ++a) dpow.push_back(dpow.back() * d);

    Polynomial num;
    for (const auto& [k, rho] : mTerms)
      num += rho.numerator() * divmod(qlcm, rho.denominator()).first * N[k] * dpow[K - k];
    if (num.is_zero()) return {};
    return RationalFunction(std::move(num), qlcm * dpow[K] * d);
  }

  DiffOperator& operator+=(const DiffOperator& o)
  {
    for (const auto& [k, rho] : o.mTerms)
    {
      auto [it, inserted] = mTerms.emplace(k, rho);
      if (!inserted) it->second += rho;
    }
    prune();
    return *this;
  }

  friend DiffOperator operator+(DiffOperator a, const DiffOperator& b) { return a += b; }

  friend DiffOperator operator-(DiffOperator a)
  {
    for (auto& [k, rho] : a.mTerms) rho = -rho;
    return a;
  }

  friend DiffOperator operator-(DiffOperator a, const DiffOperator& b) { return a += -b; }

  /// Left multiplication by a rational function (no commutation needed).
  friend DiffOperator operator*(const RationalFunction& rho, DiffOperator a)
  {
    for (auto& [k, c] : a.mTerms) c = rho * c;
    a.prune();
    return a;
  }

  /// Composition p o q, normalized with the commutation rule
  /// D^a sigma = sum_j C(a,j) sigma^(j) D^(a-j).
  friend DiffOperator compose(const DiffOperator& p, const DiffOperator& q)
  {
    if (p.is_zero() || q.is_zero()) return {};
    const unsigned maxA = p.order();
    Terms out;
    for (const auto& [b, sigma] : q.mTerms)
    {
      std::vector<RationalFunction> dsigma{sigma};
      dsigma.reserve(maxA + 1);
      for (unsigned j = 1; j <= maxA; ++j) dsigma.push_back(dsigma.back().derivative());

      for (const auto& [a, rho] : p.mTerms)
      {
        for (unsigned j = 0; j <= a; ++j)
        {
          if (dsigma[j].is_zero()) continue;
          RationalFunction c = rho * dsigma[j];
          if (j > 0) c = c * RationalFunction(binomial(a, j));
          auto [it, inserted] = out.emplace(a - j + b, c);
          if (!inserted) it->second += c;
        }
      }
    }
    return DiffOperator(std::move(out));
  }

  friend DiffOperator operator*(const DiffOperator& p, const DiffOperator& q)
  {
    return compose(p, q);
  }

  friend bool operator==(const DiffOperator& a, const DiffOperator& b)
  {
    return a.mTerms == b.mTerms;
  }

private:
  void prune()
  {
    for (auto it = mTerms.begin(); it != mTerms.end();)
      it = it->second.is_zero() ? mTerms.erase(it) : std::next(it);
  }

  Terms mTerms;
};

inline DiffOperator op_compose(const DiffOperator& p, const DiffOperator& q)
{
  return compose(p, q);
}

inline RationalFunction op_apply(const DiffOperator& p, const RationalFunction& f)
{
  return p.apply(f);
}

} // namespace algcpd
