#pragma once

#include "algcpd/detector/builder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace algcpd {

/// Polynomial in the window length T and the integration variable tau with
/// exact rational coefficients, keyed by (power of T, power of tau).
class BivariatePolynomial
{
public:
  using Key = std::pair<unsigned, unsigned>;
  using Terms = std::map<Key, Rational>;

  BivariatePolynomial() = default;
  explicit BivariatePolynomial(Terms terms) : mTerms(std::move(terms)) { prune(); }

  static BivariatePolynomial monomial(const Rational& c, unsigned iT, unsigned jTau)
  {
    return BivariatePolynomial(Terms{{{iT, jTau}, c}});
  }

  const Terms& terms() const { return mTerms; }
  bool is_zero() const { return mTerms.empty(); }

  Rational coeff(unsigned iT, unsigned jTau) const
  {
    auto it = mTerms.find({iT, jTau});
    return it == mTerms.end() ? Rational(0) : it->second;
  }

  unsigned tau_degree() const
  {
    unsigned d = 0;
    for (const auto& [k, c] : mTerms) d = std::max(d, k.second);
    return d;
  }

  BivariatePolynomial& operator+=(const BivariatePolynomial& o)
  {
    for (const auto& [k, c] : o.mTerms) mTerms[k] += c;
    prune();
    return *this;
  }

  friend BivariatePolynomial operator+(BivariatePolynomial a, const BivariatePolynomial& b)
  {
    return a += b;
  }

  friend BivariatePolynomial operator*(const BivariatePolynomial& a, const BivariatePolynomial& b)
  {
    Terms out;
    for (const auto& [ka, ca] : a.mTerms)
      for (const auto& [kb, cb] : b.mTerms)
        out[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
    return BivariatePolynomial(std::move(out));
  }

  friend BivariatePolynomial operator*(const Rational& c, BivariatePolynomial a)
  {
    for (auto& [k, x] : a.mTerms) x *= c;
    a.prune();
    return a;
  }

  friend bool operator==(const BivariatePolynomial& a, const BivariatePolynomial& b)
  {
    return a.mTerms == b.mTerms;
  }

  /// Coefficients in tau (ascending) once T is fixed.
  std::vector<double> tau_coefficients(double T) const
  {
    std::vector<double> out(tau_degree() + 1, 0.0);
    for (const auto& [k, c] : mTerms) out[k.second] += to_double(c) * std::pow(T, k.first);
    return out;
  }

  double operator()(double T, double tau) const
  {
    const auto c = tau_coefficients(T);
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * tau + *it;
    return acc;
  }

  /// int_0^T K(T, tau) tau^k dtau as a polynomial in T.
  Polynomial integrate_tau_moment(unsigned k = 0) const
  {
    std::vector<Rational> out;
    for (const auto& [key, c] : mTerms)
    {
      const unsigned j = key.second + k + 1;
      const unsigned deg = key.first + j;
      if (out.size() <= deg) out.resize(deg + 1, Rational(0));
      out[deg] += c / Rational(j);
    }
    return Polynomial(std::move(out));
  }

private:
  void prune()
  {
    for (auto it = mTerms.begin(); it != mTerms.end();)
      it = it->second == 0 ? mTerms.erase(it) : std::next(it);
  }

  Terms mTerms;
};

/// Time-domain kernels, one per power of t_r. The window value of the
/// nu-th coefficient is int_0^T K_nu(T, tau) x(tau) dtau.
struct SymbolicKernel
{
  std::vector<BivariatePolynomial> k;
  ModelSpec model;

  int degree() const { return static_cast<int>(k.size()) - 1; }
};

/// c s^-m D^alpha  ->  c (T - tau)^(m-1) (-tau)^alpha / (m-1)!
inline BivariatePolynomial term_kernel(const Rational& c, unsigned m, unsigned alpha)
{
  if (m == 0) throw Error("operator not strictly integral: found an s^0 term");
  BivariatePolynomial acc;
  const Rational scale = c / Rational(factorial(m - 1));
  const Rational sign = alpha % 2 == 0 ? Rational(1) : Rational(-1);
  // (T - tau)^(m-1) = sum_i C(m-1, i) T^(m-1-i) (-tau)^i
  for (unsigned i = 0; i < m; ++i)
  {
    Rational b = Rational(binomial(m - 1, i)) * scale * sign;
    if (i % 2 == 1) b = -b;
    acc += BivariatePolynomial::monomial(b, m - 1 - i, i + alpha);
  }
  return acc;
}

inline SymbolicKernel kernelize(const DetectorOperator& d)
{
  SymbolicKernel out;
  out.model = d.model;
  for (std::size_t nu = 0; nu < d.omega.coefficients().size(); ++nu)
  {
    BivariatePolynomial kn;
    for (const auto& [alpha, rho] : d.omega[nu].terms())
    {
      const auto laurent = rho.laurent_terms();
      if (!laurent) throw Error("operator not strictly integral: coefficient " + to_text(rho));
      for (const auto& [e, c] : *laurent)
      {
        if (e >= 0)
          throw Error("operator not strictly integral: coefficient " + to_text(rho) + " of D^" +
                      std::to_string(alpha) + " at t^" + std::to_string(nu));
        kn += term_kernel(c, static_cast<unsigned>(-e), alpha);
      }
    }
    out.k.push_back(std::move(kn));
  }
  return out;
}

/// True when every K_nu is orthogonal to 1, tau, ..., tau^n1 as a polynomial
/// identity in T.
inline bool kernel_annihilates_trends(const SymbolicKernel& k, unsigned n1)
{
  for (const auto& kn : k.k)
    for (unsigned j = 0; j <= n1; ++j)
      if (!kn.integrate_tau_moment(j).is_zero()) return false;
  return true;
}

/// `3*tau^2 - 2*T*tau`, descending in tau then in T.
inline std::string to_text(const BivariatePolynomial& p)
{
  if (p.is_zero()) return "0";
  std::vector<std::pair<BivariatePolynomial::Key, Rational>> terms(p.terms().begin(),
                                                                   p.terms().end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.first.second != b.first.second) return a.first.second > b.first.second;
    return a.first.first > b.first.first;
  });
  std::string out;
  for (const auto& [key, c] : terms)
  {
    const bool neg = c < 0;
    const Rational a = neg ? Rational(-c) : c;
    std::string vars;
    auto add = [&](const char* name, unsigned k) {
      if (k == 0) return;
      if (!vars.empty()) vars += "*";
      vars += name;
      if (k > 1) vars += "^" + std::to_string(k);
    };
    add("T", key.first);
    add("tau", key.second);
    std::string body;
    if (vars.empty()) body = detail::scalar_factor(a);
    else if (a == 1) body = vars;
    else body = detail::scalar_factor(a) + "*" + vars;
    if (out.empty()) out = neg ? "-" + body : body;
    else out += (neg ? " - " : " + ") + body;
  }
  return out;
}

inline std::string to_text(const SymbolicKernel& k)
{
  std::string out;
  for (std::size_t nu = 0; nu < k.k.size(); ++nu)
    out += "K" + std::to_string(nu) + ": " + to_text(k.k[nu]) + "\n";
  return out;
}

} // namespace algcpd
