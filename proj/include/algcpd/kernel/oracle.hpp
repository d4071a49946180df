#pragma once

// Reference window values computed by literal nested integration rather than
// through the closed-form kernels. Used only for differential testing.

#include "algcpd/kernel/discrete.hpp"

#include <vector>

namespace algcpd {
namespace detail {

// Polynomials in the local coordinate u in [0, h], one per grid interval.
using Pieces = std::vector<std::vector<double>>;

inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b)
{
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Interpolant of the samples: linear per interval, or quadratic per pair of
// intervals for the simpson rule.
inline Pieces interpolant(const std::vector<double>& x, double h, Quadrature rule)
{
  const std::size_t n = x.size() - 1;
  Pieces p(n);
  if (rule != Quadrature::Simpson)
  {
    for (std::size_t j = 0; j < n; ++j) p[j] = {x[j], (x[j + 1] - x[j]) / h};
    return p;
  }
  for (std::size_t j = 0; j + 1 < n; j += 2)
  {
    const double b = (x[j] - 2.0 * x[j + 1] + x[j + 2]) / (2.0 * h * h);
    const double a = (x[j + 1] - x[j]) / h - b * h;
    p[j] = {x[j], a, b};
    p[j + 1] = {x[j + 1], a + 2.0 * b * h, b};
  }
  return p;
}

// Multiplies each piece by (-tau)^alpha with tau = j*h + u.
inline Pieces times_minus_tau_power(Pieces p, unsigned alpha, double h)
{
  if (alpha == 0) return p;
  for (std::size_t j = 0; j < p.size(); ++j)
  {
    const double t0 = j * h;
    std::vector<double> f(alpha + 1);
    const double sign = alpha % 2 == 0 ? 1.0 : -1.0;
    for (unsigned i = 0; i <= alpha; ++i)
      f[i] = sign * to_double(binomial(alpha, i)) * std::pow(t0, alpha - i);
    p[j] = poly_mul(p[j], f);
  }
  return p;
}

// Running integral from 0, continuous across intervals.
inline Pieces cumulative(const Pieces& p, double h)
{
  Pieces out(p.size());
  double c = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j)
  {
    std::vector<double> q(p[j].size() + 1, 0.0);
    q[0] = c;
    for (std::size_t i = 0; i < p[j].size(); ++i) q[i + 1] = p[j][i] / static_cast<double>(i + 1);
    c = horner(q, h);
    out[j] = std::move(q);
  }
  return out;
}

inline std::vector<double> cumulative_trapezoid(const std::vector<double>& y, double h)
{
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t i = 1; i < y.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
  return out;
}

} // namespace detail

/// Value at the window end of each coefficient Omega_nu applied to the
/// samples, term by term as s^-m ((-t)^alpha x) via m nested running
/// integrals. The product and simpson rules integrate the linear and
/// quadratic interpolants exactly; trapezoid iterates the cumulative
/// trapezoid rule.
inline std::vector<double> oracle_iterated_integration(const DetectorOperator& d,
                                                       const std::vector<double>& samples,
                                                       double h,
                                                       Quadrature rule = Quadrature::Product)
{
  check_grid(static_cast<unsigned>(samples.size()), h, rule);
  const std::size_t W = samples.size();
  std::vector<double> out;
  for (const auto& coeff : d.omega.coefficients())
  {
    double acc = 0.0;
    for (const auto& [alpha, rho] : coeff.terms())
    {
      const auto laurent = rho.laurent_terms();
      if (!laurent) throw Error("operator not strictly integral: coefficient " + to_text(rho));
      for (const auto& [e, c] : *laurent)
      {
        if (e >= 0) throw Error("operator not strictly integral: coefficient " + to_text(rho));
        const unsigned m = static_cast<unsigned>(-e);
        double value = 0.0;
        if (rule == Quadrature::Trapezoid)
        {
          std::vector<double> y(W);
          for (std::size_t i = 0; i < W; ++i)
            y[i] = std::pow(-static_cast<double>(i) * h, alpha) * samples[i];
          for (unsigned r = 0; r < m; ++r) y = detail::cumulative_trapezoid(y, h);
          value = y.back();
        }
        else
        {
          auto p = detail::times_minus_tau_power(detail::interpolant(samples, h, rule), alpha, h);
          for (unsigned r = 0; r < m; ++r) p = detail::cumulative(p, h);
          value = detail::horner(p.back(), h);
        }
        acc += to_double(c) * value;
      }
    }
    out.push_back(acc);
  }
  return out;
}

/// Window values through the discrete kernels for a single window.
inline std::vector<double> window_values(const DiscreteDetector& d, const double* x)
{
  std::vector<double> v;
  for (const auto& w : d.weights)
  {
    double acc = 0.0;
    for (unsigned i = 0; i < d.W; ++i) acc += w[i] * x[i];
    v.push_back(acc);
  }
  return v;
}

} // namespace algcpd
