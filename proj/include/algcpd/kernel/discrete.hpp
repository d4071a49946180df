#pragma once

#include "algcpd/kernel/kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace algcpd {

/// trapezoid and simpson sample the kernel at the grid points. product
/// integrates the kernel exactly against the piecewise-linear interpolant of
/// the samples.
enum class Quadrature
{
  Trapezoid,
  Simpson,
  Product,
};

inline std::string to_string(Quadrature q)
{
  switch (q)
  {
  case Quadrature::Trapezoid: return "trapezoid";
  case Quadrature::Simpson: return "simpson";
  case Quadrature::Product: return "product";
  }
  return "?";
}

inline Quadrature parse_quadrature(const std::string& name)
{
  if (name == "trapezoid") return Quadrature::Trapezoid;
  if (name == "simpson") return Quadrature::Simpson;
  if (name == "product") return Quadrature::Product;
  throw Error("unknown quadrature rule '" + name + "' (expected trapezoid, simpson or product)");
}

constexpr unsigned kMinWindow = 8;

inline void check_grid(unsigned W, double h, Quadrature rule)
{
  if (W < kMinWindow) throw Error("window must have at least 8 samples, got " + std::to_string(W));
  if (!(h > 0.0)) throw Error("sample period must be positive");
  if (rule == Quadrature::Simpson && W % 2 == 0)
    throw Error("simpson rule needs an odd window, got W=" + std::to_string(W));
}

/// Composite rule weights on W points with spacing h.
inline std::vector<double> quadrature_weights(Quadrature rule, unsigned W, double h)
{
  if (rule == Quadrature::Product)
    throw Error("the product rule has kernel-dependent weights");
  if (W < 2) throw Error("quadrature needs at least 2 points");
  if (rule == Quadrature::Simpson && W % 2 == 0)
    throw Error("simpson rule needs an odd number of points");
  std::vector<double> q(W, h);
  if (rule == Quadrature::Trapezoid)
  {
    q.front() = q.back() = 0.5 * h;
    return q;
  }
  for (unsigned i = 0; i < W; ++i)
    q[i] = (i == 0 || i + 1 == W) ? h / 3.0 : (i % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
  return q;
}

namespace detail {

inline double horner(const std::vector<double>& c, double x)
{
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// w_i = int K(tau) phi_i(tau) dtau for the hat functions phi_i on the grid.
// 30-point Gauss-Legendre is exact up to degree 59 on each interval.
inline std::vector<double> product_weights(const std::vector<double>& kc, unsigned W, double h)
{
  using GL = boost::math::quadrature::gauss<double, 30>;
  if (kc.size() + 1 > 59) throw Error("kernel degree too high for the product rule");
  std::vector<double> w(W, 0.0);
  for (unsigned j = 0; j + 1 < W; ++j)
  {
    const double a = j * h;
    const double b = (j + 1) * h;
    w[j] += GL::integrate([&](double t) { return horner(kc, t) * (b - t) / h; }, a, b);
    w[j + 1] += GL::integrate([&](double t) { return horner(kc, t) * (t - a) / h; }, a, b);
  }
  return w;
}

} // namespace detail

/// Weight vectors for a fixed window; immutable and shareable.
struct DiscreteDetector
{
  std::vector<std::vector<double>> weights;
  unsigned W = 0;
  double h = 0.0;
  Quadrature quadrature = Quadrature::Product;
  ModelSpec model;
  double t_mid = 0.0;

  double T() const { return (W - 1) * h; }
  int degree() const { return static_cast<int>(weights.size()) - 1; }

  /// Weights of v = sum_nu v_nu t_mid^nu.
  std::vector<double> mid_weights() const
  {
    std::vector<double> out(W, 0.0);
    double p = 1.0;
    for (const auto& w : weights)
    {
      for (unsigned i = 0; i < W; ++i) out[i] += w[i] * p;
      p *= t_mid;
    }
    return out;
  }
};

inline DiscreteDetector discretize(const SymbolicKernel& k, unsigned W, double h,
                                   Quadrature rule = Quadrature::Product)
{
  check_grid(W, h, rule);
  DiscreteDetector d;
  d.W = W;
  d.h = h;
  d.quadrature = rule;
  d.model = k.model;
  d.t_mid = d.T() / 2.0;
  const double T = d.T();

  std::vector<double> q;
  if (rule != Quadrature::Product) q = quadrature_weights(rule, W, h);
  for (const auto& kn : k.k)
  {
    const auto kc = kn.tau_coefficients(T);
    if (rule == Quadrature::Product)
    {
      d.weights.push_back(detail::product_weights(kc, W, h));
      continue;
    }
    std::vector<double> w(W);
    for (unsigned i = 0; i < W; ++i) w[i] = q[i] * detail::horner(kc, i * h);
    d.weights.push_back(std::move(w));
  }
  return d;
}

/// CSV with columns index, w0, w1, ...
inline void write_weights_csv(std::ostream& os, const DiscreteDetector& d)
{
  os << "index";
  for (std::size_t nu = 0; nu < d.weights.size(); ++nu) os << ",w" << nu;
  os << "\n";
  char buf[32];
  for (unsigned i = 0; i < d.W; ++i)
  {
    os << i;
    for (const auto& w : d.weights)
    {
      std::snprintf(buf, sizeof buf, "%.17g", w[i]);
      os << "," << buf;
    }
    os << "\n";
  }
}

} // namespace algcpd
