#pragma once

#include "algcpd/algebra/annihilator.hpp"
#include "algcpd/detector/model.hpp"

#include <random>
#include <vector>

namespace algcpd {

/// Detector Omega(t_r) in strictly finite integral form.
struct DetectorOperator
{
  OperatorPolynomial omega;
  unsigned depth = 0;        ///< total number of leading s^{-1} factors
  ModelSpec model;
  unsigned max_deriv = 0;

  int degree() const { return omega.degree(); }
};

struct BuildOptions
{
  /// Additional s^{-1} factors on top of the minimal depth.
  unsigned extra_depth = 0;
  unsigned max_param = ModelSpec::kDefaultMaxParam;
};

namespace detail {

inline std::vector<RationalFunction> trend_basis(unsigned n1)
{
  std::vector<RationalFunction> out;
  for (unsigned nu = 0; nu <= n1; ++nu)
    out.push_back(RationalFunction::s_power(-static_cast<int>(nu + 1)));
  return out;
}

// Clears any non-s denominator factors by a common left polynomial multiple,
// then normalizes to strictly finite integral form.
inline DetectorOperator finish(OperatorPolynomial omega, const ModelSpec& model,
                               const BuildOptions& opts)
{
  Polynomial m = Polynomial::constant(1);
  for (const auto& c : omega.coefficients())
    for (const auto& [k, rho] : c.terms())
    {
      const Polynomial& den = rho.denominator();
      m = lcm(m, den.divide_by_s_power(den.valuation()));
    }
  if (m.degree() > 0) omega = RationalFunction(m) * omega;

  IntegralForm f = to_integral_form(omega);
  OperatorPolynomial op = std::move(f.op);
  if (opts.extra_depth > 0)
    op = RationalFunction::s_power(-static_cast<int>(opts.extra_depth)) * op;

  DetectorOperator d;
  d.omega = std::move(op);
  d.depth = f.depth + opts.extra_depth;
  d.model = model;
  d.max_deriv = d.omega.max_order();
  return d;
}

} // namespace detail

/// Detector linear in t_r for a known post-change shape.
///
/// With P = s^(n2+1) (monomial) or b/a (rational) and S = s^order,
/// Omega = pi1 o (d/ds + t_r) o P o S, where pi1 annihilates every
/// P*S*g and its derivative for g in the trend basis {s^-(nu+1)}.
inline DetectorOperator build_detector_linear(const ModelSpec& model,
                                              const BuildOptions& opts = {})
{
  model.validate(opts.max_param);
  RationalFunction P;
  if (auto* m = std::get_if<MonomialJump>(&model.jump))
    P = RationalFunction::s_power(static_cast<int>(m->n2 + 1));
  else if (auto* r = std::get_if<RationalJump>(&model.jump))
    P = RationalFunction(r->b, r->a);
  else
    throw Error("build_detector_linear: polynomial jump models need build_detector_general");

  const RationalFunction PS = P * RationalFunction::s_power(static_cast<int>(model.order));

  std::vector<RationalFunction> images;
  for (const auto& g : detail::trend_basis(model.n1))
  {
    RationalFunction h = PS * g;
    images.push_back(h.derivative());
    images.push_back(std::move(h));
  }
  const DiffOperator pi1 = annihilator_of_span(images);

  const OperatorPolynomial shift =
      OperatorPolynomial(DiffOperator::D()) + OperatorPolynomial::delay_symbol();
  OperatorPolynomial omega =
      OperatorPolynomial(pi1) * shift * OperatorPolynomial(DiffOperator(PS));
  return detail::finish(std::move(omega), model, opts);
}

/// Detector for a post-change polynomial with unknown coefficients.
///
/// s^(n2+1) turns the delayed part into (polynomial of degree n2) e^{-t_r s},
/// which (d/ds + t_r)^(n2+1) kills. The remaining trend images are removed
/// by a left annihilator, giving a detector of degree n2+1 in t_r.
inline DetectorOperator build_detector_general(const ModelSpec& model,
                                               const BuildOptions& opts = {})
{
  model.validate(opts.max_param);
  const auto* pj = std::get_if<PolynomialJump>(&model.jump);
  if (!pj) throw Error("build_detector_general: requires a polynomial jump model");

  const int lift = static_cast<int>(pj->n2 + 1);
  std::vector<RationalFunction> lifted;
  for (unsigned nu = 0; nu <= pj->n2; ++nu)
    lifted.push_back(RationalFunction::s_power(lift - static_cast<int>(nu + 1)));
  const DiffOperator jumpKiller = annihilator_of_span(lifted);

  const RationalFunction M =
      RationalFunction::s_power(lift + static_cast<int>(model.order));
  const OperatorPolynomial core =
      conjugate_by_delay(jumpKiller) * OperatorPolynomial(DiffOperator(M));

  std::vector<RationalFunction> images;
  for (const auto& g : detail::trend_basis(model.n1))
    for (const auto& c : core.coefficients())
    {
      RationalFunction img = c.apply(g);
      if (!img.is_zero()) images.push_back(std::move(img));
    }

  OperatorPolynomial omega = core;
  if (!images.empty())
    omega = OperatorPolynomial(annihilator_of_span(images)) * core;
  return detail::finish(std::move(omega), model, opts);
}

/// Linear builder for monomial/rational jumps, general builder otherwise.
inline DetectorOperator build_detector(const ModelSpec& model, const BuildOptions& opts = {})
{
  if (std::holds_alternative<PolynomialJump>(model.jump))
    return build_detector_general(model, opts);
  return build_detector_linear(model, opts);
}

/// Signal-space elements whose delayed copies the detector must cancel.
inline std::vector<RationalFunction> jump_basis(const ModelSpec& model)
{
  const RationalFunction unprefix = RationalFunction::s_power(-static_cast<int>(model.order));
  std::vector<RationalFunction> out;
  if (auto* m = std::get_if<MonomialJump>(&model.jump))
    out.push_back(unprefix * RationalFunction::s_power(-static_cast<int>(m->n2 + 1)));
  else if (auto* r = std::get_if<RationalJump>(&model.jump))
    out.push_back(unprefix * RationalFunction(r->a, r->b));
  else
    for (unsigned nu = 0; nu <= std::get<PolynomialJump>(model.jump).n2; ++nu)
      out.push_back(unprefix * RationalFunction::s_power(-static_cast<int>(nu + 1)));
  return out;
}

/// Signal-space trend family the detector must annihilate.
inline std::vector<RationalFunction> trend_basis(const ModelSpec& model)
{
  return detail::trend_basis(model.n1);
}

struct VerifyReport
{
  bool passed = true;
  std::size_t checks = 0;
  std::size_t nonzero = 0;
  RationalFunction first_residual;   ///< zero when passed
  std::string where;

  explicit operator bool() const { return passed; }
};

/// Exact symbolic self-check at three random rational values of t_r.
///
/// Trend elements g must satisfy Omega(t_r) g = 0. Delayed jump elements
/// w e^{-t_r s} are checked through Omega(w e^{-t_r s}) =
/// e^{-t_r s} Omega[d/ds -> d/ds - t_r](w).
inline VerifyReport verify_detector(const DetectorOperator& d, std::uint64_t seed = 0x5eed)
{
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> numDist(-9, 9);
  std::uniform_int_distribution<int> denDist(1, 7);

  VerifyReport rep;
  auto record = [&](const RationalFunction& r, const std::string& where) {
    ++rep.checks;
    if (r.is_zero()) return;
    if (rep.passed)
    {
      rep.first_residual = r;
      rep.where = where;
    }
    rep.passed = false;
    ++rep.nonzero;
  };

  const auto trends = trend_basis(d.model);
  const auto jumps = jump_basis(d.model);
  for (int trial = 0; trial < 3; ++trial)
  {
    int num = 0;
    while (num == 0) num = numDist(rng);
    const Rational t = Rational(num) / denDist(rng);
    const DiffOperator op = d.omega.evaluate(t);
    for (std::size_t i = 0; i < trends.size(); ++i)
      record(op.apply(trends[i]), "trend[" + std::to_string(i) + "] at t=" + to_string(t));
    const DiffOperator shifted = conjugate_by_delay(op).evaluate(-t);
    for (std::size_t i = 0; i < jumps.size(); ++i)
      record(shifted.apply(jumps[i]), "jump[" + std::to_string(i) + "] at t=" + to_string(t));
  }
  return rep;
}

} // namespace algcpd
