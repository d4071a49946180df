#include "algcpd/kernel/oracle.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <algorithm>

using namespace algcpd;
using algcpd::test::s;

namespace {

DetectorOperator single(const DiffOperator& op)
{
  DetectorOperator d;
  d.omega = OperatorPolynomial(op);
  return d;
}

DetectorOperator step_detector() { return build_detector(ModelSpec{0, MonomialJump{0}, 0}); }

// K(T, tau) from a list of (T power, tau power, coefficient).
BivariatePolynomial bp(std::initializer_list<std::tuple<unsigned, unsigned, int>> terms)
{
  BivariatePolynomial out;
  for (const auto& [i, j, c] : terms) out += BivariatePolynomial::monomial(Rational(c), i, j);
  return out;
}

double residual_on_constant(const DiscreteDetector& d, std::size_t nu)
{
  double acc = 0.0;
  for (double w : d.weights[nu]) acc += w;
  return acc;
}

} // namespace

TEST(Kernelize, CauchyExamples)
{
  EXPECT_EQ(kernelize(single(DiffOperator(s(-2)))).k.at(0), bp({{1, 0, 1}, {0, 1, -1}}));
  EXPECT_EQ(kernelize(single(DiffOperator::term(s(-1), 2))).k.at(0), bp({{0, 2, 1}}));
  // s^-3 -> (T - tau)^2 / 2
  const BivariatePolynomial k3 = kernelize(single(DiffOperator(s(-3)))).k.at(0);
  EXPECT_EQ(k3.coeff(2, 0), Rational(1, 2));
  EXPECT_EQ(k3.coeff(1, 1), Rational(-1));
  EXPECT_EQ(k3.coeff(0, 2), Rational(1, 2));
}

TEST(Kernelize, StepDetector)
{
  const SymbolicKernel k = kernelize(step_detector());
  ASSERT_EQ(k.degree(), 1);
  EXPECT_EQ(k.k[0], bp({{0, 2, 3}, {1, 1, -2}}));
  EXPECT_EQ(k.k[1], bp({{1, 0, 1}, {0, 1, -2}}));
  EXPECT_EQ(to_text(k), "K0: 3*tau^2 - 2*T*tau\nK1: -2*tau + T\n");
  EXPECT_TRUE(k.k[0].integrate_tau_moment().is_zero());
  EXPECT_TRUE(k.k[1].integrate_tau_moment().is_zero());
}

TEST(Kernelize, RejectsNonStrictOperators)
{
  EXPECT_THROW(kernelize(single(DiffOperator::term(RationalFunction(1), 1))), Error);
  EXPECT_THROW(kernelize(single(DiffOperator(s(-1) + RationalFunction(2)))), Error);
  EXPECT_THROW(kernelize(single(DiffOperator(algcpd::test::rf({1}, {1, 1})))), Error);
}

TEST(Kernelize, TrendAnnihilationIsAnIdentityInT)
{
  for (unsigned n1 = 0; n1 <= 2; ++n1)
    for (unsigned n2 = 0; n2 <= 2; ++n2)
      for (unsigned order = 0; order <= 2; ++order)
        for (bool general : {false, true})
        {
          const ModelSpec m = general ? ModelSpec{n1, PolynomialJump{n2}, order}
                                      : ModelSpec{n1, MonomialJump{n2}, order};
          const SymbolicKernel k = kernelize(build_detector(m));
          EXPECT_TRUE(kernel_annihilates_trends(k, n1)) << m.describe();
        }
}

TEST(Quadrature, Weights)
{
  const auto q = quadrature_weights(Quadrature::Trapezoid, 5, 0.1);
  const std::vector<double> expect{0.05, 0.1, 0.1, 0.1, 0.05};
  ASSERT_EQ(q.size(), expect.size());
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_DOUBLE_EQ(q[i], expect[i]);

  const auto sq = quadrature_weights(Quadrature::Simpson, 5, 3.0);
  const std::vector<double> sexpect{1, 4, 2, 4, 1};
  for (std::size_t i = 0; i < sq.size(); ++i) EXPECT_DOUBLE_EQ(sq[i], sexpect[i]);

  EXPECT_THROW(quadrature_weights(Quadrature::Simpson, 4, 1.0), Error);
  EXPECT_THROW(parse_quadrature("midpoint"), Error);
  EXPECT_EQ(parse_quadrature("simpson"), Quadrature::Simpson);
}

TEST(Discretize, Preconditions)
{
  const SymbolicKernel k = kernelize(step_detector());
  EXPECT_THROW(discretize(k, 7, 0.01), Error);
  EXPECT_THROW(discretize(k, 64, 0.0), Error);
  EXPECT_THROW(discretize(k, 64, 0.01, Quadrature::Simpson), Error);
  EXPECT_NO_THROW(discretize(k, 65, 0.01, Quadrature::Simpson));
}

TEST(Discretize, TrapezoidWeightsSampleTheKernel)
{
  const SymbolicKernel k = kernelize(step_detector());
  const DiscreteDetector d = discretize(k, 9, 0.25, Quadrature::Trapezoid);
  EXPECT_DOUBLE_EQ(d.T(), 2.0);
  EXPECT_DOUBLE_EQ(d.t_mid, 1.0);
  // K1 = T - 2 tau at tau = 0.5: 1.0, trapezoid weight h
  EXPECT_DOUBLE_EQ(d.weights[1][2], 0.25 * 1.0);
  EXPECT_DOUBLE_EQ(d.weights[1][0], 0.125 * 2.0);
  EXPECT_DOUBLE_EQ(d.weights[0][8], 0.125 * (3 * 4.0 - 2 * 2 * 2.0));
}

TEST(Discretize, TrapezoidConvergesAtSecondOrder)
{
  const SymbolicKernel k = kernelize(step_detector());
  std::vector<double> r;
  for (unsigned W : {11u, 21u, 41u, 81u})
    r.push_back(std::abs(residual_on_constant(discretize(k, W, 1.0 / (W - 1), Quadrature::Trapezoid), 0)));
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
  {
    EXPECT_GT(r[i], 0.0);
    EXPECT_GE(std::log2(r[i] / r[i + 1]), 1.9);
  }
  // Euler-Maclaurin: residual = h^2/12 (K0'(T) - K0'(0)) = h^2 T / 2
  EXPECT_NEAR(r.back(), 0.5 * std::pow(1.0 / 80, 2), 1e-12);
}

TEST(Discretize, ProductRuleAnnihilatesAffineSignals)
{
  const DiscreteDetector d = discretize(kernelize(build_detector(ModelSpec{1, MonomialJump{0}, 0})), 64, 0.01);
  for (std::size_t nu = 0; nu < d.weights.size(); ++nu)
  {
    double c = 0.0, lin = 0.0, scale = 0.0;
    for (unsigned i = 0; i < d.W; ++i)
    {
      c += d.weights[nu][i] * 5.0;
      lin += d.weights[nu][i] * (2.0 - 3.0 * i * d.h);
      scale += std::abs(d.weights[nu][i]) * 5.0;
    }
    EXPECT_LE(std::abs(c), 1e-13 * scale);
    EXPECT_LE(std::abs(lin), 1e-13 * scale);
  }
}

TEST(Discretize, ClosedFormStepResponse)
{
  // x = c + g H(tau - r): v0 = g r^2 (T - r), v1 = -g r (T - r)
  const unsigned W = 4001;
  const double h = 1.0 / (W - 1), T = 1.0, c = 0.7, g = 2.5;
  const DiscreteDetector d = discretize(kernelize(step_detector()), W, h);
  for (double r : {0.2, 0.5, 0.6125, 0.9})
  {
    std::vector<double> x(W);
    for (unsigned i = 0; i < W; ++i) x[i] = c + (i * h >= r ? g : 0.0);
    const auto v = window_values(d, x.data());
    EXPECT_NEAR(v[0], g * r * r * (T - r), 1e-3) << r;
    EXPECT_NEAR(v[1], -g * r * (T - r), 1e-3) << r;
    const double tmid = 0.5;
    EXPECT_NEAR(v[0] + v[1] * tmid, g * r * (T - r) * (r - tmid), 1e-3) << r;
  }
}

TEST(Discretize, WeightsCsv)
{
  const DiscreteDetector d = discretize(kernelize(step_detector()), 9, 0.25, Quadrature::Trapezoid);
  std::ostringstream os;
  write_weights_csv(os, d);
  const std::string out = os.str();
  EXPECT_EQ(out.substr(0, out.find('\n')), "index,w0,w1");
  EXPECT_NE(out.find("\n2,"), std::string::npos);
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 10);
}

TEST(Oracle, ZeroSignalIsExactlyZero)
{
  const std::vector<double> x(64, 0.0);
  for (auto rule : {Quadrature::Trapezoid, Quadrature::Product})
    for (double v : oracle_iterated_integration(step_detector(), x, 0.01, rule)) EXPECT_EQ(v, 0.0);
}

TEST(Oracle, MatchesKernelPathOnSmoothSignals)
{
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const std::vector<ModelSpec> models{{0, MonomialJump{0}, 0}, {1, MonomialJump{0}, 0},
                                      {2, MonomialJump{1}, 1}, {1, PolynomialJump{1}, 0}};
  int cases = 0;
  for (const auto& m : models)
  {
    const DetectorOperator op = build_detector(m);
    const DiscreteDetector d = discretize(kernelize(op), 64, 0.01);
    for (int trial = 0; trial < 25; ++trial, ++cases)
    {
      const double a = U(rng), b = U(rng), c = U(rng), f = 1 + 4 * std::abs(U(rng)), ph = U(rng);
      std::vector<double> x(d.W);
      for (unsigned i = 0; i < d.W; ++i)
      {
        const double t = i * d.h;
        x[i] = a + b * t + c * t * t + std::sin(2 * M_PI * f * t + ph);
      }
      const auto kv = window_values(d, x.data());
      const auto ov = oracle_iterated_integration(op, x, d.h);
      ASSERT_EQ(kv.size(), ov.size());
      for (std::size_t nu = 0; nu < kv.size(); ++nu)
      {
        double scale = 0.0;
        for (unsigned i = 0; i < d.W; ++i) scale += std::abs(d.weights[nu][i] * x[i]);
        EXPECT_LE(std::abs(kv[nu] - ov[nu]), 1e-10 * scale) << m.describe() << " trial " << trial;
      }
    }
  }
  EXPECT_EQ(cases, 100);
}

TEST(Oracle, NoiseFreeStep)
{
  const DetectorOperator op = step_detector();
  const DiscreteDetector d = discretize(kernelize(op), 64, 0.01);
  std::vector<double> x(64);
  for (unsigned i = 0; i < 64; ++i) x[i] = i >= 27 ? 1.0 : 0.0;
  const auto kv = window_values(d, x.data());
  const auto ov = oracle_iterated_integration(op, x, d.h);
  for (std::size_t nu = 0; nu < 2; ++nu) EXPECT_NEAR(kv[nu], ov[nu], 1e-10 * std::abs(ov[nu]));
}

TEST(Oracle, TrapezoidAgreesToSecondOrder)
{
  const DetectorOperator op = step_detector();
  double prev = 0.0;
  for (unsigned W : {33u, 65u, 129u})
  {
    const double h = 1.0 / (W - 1);
    const DiscreteDetector d = discretize(kernelize(op), W, h, Quadrature::Trapezoid);
    std::vector<double> x(W);
    for (unsigned i = 0; i < W; ++i) x[i] = std::exp(i * h);
    const double err = std::abs(window_values(d, x.data())[0] - oracle_iterated_integration(op, x, h, Quadrature::Trapezoid)[0]);
    if (prev > 0.0) EXPECT_GE(std::log2(prev / err), 1.8);
    prev = err;
  }
}
