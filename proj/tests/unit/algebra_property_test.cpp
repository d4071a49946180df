// Randomized algebraic identities over exact operators.

#include "algcpd/algebra/annihilator.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace algcpd;
using algcpd::test::RandomAlgebra;

namespace {
constexpr int kCases = 250;
}

TEST(AlgebraProperty, CompositionIsAssociative)
{
  RandomAlgebra gen(11);
  for (int i = 0; i < kCases; ++i)
  {
    const auto p = gen.op(), q = gen.op(), r = gen.op();
    ASSERT_EQ(compose(compose(p, q), r), compose(p, compose(q, r))) << "case " << i;
  }
}

TEST(AlgebraProperty, CompositionDistributes)
{
  RandomAlgebra gen(12);
  for (int i = 0; i < kCases; ++i)
  {
    const auto p = gen.op(), q = gen.op(), r = gen.op();
    ASSERT_EQ(compose(p, q + r), compose(p, q) + compose(p, r)) << "case " << i;
    ASSERT_EQ(compose(p + q, r), compose(p, r) + compose(q, r)) << "case " << i;
  }
}

TEST(AlgebraProperty, ActionIsCompatibleWithComposition)
{
  RandomAlgebra gen(13);
  for (int i = 0; i < kCases; ++i)
  {
    const auto p = gen.op(), q = gen.op();
    const auto f = gen.rational();
    ASSERT_EQ(compose(p, q).apply(f), p.apply(q.apply(f))) << "case " << i;
  }
}

TEST(AlgebraProperty, CommutatorWithDerivativeIsTheDerivative)
{
  RandomAlgebra gen(14);
  const DiffOperator d = DiffOperator::D();
  for (int i = 0; i < kCases; ++i)
  {
    const RationalFunction rho = gen.rational();
    const DiffOperator r(rho);
    ASSERT_EQ(compose(d, r) - compose(r, d), DiffOperator(rho.derivative())) << "case " << i;
  }
}

TEST(AlgebraProperty, SpanAnnihilation)
{
  RandomAlgebra gen(15);
  for (int i = 0; i < 200; ++i)
  {
    std::vector<RationalFunction> basis;
    const int n = gen.integer(1, 5);
    for (int j = 0; j < n; ++j) basis.push_back(gen.pooled_rational(4));
    const DiffOperator a = annihilator_of_span(basis);

    RationalFunction combo;
    for (const auto& f : basis)
    {
      ASSERT_TRUE(a.apply(f).is_zero()) << "case " << i;
      combo += RationalFunction(gen.scalar()) * f;
    }
    ASSERT_TRUE(a.apply(combo).is_zero()) << "case " << i;

    // Left rational multiples of an annihilator still annihilate.
    const DiffOperator scaled = gen.rational() * a;
    ASSERT_TRUE(scaled.apply(combo).is_zero()) << "case " << i;
  }
}

TEST(AlgebraProperty, DelayConjugationAtZeroIsIdentity)
{
  RandomAlgebra gen(16);
  for (int i = 0; i < kCases; ++i)
  {
    const auto p = gen.op();
    const OperatorPolynomial c = conjugate_by_delay(p);
    ASSERT_EQ(c.evaluate(0), p);
    ASSERT_EQ(c.degree(), static_cast<int>(p.order()));
  }
}
