#include <gtest/gtest.h>

#include <random>

#include "latzeta/bernoulli.hpp"
#include "latzeta/em2d.hpp"
#include "latzeta/quadrature.hpp"

using namespace latzeta;

TEST(Frac, Examples)
{
    EXPECT_EQ(frac(0.25), 0.25);
    EXPECT_EQ(frac(-0.25), 0.75);
    EXPECT_EQ(frac(3.0), 0.0);
    EXPECT_EQ(frac(-3.0), 0.0);
}

TEST(Frac, TinyNegativeArgumentStaysBelowOne)
{
    const double x = -1e-20;
    EXPECT_LT(frac(x), 1.0);
    EXPECT_GE(frac(x), 0.0);
}

TEST(P1, Examples)
{
    EXPECT_EQ(p1(0.25), -0.25);
    EXPECT_EQ(p1(3.0), -0.5);
    EXPECT_EQ(p1(-0.25), 0.25);
    EXPECT_EQ(p1(0.0), -0.5);
    EXPECT_EQ(p1(-7.0), -0.5);
}

TEST(P1, PeriodicBitExact)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        // Multiples of 2^-20 keep x + 1 exact, so the comparison is about p1.
        const double x = std::ldexp(std::round(std::ldexp(u(rng), 20)), -20);
        EXPECT_EQ(p1(x + 1.0), p1(x)) << x;
    }
}

TEST(P1, OddOffTheIntegers)
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        if (x == std::floor(x)) continue;
        EXPECT_NEAR(p1(-x), -p1(x), 1e-15 * (1.0 + std::fabs(x)));
    }
}

TEST(P1, ZeroMean)
{
    auto f = [](double x) { return Complex(p1(x)); };
    EXPECT_NEAR(std::abs(integrate_segment(f, 0.0, 1.0, SegmentOptions{1e-13, true}).value), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(integrate_segment(f, -3.0, 4.0, SegmentOptions{1e-13, true}).value), 0.0, 1e-13);
}

TEST(P1, IntegerConventionMakesTheLinearSumExact)
{
    // Sum_{0<n<=beta} n needs P1(beta) = -1/2 at the right end.
    const Function1D x = [](double t) { return Complex(t); };
    const Function1D one = [](double) { return Complex(1.0); };
    for (double beta : {1.0, 2.0, 7.0, 10.0}) {
        EXPECT_NEAR(em_sum_1d(x, one, 0.0, beta, 1e-13).real(), beta * (beta + 1.0) / 2.0, 1e-10);
    }
}
