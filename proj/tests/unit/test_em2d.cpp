#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "latzeta/em2d.hpp"
#include "latzeta/test_functions.hpp"

using namespace latzeta;

namespace
{

Function1D constant(double c)
{
    return [c](double) { return Complex(c); };
}

ErrorCode code_of(const std::function<void()> &fn)
{
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::InvalidArgument;
}

// Sum_{alpha<n<=beta} phi(n), computed directly.
Complex direct_sum(const Function1D &phi, double alpha, double beta)
{
    Complex s{};
    for (double n = std::floor(alpha) + 1.0; n <= beta; n += 1.0) s += phi(n);
    return s;
}

}

TEST(EmSum1d, Examples)
{
    EXPECT_NEAR(em_sum_1d(constant(1.0), constant(0.0), 0.0, 5.0, 1e-12).real(), 5.0, 1e-12);
    const Function1D x = [](double t) { return Complex(t); };
    EXPECT_NEAR(em_sum_1d(x, constant(1.0), 0.0, 10.0, 1e-12).real(), 55.0, 1e-10);
    const Function1D x2 = [](double t) { return Complex(t * t); };
    const Function1D d2 = [](double t) { return Complex(2.0 * t); };
    EXPECT_NEAR(em_sum_1d(x2, d2, 0.0, 10.0, 1e-12).real(), 385.0, 1e-10);
}

TEST(EmSum1d, NonIntegerEndpointsPickTheSameIntegers)
{
    const Function1D f = [](double t) { return std::exp(Complex(-0.1 * t, 0.7 * t)); };
    const Function1D df = [](double t) { return Complex(-0.1, 0.7) * std::exp(Complex(-0.1 * t, 0.7 * t)); };
    for (auto [a, b] : {std::pair{-2.3, 4.7}, std::pair{0.5, 0.9}, std::pair{-3.0, 2.2}, std::pair{1.9, 7.0}}) {
        EXPECT_NEAR(std::abs(em_sum_1d(f, df, a, b, 1e-12) - direct_sum(f, a, b)), 0.0, 1e-11) << a << ' ' << b;
    }
}

TEST(EmSum1d, RejectsEmptyInterval)
{
    EXPECT_EQ(code_of([] { em_sum_1d(constant(1.0), constant(0.0), 2.0, 2.0, 1e-10); }), ErrorCode::InvalidArgument);
}

TEST(EmSumLine, MatchesTheCosecantSquaredSeries)
{
    // sum_n (n + c)^-2 = pi^2 / sin^2(pi c)
    const Complex c(0.3, 0.45);
    const Function1D f = [&](double x) { return 1.0 / ((x + c) * (x + c)); };
    const Function1D df = [&](double x) { return -2.0 / ((x + c) * (x + c) * (x + c)); };
    const double pi = std::numbers::pi;
    const Complex s = std::sin(pi * c);
    const Complex exact = pi * pi / (s * s);
    const auto r = em_sum_line(f, df, -c.real(), 2.0, 1e-11);
    EXPECT_NEAR(std::abs(r.value - exact), 0.0, 1e-9);
}

TEST(EmSum2d, Examples)
{
    const auto one = *named_test_function("one");
    EXPECT_NEAR(std::abs(em_sum_2d(one, {0, 2, 0, 2}, 1e-12).total - 4.0), 0.0, 1e-11);
    const auto xy = *named_test_function("xy");
    EXPECT_NEAR(std::abs(em_sum_2d(xy, {0, 3, 0, 2}, 1e-12).total - 18.0), 0.0, 1e-10);
    const auto sq = *named_test_function("x2+y2");
    const Rect r{0, 4, 0, 4};
    EXPECT_NEAR(std::abs(brute_force_sum_2d(sq.phi, r) - 240.0), 0.0, 0.0);
    EXPECT_NEAR(std::abs(em_sum_2d(sq, r, 1e-12).total - 240.0), 0.0, 1e-9);
}

TEST(EmSum2d, BreakdownAddsUp)
{
    const auto f = *named_test_function("inv-cube");
    const auto b = em_sum_2d(f, {0, 5, 0, 5}, 1e-10);
    EXPECT_EQ(b.total, b.i1 + b.i2 + b.i3 + b.i4);
    EXPECT_GE(b.err, 0.0);
}

TEST(EmSum2d, InverseCubeAgainstBruteForce)
{
    const auto f = *named_test_function("inv-cube");
    const Rect r{0, 20, 0, 20};
    const Complex brute = brute_force_sum_2d(f.phi, r);
    EXPECT_NEAR(std::abs(em_sum_2d(f, r, 1e-10).total - brute), 0.0, 1e-9);
}

TEST(EmSum2d, RandomFunctionsMatchBruteForce)
{
    std::mt19937_64 rng(77);
    const double tol = 1e-9;
    for (int i = 0; i < 50; ++i) {
        const auto c = random_em_case(rng);
        const auto f = c.fn.function();
        const auto b = em_sum_2d(f, c.rect, tol);
        EXPECT_LE(std::abs(b.total - brute_force_sum_2d(f.phi, c.rect)), 10.0 * tol) << "case " << i;
    }
}

TEST(EmSum2d, OuterOneDimensionalFormulaOverRowSums)
{
    // Applying the 1-D formula in y to exact row sums gives the same total.
    std::mt19937_64 rng(5);
    for (int i = 0; i < 5; ++i) {
        const auto c = random_em_case(rng);
        const auto f = c.fn.function();
        const double n0 = std::floor(c.rect.alpha1) + 1.0, n1 = std::floor(c.rect.beta1);
        const Function1D rows = [&](double y) {
            Complex s{};
            for (double n = n0; n <= n1; n += 1.0) s += f.phi(n, y);
            return s;
        };
        const Function1D drows = [&](double y) {
            Complex s{};
            for (double n = n0; n <= n1; n += 1.0) s += f.dy(n, y);
            return s;
        };
        const Complex nested = em_sum_1d(rows, drows, c.rect.alpha2, c.rect.beta2, 1e-11);
        EXPECT_NEAR(std::abs(nested - em_sum_2d(f, c.rect, 1e-11).total), 0.0, 1e-9);
    }
}

TEST(EmSum2d, ShiftingAnEdgeAddsOneRowOrColumn)
{
    std::mt19937_64 rng(9);
    const auto c = random_em_case(rng);
    const auto f = c.fn.function();
    const Complex base = em_sum_2d(f, c.rect, 1e-11).total;

    Rect wider = c.rect;
    wider.beta1 += 1.0;
    Complex column{};
    for (double m = std::floor(c.rect.alpha2) + 1.0; m <= c.rect.beta2; m += 1.0) {
        column += f.phi(std::floor(wider.beta1), m);
    }
    EXPECT_NEAR(std::abs(em_sum_2d(f, wider, 1e-11).total - base - column), 0.0, 1e-9);

    Rect lower = c.rect;
    lower.alpha2 -= 1.0;
    Complex row{};
    for (double n = std::floor(c.rect.alpha1) + 1.0; n <= c.rect.beta1; n += 1.0) {
        row += f.phi(n, std::floor(c.rect.alpha2));
    }
    EXPECT_NEAR(std::abs(em_sum_2d(f, lower, 1e-11).total - base - row), 0.0, 1e-9);
}

TEST(EmSum2d, RejectsEmptyRectangle)
{
    const auto one = *named_test_function("one");
    EXPECT_EQ(code_of([&] { em_sum_2d(one, {1, 1, 0, 2}, 1e-9); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { em_sum_2d(one, {0, 2, 3, 1}, 1e-9); }), ErrorCode::InvalidArgument);
}

TEST(BruteForce, Examples)
{
    const auto one = *named_test_function("one");
    EXPECT_EQ(brute_force_sum_2d(one.phi, {0, 2, 0, 2}), Complex(4.0));
    auto sum = [](double n, double m) { return Complex(n + m); };
    EXPECT_EQ(brute_force_sum_2d(sum, {0, 1, 0, 1}), Complex(2.0));
    EXPECT_EQ(brute_force_sum_2d(sum, {0.5, 0.9, 0, 3}), Complex(0.0));
}

TEST(BruteForce, BudgetExceeded)
{
    const auto one = *named_test_function("one");
    EXPECT_EQ(code_of([&] { brute_force_sum_2d(one.phi, {0, 10000, 0, 10000}); }), ErrorCode::BudgetExceeded);
}

TEST(Partials, ValidatorAcceptsExactAndRejectsWrongPartials)
{
    std::mt19937_64 rng(1);
    const auto c = random_em_case(rng);
    auto f = c.fn.function();
    EXPECT_LT(partials_discrepancy(f, c.rect), 1e-6);
    EXPECT_NO_THROW(validate_partials(f, c.rect));

    auto wrong = f;
    wrong.dxy = [g = f.dxy](double x, double y) { return 1.01 * g(x, y); };
    EXPECT_EQ(code_of([&] { validate_partials(wrong, c.rect); }), ErrorCode::InvalidArgument);
}

TEST(Registry, KnownNames)
{
    for (const char *name : {"one", "xy", "x2+y2", "inv-cube", "random:7"}) {
        const auto f = named_test_function(name);
        ASSERT_TRUE(f.has_value()) << name;
        EXPECT_LT(partials_discrepancy(*f, {0.2, 3.1, 0.3, 2.9}), 1e-5) << name;
    }
    EXPECT_FALSE(named_test_function("nope").has_value());
    EXPECT_FALSE(named_test_function("random:x").has_value());
}
