#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "bernoulli.hpp"
#include "core.hpp"
#include "quadrature.hpp"

namespace latzeta
{

/// Arguments of the Hurwitz-Lerch zeta function Phi(z, s, a) = sum_{n>=0} z^n / (a+n)^s.
struct LerchParams
{
    Complex z, s, a;

    /// Series convergence region: |z| < 1, or |z| = 1 with Re s > 1, and a
    /// away from the non-positive integers.
    void validate() const
    {
        if (!isfinite(z) || !isfinite(s) || !isfinite(a)) {
            throw Error(ErrorCode::InvalidArgument, "Lerch parameters must be finite");
        }
        if (a.real() <= 0.5) {
            const double nearest = std::round(a.real());
            if (nearest <= 0.0 && std::abs(a - Complex(nearest, 0.0)) <= 1e-9) {
                throw Error(ErrorCode::DomainError, "a is a non-positive integer");
            }
        }
        const double r = std::abs(z);
        if (r > 1.0 + unit_circle_slack) {
            throw Error(ErrorCode::DomainError, "|z| > 1 is outside the convergence region");
        }
        if (on_unit_circle() && !(s.real() > 1.0)) {
            throw Error(ErrorCode::DomainError, "|z| = 1 needs Re(s) > 1");
        }
    }

    bool on_unit_circle() const
    {
        return std::fabs(std::abs(z) - 1.0) <= unit_circle_slack;
    }
    bool z_is_one() const
    {
        return std::abs(z - 1.0) <= unit_circle_slack;
    }

    static constexpr double unit_circle_slack = 4.0 * std::numeric_limits<double>::epsilon();
};

namespace detail
{

inline Complex power_minus_s(const Complex &base, const Complex &s)
{
    return std::exp(-s * std::log(base));
}

// |(a+n)^-s| without forming the power.
inline double abs_power_minus_s(const Complex &base, const Complex &s)
{
    return std::exp(-s.real() * std::log(std::abs(base)) + s.imag() * std::arg(base));
}

inline constexpr double lerch_term_budget = 1e8;

// Hurwitz zeta by partial sums plus the Euler-MacLaurin expansion of the tail
// sum_{n>=N} (a+n)^-s = (a+N)^(1-s)/(s-1) + (a+N)^-s/2
//                        + sum_j B_2j/(2j)! (s)_(2j-1) (a+N)^(-s-2j+1).
inline Complex hurwitz_series(const Complex &s, const Complex &a, double tol)
{
    static constexpr double b2j_over_fact[] = {
        1.0 / 12.0,          -1.0 / 720.0,          1.0 / 30240.0,         -1.0 / 1209600.0,
        1.0 / 47900160.0,    -691.0 / 1307674368000.0, 1.0 / 74724249600.0,
    };
    double N = std::ceil(std::max({16.0, 2.0 * std::abs(s), 2.0 * std::abs(a)})) + 8.0;
    for (;;) {
        if (N > lerch_term_budget) {
            throw Error(ErrorCode::SlowConvergence, "Hurwitz series: tail expansion did not settle");
        }
        Complex sum{};
        for (double n = 0.0; n < N; n += 1.0) sum += power_minus_s(a + n, s);
        const Complex base = a + N;
        const Complex inv = 1.0 / base;
        Complex tail = power_minus_s(base, s - 1.0) / (s - 1.0) + 0.5 * power_minus_s(base, s);
        Complex rising = s;              // (s)_(2j-1)
        Complex pw = power_minus_s(base, s) * inv;
        double last = HUGE_VAL;
        for (int j = 0; j < 7; ++j) {
            const Complex term = b2j_over_fact[j] * rising * pw;
            tail += term;
            last = std::abs(term);
            rising *= (s + double(2 * j + 1)) * (s + double(2 * j + 2));
            pw *= inv * inv;
        }
        const Complex value = sum + tail;
        if (last <= 0.1 * tol * std::max(1.0, std::abs(value))) {
            return checked(value, "lerch_series");
        }
        N *= 2.0;
    }
}

}

/// Direct series. |z| < 1: partial sums until a geometric tail bound drops
/// below tol. z = 1: partial sums with the Euler-MacLaurin tail expansion.
/// Other |z| = 1: partial sums with the summation-by-parts tail bound.
inline Complex lerch_series(const LerchParams &p, double tol)
{
    p.validate();
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "lerch_series: tol must be positive");
    }
    if (p.on_unit_circle() && !(p.s.real() > 1.0 + 1e-6)) {
        throw Error(ErrorCode::DomainError, "|z| = 1 needs Re(s) > 1 + 1e-6 for the series");
    }
    if (p.z == Complex{}) {
        return checked(detail::power_minus_s(p.a, p.s), "lerch_series");   // 0^0 = 1
    }
    if (p.z_is_one()) {
        return detail::hurwitz_series(p.s, p.a, tol);
    }

    const double rz = std::abs(p.z);
    const double abs_a = std::abs(p.a);
    const double abel = 2.0 / std::abs(1.0 - p.z);   // bound on |sum_{n=N}^{M} z^n|
    Complex sum{};
    Complex zn = 1.0;
    for (double n = 0.0;; n += 1.0) {
        if (n > detail::lerch_term_budget) {
            throw Error(ErrorCode::SlowConvergence, "lerch_series: more than 1e8 terms needed");
        }
        const Complex base = p.a + n;
        sum += zn * detail::power_minus_s(base, p.s);
        zn *= p.z;
        if (n < 2.0 * abs_a + 2.0) {
            continue;
        }
        const double next = n + 1.0;
        const double gap = next - abs_a;
        const double mag = detail::abs_power_minus_s(p.a + next, p.s);
        const double target = tol * std::max(1.0, std::abs(sum));
        double bound;
        if (rz < 1.0) {
            // Ratio of consecutive term magnitudes beyond n+1.
            const double rho = rz * std::pow(1.0 + 1.0 / gap, std::fabs(p.s.real()))
                               * std::exp(std::fabs(p.s.imag()) * std::fabs(p.a.imag()) / (gap * gap));
            if (!(rho < 1.0)) continue;
            bound = std::pow(rz, next) * mag / (1.0 - rho);
        } else {
            // Abel summation: |tail| <= max|partial sums of z^n| * (|b_N| + total variation),
            // and the variation of (a+x)^-s beyond N is at most |s|/Re(s) * |b_N| * e^(...).
            bound = abel * mag * (1.0 + std::abs(p.s) / p.s.real() * std::exp(std::fabs(p.s.imag()) * 0.5 * std::numbers::pi));
        }
        if (bound < target) {
            return checked(sum, "lerch_series");
        }
    }
}

/// Integral representation over [1, inf) with P1 weights:
/// Phi = a^-s + z/(2(a+1)^s) + int_1^inf (h + h' P1), h(x) = z^x (x+a)^-s.
/// Requires Re a > 0 and z off (-inf, 0]; z must satisfy |z| < 1 or z = 1.
inline QuadratureResult lerch_coffey_result(const LerchParams &p, double tol)
{
    p.validate();
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "lerch_coffey: tol must be positive");
    }
    if (!(p.a.real() > 0.0)) {
        throw Error(ErrorCode::DomainError, "integral representation needs Re(a) > 0");
    }
    if (p.z.imag() == 0.0 && p.z.real() <= 0.0) {
        throw Error(ErrorCode::DomainError, "z on the branch cut (-inf, 0]");
    }
    const bool unit = p.on_unit_circle();
    if (unit && !p.z_is_one()) {
        throw Error(ErrorCode::DomainError, "integral representation on |z| = 1 is supported only at z = 1");
    }
    const Complex log_z = unit ? Complex{} : std::log(p.z);
    const Complex s = p.s, a = p.a;

    auto integrand = [&](double x) {
        const Complex base = x + a;
        const Complex h = std::exp(x * log_z - s * std::log(base));
        const Complex dh = h * (log_z - s / base);
        return h + dh * p1(x);
    };

    QuadratureResult r;
    if (unit) {
        LineOptions opt;
        opt.tol = tol;
        r = integrate_half_line(integrand, 1.0, s, opt);
    } else {
        // Truncate where the tail of int |h| + |h'| drops below tol/4.
        const double decay = -log_z.real();   // |z|^x = e^(-decay x)
        const double growth = std::max(0.0, -s.real());
        const double phase = std::exp(std::fabs(s.imag()) * std::fabs(std::arg(1.0 + a)));
        auto bound = [&](double R) {
            return std::exp(-decay * R) * std::pow(R + std::abs(a), growth) * std::pow(R + a.real(), -std::max(0.0, s.real()))
                   * (1.0 + std::abs(log_z) + std::abs(s) / R) * phase / decay;
        };
        double R = std::max(2.0, std::ceil(2.0 * growth / decay));
        while (bound(R) >= tol / 4.0) {
            R *= 1.25;
            if (R > 1e7) {
                throw Error(ErrorCode::SlowConvergence, "lerch_coffey: truncation point beyond 1e7");
            }
        }
        R = std::ceil(R);
        SegmentOptions opt{tol / 2.0, true};
        if (R - 1.0 > static_cast<double>(opt.panel_budget) / 2.0) {
            opt.panel_budget = static_cast<std::size_t>(2.0 * R);
        }
        r = integrate_segment(integrand, 1.0, R, opt);
        r.err += bound(R);
    }
    r.value += detail::power_minus_s(a, s) + 0.5 * p.z * detail::power_minus_s(a + 1.0, s);
    checked(r.value, "lerch_coffey");
    return r;
}

inline Complex lerch_coffey(const LerchParams &p, double tol)
{
    return lerch_coffey_result(p, tol).value;
}

/// zeta(s, a) = Phi(1, s, a), through the integral representation.
inline Complex hurwitz_zeta(const Complex &s, const Complex &a, double tol)
{
    if (!(s.real() > 1.0)) {
        throw Error(ErrorCode::DomainError, "Hurwitz zeta needs Re(s) > 1");
    }
    return lerch_coffey({1.0, s, a}, tol);
}

inline Complex riemann_zeta(const Complex &s, double tol)
{
    return hurwitz_zeta(s, 1.0, tol);
}

}
