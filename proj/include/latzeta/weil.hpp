#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "bernoulli.hpp"
#include "core.hpp"
#include "em2d.hpp"
#include "extrapolation.hpp"
#include "quadrature.hpp"

namespace latzeta
{

/// E_k(a, W) = sum over w in W of (a + w)^-k.
struct WeilParams
{
    Lattice lat;
    Complex a;
    int k = 1;

    void validate() const
    {
        if (k < 1) {
            throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
        }
        if (!isfinite(a)) {
            throw Error(ErrorCode::InvalidArgument, "a must be finite");
        }
        const LatticeCoords c = lat.coordinates(-a);
        if (std::fabs(c.x0 - std::round(c.x0)) <= 1e-9 && std::fabs(c.y0 - std::round(c.y0)) <= 1e-9) {
            throw Error(ErrorCode::PointOnLattice, "a lies on the lattice");
        }
    }
};

enum class WeilMethod { Direct, Integral };

inline const char *to_string(WeilMethod m)
{
    return m == WeilMethod::Direct ? "direct" : "integral";
}

struct WeilReport
{
    Complex value;
    Complex j1, j2, j3;
    Complex row_correction;
    double eps_used = 0.0;
    double err = 0.0;
    WeilMethod method = WeilMethod::Direct;
    std::size_t rows = 0;    // direct: rows summed (2M + 1)
    std::size_t evals = 0;   // integrand or term evaluations
};

/// c^n for n >= 0 by binary exponentiation.
inline Complex ipow(Complex c, int n)
{
    Complex r = 1.0;
    while (n > 0) {
        if (n & 1) r *= c;
        c *= c;
        n >>= 1;
    }
    return r;
}

struct WeilJet
{
    Complex f, fx, fy, fxy;
};

/// f = (a + x w1 + y w2)^-k and its partials in x, y.
inline WeilJet weil_integrand(const WeilParams &p, double x, double y)
{
    const Complex c = p.a + x * p.lat.w1() + y * p.lat.w2();
    if (!(std::abs(c) > 1e-12)) {
        throw Error(ErrorCode::PoleHit, "integrand evaluated at the pole");
    }
    const Complex f = 1.0 / ipow(c, p.k);
    const Complex g = f / c;
    const double k = p.k;
    return {f, -k * p.lat.w1() * g, -k * p.lat.w2() * g, k * (k + 1.0) * p.lat.w1() * p.lat.w2() * g / c};
}

namespace detail
{

inline constexpr double max_summation_index = 1048576.0;   // 2^20

struct RowSum
{
    Complex value;
    double err = 0.0;
    std::size_t terms = 0;
};

// lim_N sum_{n=-N}^{N} (b + n w1)^-k (without n = 0 when skip_zero), from
// partial sums at N, 2N, 4N, ... and Richardson elimination of the N^-j tail.
inline RowSum symmetric_row_sum(const Complex &b, const Complex &w1, int k, bool skip_zero, double tol)
{
    const Complex c = b / w1;
    auto term = [&](double n) { return 1.0 / ipow(c + n, k); };

    double N = 16.0;
    while (N < 4.0 * std::abs(c) + 4.0) N *= 2.0;
    RowSum out;
    Complex s = skip_zero ? Complex{} : term(0.0);
    auto extend = [&](double from, double to) {
        for (double n = from + 1.0; n <= to; n += 1.0) s += term(n) + term(-n);
        out.terms += static_cast<std::size_t>(2.0 * (to - from));
    };
    extend(0.0, N);

    // Odd k: the pair (c+n)^-k + (c-n)^-k decays like n^-(k+1), so the tail is O(N^-k).
    RichardsonTable table(k % 2 == 0 ? 1.0 - k : -static_cast<double>(k));
    table.push(s);
    const Complex scale = 1.0 / ipow(w1, k);
    for (int level = 1;; ++level) {
        if (2.0 * N > max_summation_index) {
            throw Error(ErrorCode::SlowConvergence, "row sum needs more than 2^20 terms per side");
        }
        extend(N, 2.0 * N);
        N *= 2.0;
        table.push(s);
        if (level >= 3 && table.last_change() <= tol * (1.0 + std::abs(table.best()))) {
            out.value = table.best() * scale;
            out.err = table.last_change() * std::abs(scale);
            return out;
        }
    }
}

// Outer Eisenstein limit over rows: R(0) + sum_{m>=1} (R(m) + R(-m)). The
// pair sums decay geometrically, so summation stops once two consecutive
// pairs are negligible.
template <class Row>
WeilReport eisenstein_rows(Row &&row, double tol)
{
    WeilReport rep;
    RowSum r0 = row(0.0);
    Complex sum = r0.value;
    rep.err = r0.err;
    rep.evals = r0.terms;
    double prev = HUGE_VAL;
    for (double m = 1.0;; m += 1.0) {
        if (m > max_summation_index) {
            throw Error(ErrorCode::SlowConvergence, "outer Eisenstein sum needs more than 2^20 rows per side");
        }
        const RowSum up = row(m), down = row(-m);
        const Complex pair = up.value + down.value;
        sum += pair;
        rep.err += up.err + down.err;
        rep.evals += up.terms + down.terms;
        const double mag = std::abs(pair);
        const double target = tol * (1.0 + std::abs(sum)) / 8.0;
        if (m >= 2.0 && mag <= target && prev <= target) {
            rep.err += mag;
            rep.rows = static_cast<std::size_t>(2.0 * m + 1.0);
            break;
        }
        prev = mag;
    }
    rep.value = checked(sum, "Eisenstein summation");
    rep.method = WeilMethod::Direct;
    return rep;
}

}

/// Direct Eisenstein summation: lim_M sum_{|m|<=M} lim_N sum_{|n|<=N}.
/// Valid for every k >= 1; k = 1, 2 depend on this summation order.
inline WeilReport weil_direct(const WeilParams &p, double tol = 1e-10)
{
    p.validate();
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "weil_direct: tol must be positive");
    }
    auto row = [&](double m) {
        return detail::symmetric_row_sum(p.a + m * p.lat.w2(), p.lat.w1(), p.k, false, tol / 16.0);
    };
    return detail::eisenstein_rows(row, tol);
}

/// G_k(W) = sum over nonzero w of w^-k, k >= 3.
inline Complex eisenstein_series(const Lattice &lat, int k, double tol = 1e-10)
{
    if (k < 3) {
        throw Error(ErrorCode::DomainError, "Eisenstein series needs k >= 3");
    }
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "eisenstein_series: tol must be positive");
    }
    auto row = [&](double m) {
        return detail::symmetric_row_sum(m * lat.w2(), lat.w1(), k, m == 0.0, tol / 16.0);
    };
    return detail::eisenstein_rows(row, tol).value;
}

/// The split used by weil_integral: the strips start at y0 + eps and
/// y0 - eps; `row` is the integer row inside (y0 - eps, y0 + eps], if any,
/// which must then be summed separately.
struct EpsSplit
{
    double eps = 0.0;
    bool has_row = false;
    double row = 0.0;
};

/// Keeps eps when no integer falls in (y0 - eps, y0 + eps]. Otherwise shrinks
/// eps below the distance to that integer, provided the shrink is at most 0.2
/// and eps stays >= 0.05; failing that, eps is kept and the row is reported.
inline EpsSplit choose_eps(double y0, double eps)
{
    const double m = std::floor(y0 + eps);
    if (!(m > y0 - eps)) {
        return {eps, false, 0.0};
    }
    const double d = std::fabs(y0 - m);
    if (d > 1e-9) {
        const double shrunk = 0.9 * d;
        if (shrunk >= std::max(eps - 0.2, 0.05)) {
            return {shrunk, false, 0.0};
        }
    }
    return {eps, true, m};
}

/// E_k(a, W) from the two-dimensional summation formula: a line integral J1
/// along y = y0 +- eps and half-strip integrals J2 (above) and J3 (below),
/// where x0 w1 + y0 w2 = -a. Needs k >= 3 for absolute convergence.
inline WeilReport weil_integral(const WeilParams &p, double eps = 0.25, double tol = 1e-8)
{
    p.validate();
    if (p.k <= 2) {
        throw Error(ErrorCode::UnsupportedDecay,
                    "integral representation needs k >= 3; use direct Eisenstein summation for k = 1, 2");
    }
    if (!(eps > 0.0 && eps < 0.5)) {
        throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 1/2)");
    }
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "weil_integral: tol must be positive");
    }
    const LatticeCoords pole = p.lat.coordinates(-p.a);
    const EpsSplit split = choose_eps(pole.y0, eps);
    const double w1_abs = std::abs(p.lat.w1());
    const double height = std::fabs((p.lat.w2() * std::conj(p.lat.w1())).imag()) / w1_abs;
    if (split.eps * height < 1e-6) {
        throw Error(ErrorCode::PoleNearDomain, "integration lines pass within 1e-6 of the pole");
    }

    WeilReport rep;
    rep.method = WeilMethod::Integral;
    rep.eps_used = split.eps;
    const double yu = pole.y0 + split.eps, yl = pole.y0 - split.eps;
    const double k = p.k;
    const double part_tol = tol / 4.0;

    // J1: boundary lines of the two strips.
    const double pu = p1(yu), pl = p1(yl);
    auto boundary = [&](double x) {
        const double px = p1(x);
        const WeilJet u = weil_integrand(p, x, yu);
        const WeilJet l = weil_integrand(p, x, yl);
        return pu * (u.f + u.fx * px) - pl * (l.f + l.fx * px);
    };
    LineOptions line;
    line.tol = part_tol;
    const QuadratureResult j1 = integrate_line(boundary, LineMode::Absolute, k, line);

    // J2, J3: the full first-order integrand over each strip.
    auto interior = [&](double x, double y) {
        const double px = p1(x), py = p1(y);
        const WeilJet j = weil_integrand(p, x, y);
        return j.f + j.fx * px + j.fy * py + j.fxy * px * py;
    };
    const QuadratureResult j2 = integrate_half_strip(interior, yu, StripDirection::Up, k, line);
    const QuadratureResult j3 = integrate_half_strip(interior, yl, StripDirection::Down, k, line);

    rep.j1 = j1.value;
    rep.j2 = j2.value;
    rep.j3 = j3.value;
    rep.err = j1.err + j2.err + j3.err;
    rep.evals = j1.evals + j2.evals + j3.evals;

    if (split.has_row) {
        const double m = split.row;
        const Function1D phi = [&](double x) { return weil_integrand(p, x, m).f; };
        const Function1D dphi = [&](double x) { return weil_integrand(p, x, m).fx; };
        const double center = (-(p.a + m * p.lat.w2()) / p.lat.w1()).real();
        const QuadratureResult r = em_sum_line(phi, dphi, center, k, part_tol);
        rep.row_correction = r.value;
        rep.err += r.err;
        rep.evals += r.evals;
    }
    rep.value = rep.j1 + rep.j2 + rep.j3 + rep.row_correction;
    checked(rep.value, "weil_integral");
    return rep;
}

}
