#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include "bernoulli.hpp"
#include "core.hpp"
#include "quadrature.hpp"

namespace latzeta
{

using Function1D = std::function<Complex(double)>;

/// A C^2 function of two variables together with the partials the
/// summation formula needs. The partials are supplied by the caller.
struct Function2D
{
    std::function<Complex(double, double)> phi;
    std::function<Complex(double, double)> dx;
    std::function<Complex(double, double)> dy;
    std::function<Complex(double, double)> dxy;
};

/// [alpha1, beta1] x [alpha2, beta2]; sums run over the half-open ranges.
struct Rect
{
    double alpha1 = 0.0, beta1 = 0.0, alpha2 = 0.0, beta2 = 0.0;

    void validate() const
    {
        if (!(std::isfinite(alpha1) && std::isfinite(beta1) && std::isfinite(alpha2) && std::isfinite(beta2))) {
            throw Error(ErrorCode::InvalidArgument, "rectangle bounds must be finite");
        }
        if (!(alpha1 < beta1) || !(alpha2 < beta2)) {
            throw Error(ErrorCode::InvalidArgument, "rectangle needs alpha1 < beta1 and alpha2 < beta2");
        }
    }
};

struct EmBreakdown
{
    Complex i1, i2, i3, i4;
    Complex total;
    double err = 0.0;
};

/// First-order Euler-MacLaurin: sum over alpha < n <= beta of phi(n) as
/// int phi + int phi' P1 + P1(alpha) phi(alpha) - P1(beta) phi(beta).
inline QuadratureResult em_sum_1d_result(const Function1D &phi, const Function1D &dphi, double alpha, double beta,
                                         double tol)
{
    if (!(alpha < beta)) {
        throw Error(ErrorCode::InvalidArgument, "em_sum_1d: need alpha < beta");
    }
    SegmentOptions opt{tol, true};
    auto integrand = [&](double x) { return phi(x) + dphi(x) * p1(x); };
    QuadratureResult r = integrate_segment(integrand, alpha, beta, opt);
    r.value += p1(alpha) * phi(alpha) - p1(beta) * phi(beta);
    return r;
}

inline Complex em_sum_1d(const Function1D &phi, const Function1D &dphi, double alpha, double beta, double tol)
{
    return em_sum_1d_result(phi, dphi, alpha, beta, tol).value;
}

/// Sum of phi(n) over all integers n. Terms next to `center` (where phi may
/// be large) are added explicitly; the two half-lines beyond use the
/// Euler-MacLaurin identity with the boundary term at the cut.
/// |phi(x)| must decay like |x|^-decay_order with decay_order > 1.
inline QuadratureResult em_sum_line(const Function1D &phi, const Function1D &dphi, double center,
                                    double decay_order, double tol)
{
    const double c = std::floor(center);
    const double left = c - 2.0, right = c + 2.0;
    QuadratureResult out;
    for (double n = left + 1.0; n <= right; n += 1.0) out.value += phi(n);

    LineOptions opt;
    opt.tol = tol / 2.0;
    // n > right: P1(right) = -1/2 at the integer cut.
    auto up = [&](double x) { return phi(x) + dphi(x) * p1(x); };
    QuadratureResult r = integrate_half_line(up, right, decay_order, opt);
    out += r;
    out.value += p1(right) * phi(right);
    // n <= left, reflected to t = -x >= -left; P1(-t) = -P1(t) off the integers.
    auto down = [&](double t) { return phi(-t) - dphi(-t) * p1(t); };
    QuadratureResult l = integrate_half_line(down, -left, decay_order, opt);
    out += l;
    out.value -= p1(left) * phi(left);
    checked(out.value, "em_sum_line");
    return out;
}

/// Two-dimensional summation formula: sum over alpha1 < n <= beta1,
/// alpha2 < m <= beta2 of phi(n, m) as I1 + I2 + I3 + I4.
inline EmBreakdown em_sum_2d(const Function2D &f, const Rect &r, double tol)
{
    r.validate();
    EmBreakdown b;
    const double pa1 = p1(r.alpha1), pb1 = p1(r.beta1);
    const double pa2 = p1(r.alpha2), pb2 = p1(r.beta2);

    // I1: iterated, x inside; every unit cell boundary is a panel edge.
    SegmentOptions inner{tol / 8.0, true};
    auto row = [&](double y) -> Estimate {
        const double py = p1(y);
        auto g = [&](double x) {
            const double px = p1(x);
            return f.phi(x, y) + f.dx(x, y) * px + f.dy(x, y) * py + f.dxy(x, y) * px * py;
        };
        const QuadratureResult q = integrate_segment(g, r.alpha1, r.beta1, inner);
        return {q.value, q.err};
    };
    const QuadratureResult q1 = integrate_segment(row, r.alpha2, r.beta2, SegmentOptions{tol / 4.0, true});
    b.i1 = q1.value;

    auto vertical = [&](double y) {
        const double py = p1(y);
        return f.phi(r.alpha1, y) * pa1 - f.phi(r.beta1, y) * pb1 + f.dy(r.alpha1, y) * py * pa1
               - f.dy(r.beta1, y) * py * pb1;
    };
    const QuadratureResult q2 = integrate_segment(vertical, r.alpha2, r.beta2, SegmentOptions{tol / 4.0, true});
    b.i2 = q2.value;

    auto horizontal = [&](double x) {
        const double px = p1(x);
        return f.phi(x, r.alpha2) * pa2 - f.phi(x, r.beta2) * pb2 + f.dx(x, r.alpha2) * px * pa2
               - f.dx(x, r.beta2) * px * pb2;
    };
    const QuadratureResult q3 = integrate_segment(horizontal, r.alpha1, r.beta1, SegmentOptions{tol / 4.0, true});
    b.i3 = q3.value;

    b.i4 = pa2 * pa1 * f.phi(r.alpha1, r.alpha2) - pa2 * pb1 * f.phi(r.beta1, r.alpha2)
           - pb2 * pa1 * f.phi(r.alpha1, r.beta2) + pb2 * pb1 * f.phi(r.beta1, r.beta2);

    b.total = b.i1 + b.i2 + b.i3 + b.i4;
    b.err = q1.err + q2.err + q3.err;
    checked(b.total, "em_sum_2d");
    return b;
}

inline constexpr double brute_force_budget = 1e7;

/// The half-open double sum itself, inner loop over n, in index order.
inline Complex brute_force_sum_2d(const std::function<Complex(double, double)> &phi, const Rect &r)
{
    r.validate();
    const double n0 = std::floor(r.alpha1) + 1.0, n1 = std::floor(r.beta1);
    const double m0 = std::floor(r.alpha2) + 1.0, m1 = std::floor(r.beta2);
    const double count = std::max(0.0, n1 - n0 + 1.0) * std::max(0.0, m1 - m0 + 1.0);
    if (count > brute_force_budget) {
        throw Error(ErrorCode::BudgetExceeded, "brute_force_sum_2d: more than 1e7 lattice points");
    }
    Complex sum{};
    for (double m = m0; m <= m1; m += 1.0) {
        for (double n = n0; n <= n1; n += 1.0) sum += phi(n, m);
    }
    return sum;
}

/// Largest relative disagreement between the supplied partials and central
/// differences of phi, over `samples` random points of r.
inline double partials_discrepancy(const Function2D &f, const Rect &r, int samples = 16, std::uint64_t seed = 1)
{
    r.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(r.alpha1, r.beta1), uy(r.alpha2, r.beta2);
    const double h = 1e-4;
    double worst = 0.0;
    auto rel = [](const Complex &fd, const Complex &exact, const Complex &value) {
        return std::abs(fd - exact) / (std::abs(exact) + std::abs(value) + 1e-12);
    };
    for (int i = 0; i < samples; ++i) {
        const double x = ux(rng), y = uy(rng);
        const Complex v = f.phi(x, y);
        const Complex fdx = (f.phi(x + h, y) - f.phi(x - h, y)) / (2.0 * h);
        const Complex fdy = (f.phi(x, y + h) - f.phi(x, y - h)) / (2.0 * h);
        const Complex fdxy = (f.phi(x + h, y + h) - f.phi(x + h, y - h) - f.phi(x - h, y + h) + f.phi(x - h, y - h))
                             / (4.0 * h * h);
        worst = std::max({worst, rel(fdx, f.dx(x, y), v), rel(fdy, f.dy(x, y), v), rel(fdxy, f.dxy(x, y), v)});
    }
    return worst;
}

/// Throws InvalidArgument when the partials disagree with finite differences
/// by more than 1e-5 relative.
inline void validate_partials(const Function2D &f, const Rect &r, int samples = 16, std::uint64_t seed = 1)
{
    const double d = partials_discrepancy(f, r, samples, seed);
    if (!(d <= 1e-5)) {
        throw Error(ErrorCode::InvalidArgument,
                    "supplied partials disagree with finite differences (relative " + format_real(d, 3) + ")");
    }
}

}
