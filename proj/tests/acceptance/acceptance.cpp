// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "cli.hpp"
#include "closed_forms.hpp"
#include "latzeta/latzeta.hpp"

using namespace latzeta;
using cli::point_in_cell;
using cli::random_lattice;
using cli::rel;

namespace
{

struct Measured
{
    double value;
    double limit;
    std::string note;
};

struct Criterion
{
    int id;
    std::string name;
    double seconds;
    std::function<Measured()> run;
};

Measured em2d_exactness()
{
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const RandomEmCase c = random_em_case(rng);
        const Function2D f = c.fn.function();
        worst = std::max(worst, std::abs(em_sum_2d(f, c.rect, 1e-10).total - brute_force_sum_2d(f.phi, c.rect)));
    }
    return {worst, 1e-8, "50 random functions"};
}

Measured em1d_convention()
{
    const Function1D x = [](double t) { return Complex(t); }, one = [](double) { return Complex(1.0); };
    const Function1D x2 = [](double t) { return Complex(t * t); }, two_x = [](double t) { return Complex(2.0 * t); };
    double worst = 0.0;
    for (double b : {1.0, 5.0, 10.0}) {
        worst = std::max(worst, std::abs(em_sum_1d(x, one, 0.0, b, 1e-13) - b * (b + 1.0) / 2.0));
        worst = std::max(worst, std::abs(em_sum_1d(x2, two_x, 0.0, b, 1e-13) - b * (b + 1.0) * (2.0 * b + 1.0) / 6.0));
    }
    return {worst, 1e-10, "beta in {1,5,10}"};
}

Measured weil_equivalence()
{
    std::mt19937_64 rng(2002);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Lattice lat = random_lattice(rng);
        const Complex a = point_in_cell(rng, lat);
        for (int k = 3; k <= 6; ++k) {
            const WeilParams p{lat, a, k};
            worst = std::max(worst, rel(weil_integral(p, 0.25, 1e-8).value, weil_direct(p, 1e-11).value));
        }
    }
    return {worst, 1e-6, "20 pairs x k=3..6"};
}

Measured eps_invariance()
{
    std::mt19937_64 rng(3003);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const Lattice lat = random_lattice(rng);
        const WeilParams p{lat, point_in_cell(rng, lat), 3 + i % 4};
        worst = std::max(worst, rel(weil_integral(p, 0.25, 1e-8).value, weil_integral(p, 0.4, 1e-8).value));
    }
    return {worst, 1e-6, "10 cases"};
}

Measured structural_zeros()
{
    const Lattice square(1.0, Complex(0.0, 1.0));
    const Lattice hex(1.0, std::polar(1.0, 2.0 * std::numbers::pi / 3.0));
    std::mt19937_64 rng(4004);
    double worst = std::abs(eisenstein_series(square, 6, 1e-9));
    worst = std::max(worst, std::abs(eisenstein_series(hex, 4, 1e-9)));
    for (int k : {3, 5, 7}) worst = std::max(worst, std::abs(eisenstein_series(random_lattice(rng), k, 1e-9)));
    return {worst, 1e-8, "G6(square), G4(hex), G3/G5/G7"};
}

Measured symmetries()
{
    std::mt19937_64 rng(5005);
    const Complex lambda(0.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Lattice lat = random_lattice(rng);
        const Lattice scaled(lambda * lat.w1(), lambda * lat.w2());
        const Complex a = point_in_cell(rng, lat);
        for (int k = 1; k <= 4; ++k) {
            const Complex e = weil_direct({lat, a, k}).value;
            worst = std::max(worst, rel(weil_direct({lat, -a, k}).value, (k % 2 ? -1.0 : 1.0) * e));
            worst = std::max(worst, rel(weil_direct({scaled, lambda * a, k}).value, e / ipow(lambda, k)));
        }
    }
    return {worst, 1e-8, "parity and homogeneity, k=1..4"};
}

Measured derivative_recursion()
{
    std::mt19937_64 rng(6006);
    const double h = 1e-4;
    double worst = 0.0;
    for (int k = 3; k <= 5; ++k) {
        const Lattice lat = random_lattice(rng);
        const Complex a = point_in_cell(rng, lat);
        const Complex fd = (weil_direct({lat, a + h, k}, 1e-12).value - weil_direct({lat, a - h, k}, 1e-12).value) / (2.0 * h);
        const Complex want = -double(k) * weil_direct({lat, a, k + 1}, 1e-12).value;
        worst = std::max(worst, std::abs(fd - want) / std::abs(want));
    }
    return {worst, 1e-4, "k=3,4,5"};
}

Measured lerch_equivalence()
{
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> zd(0.01, 0.95), sd(1.1, 5.0), ad(0.3, 4.0), td(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Complex z = i % 5 == 0 ? Complex(1.0) : Complex(zd(rng));
        const LerchParams p{z, Complex(sd(rng), i % 3 == 0 ? td(rng) : 0.0), ad(rng)};
        worst = std::max(worst, std::abs(lerch_series(p, 1e-10) - lerch_coffey(p, 1e-10)));
    }
    // zeta(2) from 10^6 terms; the tail lies between the integrals from N+1 and N.
    const double N = 1e6;
    double partial = 0.0;
    for (double n = N; n >= 1.0; n -= 1.0) partial += 1.0 / (n * n);
    const double lo = partial + 1.0 / (N + 1.0), hi = partial + 1.0 / N;
    const double z2 = riemann_zeta(2.0, 1e-12).real();
    const double bracket = z2 < lo ? lo - z2 : (z2 > hi ? z2 - hi : 0.0);
    const double vs_pi = std::fabs(z2 - std::numbers::pi * std::numbers::pi / 6.0);
    return {std::max({worst, bracket, vs_pi}), 1e-8, "50-point sweep and zeta(2)"};
}

Measured row_correction()
{
    const WeilParams p{Lattice(1.0, Complex(0.0, 1.0)), Complex(-0.5, -1.0), 4};
    const WeilReport r = weil_integral(p, 0.25, 1e-8);
    const double d = rel(r.value, weil_direct(p, 1e-11).value);
    const bool reported = std::abs(r.row_correction) > 0.0;
    return {reported ? d : HUGE_VAL, 1e-6, "row_correction=" + format_complex(r.row_correction, 6)};
}

Measured err_honesty()
{
    std::mt19937_64 rng(8008);
    int bounded = 0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto c = support::closed_form_case(rng);
        const auto r = integrate_segment(c.f, c.a, c.b, SegmentOptions{c.tol, c.integer_breakpoints});
        const double noise = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(c.exact));
        const double actual = std::abs(r.value - c.exact);
        if (actual <= r.err + noise) ++bounded;
        worst_ratio = std::max(worst_ratio, actual / (r.err + noise));
    }
    // Pass needs both: >= 95 bounded, and no case more than 10x under.
    const double measured = bounded >= 95 ? worst_ratio : HUGE_VAL;
    return {measured, 10.0, std::to_string(bounded) + "/100 bounded"};
}

}

int main()
{
    const std::vector<Criterion> criteria{
        {1, "em2d matches brute force", 30, em2d_exactness},
        {2, "1-D sums of n and n^2", 1, em1d_convention},
        {3, "weil integral vs direct", 120, weil_equivalence},
        {4, "eps invariance", 60, eps_invariance},
        {5, "structural zeros of G_k", 10, structural_zeros},
        {6, "parity and homogeneity", 60, symmetries},
        {7, "derivative recursion", 30, derivative_recursion},
        {8, "lerch series vs integral", 30, lerch_equivalence},
        {9, "integer pole row", 30, row_correction},
        {10, "quadrature error estimates", 30, err_honesty},
    };
    bool all = true;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Measured m{HUGE_VAL, 0.0, ""};
        try {
            m = c.run();
        } catch (const Error &e) {
            m.note = std::string(to_string(e.code())) + ": " + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = m.value <= m.limit && secs < c.seconds;
        all = all && pass;
        std::printf("%s %2d %-28s measured %.3g (limit %.3g)  %.2fs (limit %.0fs)  %s\n", pass ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), m.value, m.limit, secs, c.seconds, m.note.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
