#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latzeta/latzeta.hpp"

namespace latzeta::cli
{

using nlohmann::ordered_json;

enum ExitCode : int { Ok = 0, VerifyFailed = 1, BadInput = 2, NotConverged = 3 };

inline ordered_json to_json(const Complex &z)
{
    return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

inline int exit_code_for(ErrorCode c)
{
    return is_convergence_failure(c) ? NotConverged : BadInput;
}

inline void print_error(std::ostream &out, const std::string &code, const std::string &message)
{
    out << ordered_json{{"error", code}, {"message", message}}.dump() << '\n';
}

// Reads LATZETA_PANEL_BUDGET once per invocation.
inline void apply_environment()
{
    if (const char *env = std::getenv("LATZETA_PANEL_BUDGET")) {
        char *end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            set_default_panel_budget(static_cast<std::size_t>(v));
        } else {
            throw Error(ErrorCode::InvalidArgument, "LATZETA_PANEL_BUDGET must be a positive integer");
        }
    }
}

struct LatticeFlags
{
    std::string w1 = "1", w2 = "i";
};

inline void add_lattice_flags(CLI::App *cmd, LatticeFlags &f)
{
    cmd->add_option("--w1", f.w1, "first lattice generator, e.g. 1 or 2+0.5i")->capture_default_str();
    cmd->add_option("--w2", f.w2, "second lattice generator")->capture_default_str();
}

inline Lattice make_lattice(const LatticeFlags &f)
{
    return Lattice(parse_complex(f.w1), parse_complex(f.w2));
}

// ---------------------------------------------------------------- weil

struct WeilFlags
{
    LatticeFlags lattice;
    std::string a;
    int k = 0;
    std::string method = "direct";
    double eps = 0.25;
    double tol = 1e-8;
    bool csv = false;
    bool breakdown = false;
};

inline ordered_json report_json(const WeilReport &r, bool breakdown)
{
    ordered_json j = to_json(r.value);
    j["abs"] = std::abs(r.value);
    j["err"] = r.err;
    if (r.method == WeilMethod::Integral) {
        j["eps_used"] = r.eps_used;
        if (breakdown) {
            j["j1"] = to_json(r.j1);
            j["j2"] = to_json(r.j2);
            j["j3"] = to_json(r.j3);
            j["row_correction"] = to_json(r.row_correction);
        }
    } else {
        j["rows"] = r.rows;
    }
    return j;
}

inline int cmd_weil(const WeilFlags &f, std::ostream &out)
{
    if (f.method != "direct" && f.method != "integral" && f.method != "both") {
        throw Error(ErrorCode::InvalidArgument, "--method must be direct, integral or both");
    }
    const WeilParams p{make_lattice(f.lattice), parse_complex(f.a), f.k};
    std::optional<WeilReport> direct, integral;
    if (f.method != "integral") direct = weil_direct(p, std::min(f.tol, 1e-10));
    if (f.method != "direct") integral = weil_integral(p, f.eps, f.tol);

    if (f.csv) {
        out << "method,re,im,abs,err\n";
        for (const auto *r : {direct ? &*direct : nullptr, integral ? &*integral : nullptr}) {
            if (!r) continue;
            out << to_string(r->method) << ',' << format_real(r->value.real(), 12) << ','
                << format_real(r->value.imag(), 12) << ',' << format_real(std::abs(r->value), 12) << ','
                << format_real(r->err, 12) << '\n';
        }
        return Ok;
    }
    ordered_json j;
    j["command"] = "weil";
    j["w1"] = format_complex(p.lat.w1());
    j["w2"] = format_complex(p.lat.w2());
    j["a"] = format_complex(p.a);
    j["k"] = p.k;
    if (direct) j["direct"] = report_json(*direct, f.breakdown);
    if (integral) j["integral"] = report_json(*integral, f.breakdown);
    if (direct && integral) j["difference"] = std::abs(direct->value - integral->value);
    out << j.dump(2) << '\n';
    return Ok;
}

// ---------------------------------------------------------------- lerch

struct LerchFlags
{
    std::string z, s, a;
    std::string method = "series";
    double tol = 1e-10;
    bool csv = false;
};

inline int cmd_lerch(const LerchFlags &f, std::ostream &out)
{
    if (f.method != "series" && f.method != "coffey" && f.method != "both") {
        throw Error(ErrorCode::InvalidArgument, "--method must be series, coffey or both");
    }
    const LerchParams p{parse_complex(f.z), parse_complex(f.s), parse_complex(f.a)};
    std::optional<Complex> series, coffey;
    if (f.method != "coffey") series = lerch_series(p, f.tol);
    if (f.method != "series") coffey = lerch_coffey(p, f.tol);

    if (f.csv) {
        out << "method,re,im,abs\n";
        auto row = [&](const char *name, const Complex &v) {
            out << name << ',' << format_real(v.real(), 12) << ',' << format_real(v.imag(), 12) << ','
                << format_real(std::abs(v), 12) << '\n';
        };
        if (series) row("series", *series);
        if (coffey) row("coffey", *coffey);
        return Ok;
    }
    ordered_json j;
    j["command"] = "lerch";
    j["z"] = format_complex(p.z);
    j["s"] = format_complex(p.s);
    j["a"] = format_complex(p.a);
    if (series) j["series"] = to_json(*series);
    if (coffey) j["coffey"] = to_json(*coffey);
    if (series && coffey) j["difference"] = std::abs(*series - *coffey);
    out << j.dump(2) << '\n';
    return Ok;
}

// ---------------------------------------------------------------- em2d

struct Em2dFlags
{
    std::string function = "one";
    std::vector<double> rect;
    double tol = 1e-9;
};

inline int cmd_em2d(const Em2dFlags &f, std::ostream &out)
{
    const auto fn = named_test_function(f.function);
    if (!fn) {
        std::string names;
        for (const auto &n : test_function_names()) names += (names.empty() ? "" : ", ") + n;
        throw Error(ErrorCode::InvalidArgument, "unknown function '" + f.function + "' (known: " + names + ")");
    }
    if (f.rect.size() != 4) {
        throw Error(ErrorCode::InvalidArgument, "--rect takes alpha1,beta1,alpha2,beta2");
    }
    const Rect r{f.rect[0], f.rect[1], f.rect[2], f.rect[3]};
    const EmBreakdown b = em_sum_2d(*fn, r, f.tol);
    const Complex brute = brute_force_sum_2d(fn->phi, r);
    ordered_json j;
    j["command"] = "em2d";
    j["function"] = f.function;
    j["rect"] = f.rect;
    j["i1"] = to_json(b.i1);
    j["i2"] = to_json(b.i2);
    j["i3"] = to_json(b.i3);
    j["i4"] = to_json(b.i4);
    j["total"] = to_json(b.total);
    j["err"] = b.err;
    j["brute_force"] = to_json(brute);
    j["difference"] = std::abs(b.total - brute);
    out << j.dump(2) << '\n';
    return Ok;
}

// ---------------------------------------------------------------- grid

struct GridFlags
{
    LatticeFlags lattice;
    int k = 0;
    double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
    int nx = 0, ny = 0;
    std::string method = "direct";
    double eps = 0.25;
    double tol = 1e-8;
};

inline int cmd_grid(const GridFlags &f, std::ostream &out)
{
    if (!(f.re_min < f.re_max) || !(f.im_min < f.im_max)) {
        throw Error(ErrorCode::InvalidArgument, "grid needs re_min < re_max and im_min < im_max");
    }
    if (f.nx < 1 || f.ny < 1 || static_cast<double>(f.nx) * f.ny > 1e6) {
        throw Error(ErrorCode::InvalidArgument, "grid needs nx, ny >= 1 and nx*ny <= 1e6");
    }
    if (f.method != "direct" && f.method != "integral") {
        throw Error(ErrorCode::InvalidArgument, "--method must be direct or integral");
    }
    const Lattice lat = make_lattice(f.lattice);
    auto coord = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };

    std::ostringstream buf;   // nothing is printed if a cell fails
    buf << "re_a,im_a,re_E,im_E,abs_E\n";
    for (int iy = 0; iy < f.ny; ++iy) {
        const double im = coord(f.im_min, f.im_max, f.ny, iy);
        for (int ix = 0; ix < f.nx; ++ix) {
            const double re = coord(f.re_min, f.re_max, f.nx, ix);
            buf << format_real(re, 12) << ',' << format_real(im, 12) << ',';
            const WeilParams p{lat, Complex(re, im), f.k};
            try {
                p.validate();
            } catch (const Error &e) {
                if (e.code() != ErrorCode::PointOnLattice) throw;
                buf << ",,\n";
                continue;
            }
            const WeilReport r = f.method == "direct" ? weil_direct(p, std::min(f.tol, 1e-10))
                                                      : weil_integral(p, f.eps, f.tol);
            buf << format_real(r.value.real(), 12) << ',' << format_real(r.value.imag(), 12) << ','
                << format_real(std::abs(r.value), 12) << '\n';
        }
    }
    out << buf.str();
    return Ok;
}

// ---------------------------------------------------------------- verify

struct Check
{
    std::string suite, name;
    double measured = 0.0, threshold = 0.0;
    bool pass = false;
};

class CheckList
{
    public:
        void add(const std::string &suite, const std::string &name, double measured, double threshold)
        {
            m_checks.push_back({suite, name, measured, threshold, measured <= threshold});
        }
        const std::vector<Check> &checks() const
        {
            return m_checks;
        }
        bool all_pass() const
        {
            for (const auto &c : m_checks) {
                if (!c.pass) return false;
            }
            return true;
        }

    private:
        std::vector<Check> m_checks;
};

inline double rel(const Complex &x, const Complex &y)
{
    return std::abs(x - y) / (1.0 + std::abs(y));
}

inline void verify_em2d(CheckList &list, std::uint64_t seed, double tol)
{
    std::mt19937_64 rng(seed);
    double worst = 0.0, worst_nesting = 0.0, worst_shift = 0.0;
    for (int i = 0; i < 20; ++i) {
        const RandomEmCase c = random_em_case(rng);
        const Function2D f = c.fn.function();
        const EmBreakdown b = em_sum_2d(f, c.rect, tol);
        const Complex brute = brute_force_sum_2d(f.phi, c.rect);
        worst = std::max(worst, std::abs(b.total - brute));

        if (i < 5) {
            // Outer 1-D formula applied to the exact row sums.
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
            const Complex nested = em_sum_1d(rows, drows, c.rect.alpha2, c.rect.beta2, tol);
            worst_nesting = std::max(worst_nesting, std::abs(nested - b.total));

            // Shifting the top edge up by one adds exactly one row.
            Rect taller = c.rect;
            taller.beta2 += 1.0;
            const double top = std::floor(taller.beta2);
            Complex added{};
            for (double n = n0; n <= n1; n += 1.0) added += f.phi(n, top);
            const Complex grown = em_sum_2d(f, taller, tol).total;
            worst_shift = std::max(worst_shift, std::abs(grown - b.total - added));
        }
    }
    const double allowed = std::max(1e-8, 10.0 * tol);
    list.add("em2d", "em_sum_2d vs brute force (20 random cases)", worst, allowed);
    list.add("em2d", "outer 1-D formula over row sums", worst_nesting, allowed);
    list.add("em2d", "telescoping row shift", worst_shift, allowed);

    double conv = 0.0;
    for (double beta : {1.0, 5.0, 10.0}) {
        const Function1D x = [](double t) { return Complex(t); }, one = [](double) { return Complex(1.0); };
        const Function1D x2 = [](double t) { return Complex(t * t); }, two_x = [](double t) { return Complex(2.0 * t); };
        conv = std::max(conv, std::abs(em_sum_1d(x, one, 0.0, beta, 1e-13) - beta * (beta + 1.0) / 2.0));
        conv = std::max(conv, std::abs(em_sum_1d(x2, two_x, 0.0, beta, 1e-13)
                                       - beta * (beta + 1.0) * (2.0 * beta + 1.0) / 6.0));
    }
    list.add("em2d", "1-D sums of n and n^2 (P1(integer) = -1/2)", conv, 1e-10);
}

inline Complex random_unit_complex(std::mt19937_64 &rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(rng), u(rng)};
}

inline Lattice random_lattice(std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.8, 1.6), scale(0.7, 1.5), turn(-0.5, 0.5);
    const Complex w1 = std::polar(scale(rng), turn(rng));
    return Lattice(w1, w1 * Complex(re(rng), im(rng)));
}

inline Complex point_in_cell(std::mt19937_64 &rng, const Lattice &lat)
{
    std::uniform_real_distribution<double> u(0.1, 0.9);
    return lat.point(u(rng), u(rng));
}

inline void verify_weil(CheckList &list, std::uint64_t seed, double tol)
{
    std::mt19937_64 rng(seed);
    const double dtol = std::min(tol, 1e-10);
    double periodic = 0.0, parity = 0.0, homog = 0.0, equiv = 0.0, eps_inv = 0.0, deriv = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Lattice lat = random_lattice(rng);
        const Complex a = point_in_cell(rng, lat);
        for (int k = 1; k <= 4; ++k) {
            const Complex e = weil_direct({lat, a, k}, dtol).value;
            parity = std::max(parity, rel(weil_direct({lat, -a, k}, dtol).value, (k % 2 ? -1.0 : 1.0) * e));
            const Complex lambda(0.0, 2.0);
            const Lattice scaled(lambda * lat.w1(), lambda * lat.w2());
            homog = std::max(homog, rel(weil_direct({scaled, lambda * a, k}, dtol).value * ipow(lambda, k), e));
            if (k >= 3) {
                periodic = std::max(periodic, rel(weil_direct({lat, a + lat.w1(), k}, dtol).value, e));
                periodic = std::max(periodic, rel(weil_direct({lat, a + lat.w2(), k}, dtol).value, e));
            }
        }
        if (i < 2) {
            const int k = 3 + i;
            const Complex d = weil_direct({lat, a, k}, dtol).value;
            const Complex at25 = weil_integral({lat, a, k}, 0.25, tol).value;
            equiv = std::max(equiv, rel(at25, d));
            eps_inv = std::max(eps_inv, rel(weil_integral({lat, a, k}, 0.4, tol).value, at25));
        }
        const int k = 3 + i % 3;
        const double h = 1e-4;
        const Complex fd = (weil_direct({lat, a + h, k}, 1e-12).value - weil_direct({lat, a - h, k}, 1e-12).value) / (2.0 * h);
        const Complex exact = -double(k) * weil_direct({lat, a, k + 1}, 1e-12).value;
        deriv = std::max(deriv, std::abs(fd - exact) / std::abs(exact));
    }
    list.add("weil", "periodicity E_k(a + w) = E_k(a), k = 3, 4", periodic, 1e-7);
    list.add("weil", "parity E_k(-a) = (-1)^k E_k(a), k = 1..4", parity, 1e-8);
    list.add("weil", "homogeneity E_k(2i a, 2i W) = (2i)^-k E_k(a, W), k = 1..4", homog, 1e-8);
    list.add("weil", "integral vs direct summation", equiv, std::max(1e-6, 10.0 * tol));
    list.add("weil", "eps = 0.25 vs eps = 0.4", eps_inv, 1e-6);
    list.add("weil", "derivative recursion dE_k/da = -k E_(k+1)", deriv, 1e-4);

    const Lattice square(1.0, Complex(0.0, 1.0));
    const Lattice hex(1.0, std::polar(1.0, 2.0 * std::acos(-1.0) / 3.0));
    double zeros = std::abs(eisenstein_series(square, 6, 1e-9));
    zeros = std::max(zeros, std::abs(eisenstein_series(hex, 4, 1e-9)));
    zeros = std::max(zeros, std::abs(eisenstein_series(random_lattice(rng), 5, 1e-9)));
    list.add("weil", "vanishing G_6(square), G_4(hexagonal), G_5", zeros, 1e-8);
}

inline void verify_lerch(CheckList &list, std::uint64_t seed, double tol)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> zd(0.05, 0.9), sd(1.2, 5.0), ad(0.5, 4.0), td(-2.0, 2.0);
    double equiv = 0.0, shift = 0.0;
    const double stol = std::min(tol, 1e-10);
    for (int i = 0; i < 20; ++i) {
        const Complex z = zd(rng), s(sd(rng), i % 4 == 0 ? td(rng) : 0.0), a = ad(rng);
        const Complex series = lerch_series({z, s, a}, stol);
        equiv = std::max(equiv, std::abs(series - lerch_coffey({z, s, a}, stol)));
        const Complex next = lerch_series({z, s, a + 1.0}, stol);
        shift = std::max(shift, std::abs(series - (z * next + std::exp(-s * std::log(a)))));
    }
    const double pi = std::acos(-1.0);
    list.add("lerch", "series vs integral representation (20 points)", equiv, std::max(1e-8, 10.0 * tol));
    list.add("lerch", "shift identity Phi(z,s,a) = z Phi(z,s,a+1) + a^-s", shift, std::max(1e-8, 10.0 * tol));
    list.add("lerch", "riemann_zeta(2) = pi^2/6", std::abs(riemann_zeta(2.0, stol) - pi * pi / 6.0), 1e-8);
}

struct VerifyFlags
{
    std::string suite = "all";
    std::uint64_t seed = 42;
    double tol = 1e-9;
    bool json = false;
};

inline int cmd_verify(const VerifyFlags &f, std::ostream &out)
{
    const bool all = f.suite == "all";
    if (!all && f.suite != "em2d" && f.suite != "weil" && f.suite != "lerch") {
        throw Error(ErrorCode::InvalidArgument, "--suite must be em2d, weil, lerch or all");
    }
    if (!(f.tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "--tol must be positive");
    }
    CheckList list;
    if (all || f.suite == "em2d") verify_em2d(list, f.seed, f.tol);
    if (all || f.suite == "weil") verify_weil(list, f.seed, f.tol);
    if (all || f.suite == "lerch") verify_lerch(list, f.seed, f.tol);

    if (f.json) {
        ordered_json j;
        j["command"] = "verify";
        j["suite"] = f.suite;
        j["seed"] = f.seed;
        j["tol"] = f.tol;
        j["checks"] = ordered_json::array();
        for (const auto &c : list.checks()) {
            j["checks"].push_back({{"suite", c.suite}, {"name", c.name}, {"measured", c.measured},
                                   {"threshold", c.threshold}, {"pass", c.pass}});
        }
        j["pass"] = list.all_pass();
        out << j.dump(2) << '\n';
    } else {
        for (const auto &c : list.checks()) {
            out << (c.pass ? "PASS " : "FAIL ") << '[' << c.suite << "] " << c.name << ": "
                << format_real(c.measured, 3) << " (limit " << format_real(c.threshold, 3) << ")\n";
        }
    }
    return list.all_pass() ? Ok : VerifyFailed;
}

// ---------------------------------------------------------------- dispatch

/// Runs one invocation; `args` excludes the program name. Results go to
/// `out`, error objects to `err`.
inline int run(std::vector<std::string> args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Weil elliptic functions, Hurwitz-Lerch zeta and 2-D Euler-MacLaurin summation", "latzeta"};
    app.require_subcommand(1);

    WeilFlags wf;
    auto *weil = app.add_subcommand("weil", "evaluate E_k(a, W)");
    add_lattice_flags(weil, wf.lattice);
    weil->add_option("--a", wf.a, "point a (complex literal)")->required();
    weil->add_option("--k", wf.k, "exponent k >= 1")->required();
    weil->add_option("--method", wf.method, "direct | integral | both")->capture_default_str();
    weil->add_option("--eps", wf.eps, "strip offset for the integral method")->capture_default_str();
    weil->add_option("--tol", wf.tol, "tolerance")->capture_default_str();
    weil->add_flag("--breakdown", wf.breakdown, "include J1, J2, J3 and the row correction");
    auto *wcsv = weil->add_flag("--csv", wf.csv, "CSV output");
    weil->add_flag("--json", "JSON output (default)")->excludes(wcsv);

    LerchFlags lf;
    auto *lerch = app.add_subcommand("lerch", "evaluate the Hurwitz-Lerch zeta function Phi(z, s, a)");
    lerch->add_option("--z", lf.z, "z (complex literal)")->required();
    lerch->add_option("--s", lf.s, "s (complex literal)")->required();
    lerch->add_option("--a", lf.a, "a (complex literal)")->required();
    lerch->add_option("--method", lf.method, "series | coffey | both")->capture_default_str();
    lerch->add_option("--tol", lf.tol, "tolerance")->capture_default_str();
    auto *lcsv = lerch->add_flag("--csv", lf.csv, "CSV output");
    lerch->add_flag("--json", "JSON output (default)")->excludes(lcsv);

    VerifyFlags vf;
    auto *verify = app.add_subcommand("verify", "run the identity and method-equivalence checks");
    verify->add_option("--suite", vf.suite, "em2d | weil | lerch | all")->capture_default_str();
    verify->add_option("--seed", vf.seed, "random seed")->capture_default_str();
    verify->add_option("--tol", vf.tol, "tolerance")->capture_default_str();
    verify->add_flag("--json", vf.json, "JSON report");

    GridFlags gf;
    auto *grid = app.add_subcommand("grid", "sample E_k over a rectangle of a-values as CSV");
    add_lattice_flags(grid, gf.lattice);
    grid->add_option("--k", gf.k, "exponent k >= 1")->required();
    grid->add_option("--re-min", gf.re_min)->required();
    grid->add_option("--re-max", gf.re_max)->required();
    grid->add_option("--im-min", gf.im_min)->required();
    grid->add_option("--im-max", gf.im_max)->required();
    grid->add_option("--nx", gf.nx)->required();
    grid->add_option("--ny", gf.ny)->required();
    grid->add_option("--method", gf.method, "direct | integral")->capture_default_str();
    grid->add_option("--eps", gf.eps)->capture_default_str();
    grid->add_option("--tol", gf.tol)->capture_default_str();

    Em2dFlags ef;
    auto *em2d = app.add_subcommand("em2d", "2-D Euler-MacLaurin sum of a built-in test function");
    em2d->add_option("--function", ef.function, "one | xy | x2+y2 | inv-cube | random:<seed>")->capture_default_str();
    em2d->add_option("--rect", ef.rect, "alpha1,beta1,alpha2,beta2")->delimiter(',')->required();
    em2d->add_option("--tol", ef.tol)->capture_default_str();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError &e) {
        print_error(err, "ParseError", e.what());
        return BadInput;
    }

    try {
        apply_environment();
        if (weil->parsed()) return cmd_weil(wf, out);
        if (lerch->parsed()) return cmd_lerch(lf, out);
        if (verify->parsed()) return cmd_verify(vf, out);
        if (grid->parsed()) return cmd_grid(gf, out);
        if (em2d->parsed()) return cmd_em2d(ef, out);
    } catch (const Error &e) {
        print_error(err, to_string(e.code()), e.what());
        return exit_code_for(e.code());
    }
    return Ok;
}

}
