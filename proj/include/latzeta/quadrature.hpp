#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "core.hpp"
#include "extrapolation.hpp"

namespace latzeta
{

inline constexpr std::size_t default_panel_budget = std::size_t(1) << 16;

namespace detail
{
inline std::atomic<std::size_t> &panel_budget_setting()
{
    static std::atomic<std::size_t> budget{default_panel_budget};
    return budget;
}
}

/// Process-wide default for the per-call panel budget (the CLI sets it from
/// LATZETA_PANEL_BUDGET). Options objects pick it up when constructed.
inline void set_default_panel_budget(std::size_t panels)
{
    detail::panel_budget_setting().store(panels == 0 ? default_panel_budget : panels);
}

inline std::size_t current_panel_budget()
{
    return detail::panel_budget_setting().load();
}

/// A function value together with an absolute error bound; integrands may
/// return this instead of a plain Complex when they are themselves computed
/// numerically (the inner integral of an iterated 2-D integral).
struct Estimate
{
    Complex value{0.0, 0.0};
    double err = 0.0;
};

enum class LineMode { Absolute, Symmetric };
enum class StripDirection { Up, Down };

struct SegmentOptions
{
    double tol = 1e-10;
    /// Split panels at every integer in (a, b): P1 factors are kinked there.
    bool integer_breakpoints = false;
    std::size_t panel_budget = current_panel_budget();
};

struct LineOptions
{
    double tol = 1e-10;
    bool integer_breakpoints = true;
    std::size_t panel_budget = current_panel_budget();
    /// Distance beyond which the integrand follows its power-law decay.
    /// Zero means "estimate by sampling".
    double onset = 0.0;
    std::size_t max_levels = 24;
};

namespace detail
{

struct GaussRule
{
    std::array<double, 8> nodes;
    std::array<double, 8> weights;
};

// Positive nodes/weights of the 16-point Gauss-Legendre rule via Newton on P16.
inline const GaussRule &gauss_legendre_16()
{
    static const GaussRule rule = [] {
        constexpr int n = 16;
        GaussRule r{};
        const double pi = std::acos(-1.0);
        for (int i = 0; i < n / 2; ++i) {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-17) {
                    break;
                }
            }
            r.nodes[i] = x;
            r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

template <class F>
Estimate eval_estimate(F &f, double x)
{
    using R = std::decay_t<std::invoke_result_t<F &, double>>;
    if constexpr (std::is_same_v<R, Estimate>) {
        return f(x);
    } else {
        return {Complex(f(x)), 0.0};
    }
}

struct RuleValue
{
    Complex value;
    double abs = 0.0;   // integral of |f|, for the roundoff floor
    double inner = 0.0; // weighted integrand errors
};

template <class F>
RuleValue gl16(F &f, double a, double b)
{
    const auto &rule = gauss_legendre_16();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    RuleValue out{};
    for (int i = 0; i < 8; ++i) {
        const double dx = h * rule.nodes[i];
        const Estimate lo = eval_estimate(f, c - dx);
        const Estimate hi = eval_estimate(f, c + dx);
        out.value += rule.weights[i] * (lo.value + hi.value);
        out.abs += rule.weights[i] * (std::abs(lo.value) + std::abs(hi.value));
        out.inner += rule.weights[i] * (lo.err + hi.err);
    }
    out.value *= h;
    out.abs *= h;
    out.inner *= h;
    return out;
}

struct Panel
{
    double a, b;
    RuleValue left, right;
    double qerr;     // quadrature error estimate
    bool refinable;
};

struct SegmentDetail
{
    QuadratureResult result;
    double abs = 0.0;
    std::vector<double> boundaries;
};

template <class F>
Panel make_panel(F &f, double a, double b, const RuleValue &whole)
{
    const double m = 0.5 * (a + b);
    Panel p{a, b, gl16(f, a, m), gl16(f, m, b), 0.0, true};
    const Complex halves = p.left.value + p.right.value;
    const double diff = std::abs(whole.value - halves);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (p.left.abs + p.right.abs);
    p.qerr = std::max(diff, floor);
    // Differences at the level of the integrand's own error are noise, not
    // discretisation error; bisecting them never converges.
    const double noise = 2.0 * (whole.inner + p.left.inner + p.right.inner);
    const double width_floor = 1e-13 * (1.0 + std::fabs(a) + std::fabs(b));
    p.refinable = diff > floor + noise && (b - a) > width_floor;
    return p;
}

// Globally adaptive Gauss-Legendre: every panel keeps a 16-point value on
// each half; the error estimate is |whole - (left + right)|, and the worst
// panel is bisected until the total meets tol*(1 + |value|).
template <class F>
SegmentDetail integrate_segment_detail(F &f, double a, double b, std::span<const double> breakpoints,
                                       const SegmentOptions &opt, bool keep_boundaries = false)
{
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw Error(ErrorCode::InvalidArgument, "integrate_segment: need finite a <= b");
    }
    if (!(opt.tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "integrate_segment: tol must be positive");
    }
    SegmentDetail out;
    if (a == b) {
        if (keep_boundaries) out.boundaries = {a};
        return out;
    }

    std::vector<double> cuts{a, b};
    for (double x : breakpoints) {
        if (x > a && x < b) cuts.push_back(x);
    }
    if (opt.integer_breakpoints) {
        const double first = std::floor(a) + 1.0;
        if (b - first > static_cast<double>(opt.panel_budget)) {
            throw NoConvergence("integrate_segment: more integer breakpoints than the panel budget", {});
        }
        for (double n = first; n < b; n += 1.0) cuts.push_back(n);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.size() - 1 > opt.panel_budget) {
        throw NoConvergence("integrate_segment: more breakpoints than the panel budget", {});
    }

    std::vector<Panel> panels;
    panels.reserve(2 * cuts.size());
    std::size_t evals = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const RuleValue whole = gl16(f, cuts[i], cuts[i + 1]);
        panels.push_back(make_panel(f, cuts[i], cuts[i + 1], whole));
        evals += 48;
    }

    auto cmp = [&panels](std::size_t l, std::size_t r) { return panels[l].qerr < panels[r].qerr; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
    Complex total{};
    double qerr = 0.0, inner = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        total += panels[i].left.value + panels[i].right.value;
        qerr += panels[i].qerr;
        inner += panels[i].left.inner + panels[i].right.inner;
        if (panels[i].refinable) heap.push(i);
    }

    while (qerr + inner > opt.tol * (1.0 + std::abs(total)) && !heap.empty()) {
        if (panels.size() >= opt.panel_budget) {
            QuadratureResult best{total, qerr + inner, panels.size(), evals};
            throw NoConvergence("integrate_segment: panel budget exhausted", best);
        }
        const std::size_t idx = heap.top();
        heap.pop();
        const Panel old = panels[idx];
        const double m = 0.5 * (old.a + old.b);
        Panel lp = make_panel(f, old.a, m, old.left);
        Panel rp = make_panel(f, m, old.b, old.right);
        evals += 64;
        total += (lp.left.value + lp.right.value + rp.left.value + rp.right.value)
                 - (old.left.value + old.right.value);
        qerr += lp.qerr + rp.qerr - old.qerr;
        inner += lp.left.inner + lp.right.inner + rp.left.inner + rp.right.inner
                 - old.left.inner - old.right.inner;
        panels[idx] = lp;
        panels.push_back(rp);
        if (lp.refinable) heap.push(idx);
        if (rp.refinable) heap.push(panels.size() - 1);
    }

    // Deterministic final reduction: left-to-right over the final decomposition.
    std::sort(panels.begin(), panels.end(), [](const Panel &l, const Panel &r) { return l.a < r.a; });
    out.result.value = Complex{};
    qerr = 0.0;
    inner = 0.0;
    for (const auto &p : panels) {
        out.result.value += p.left.value;
        out.result.value += p.right.value;
        qerr += p.qerr;
        inner += p.left.inner + p.right.inner;
        out.abs += p.left.abs + p.right.abs;
    }
    out.result.err = qerr + inner;
    out.result.panels = panels.size();
    out.result.evals = evals;
    if (keep_boundaries) {
        for (const auto &p : panels) out.boundaries.push_back(p.a);
        out.boundaries.push_back(b);
    }
    checked(out.result.value, "integrate_segment");
    return out;
}

template <std::size_t N>
struct SmallRule
{
    std::array<double, N> nodes;   // on [0, 1]
    std::array<double, N> weights;
};

// Gauss-Legendre rule of order N mapped to [0, 1] (Newton on P_N).
template <std::size_t N>
const SmallRule<N> &unit_gauss_legendre()
{
    static const SmallRule<N> rule = [] {
        SmallRule<N> r{};
        const double pi = std::acos(-1.0);
        const int n = static_cast<int>(N);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-17) break;
            }
            r.nodes[i] = 0.5 * (1.0 - x);
            r.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

// Integer cells [n, n+1] for n in [lo, hi): the integrand is smooth inside
// each cell, so a 6-point rule per cell is used with the 4-point rule on the
// same cell as its error estimate. Cells whose estimate exceeds their share
// of the tolerance are redone with the adaptive 16-point integrator.
template <class F>
SegmentDetail integrate_cells(F &f, double lo, double hi, const SegmentOptions &opt)
{
    const auto &r6 = unit_gauss_legendre<6>();
    const auto &r4 = unit_gauss_legendre<4>();
    const std::size_t ncell = static_cast<std::size_t>(hi - lo);
    if (ncell > opt.panel_budget) {
        throw NoConvergence("integrate_cells: more cells than the panel budget", {});
    }
    struct Cell
    {
        Complex v6, v4;
        double abs, inner, noise;
    };
    std::vector<Cell> cells(ncell);
    Complex total{};
    for (std::size_t c = 0; c < ncell; ++c) {
        const double n = lo + static_cast<double>(c);
        Cell cell{};
        for (std::size_t i = 0; i < 6; ++i) {
            const Estimate e = eval_estimate(f, n + r6.nodes[i]);
            cell.v6 += r6.weights[i] * e.value;
            cell.abs += r6.weights[i] * std::abs(e.value);
            cell.inner += r6.weights[i] * e.err;
        }
        double inner4 = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            const Estimate e = eval_estimate(f, n + r4.nodes[i]);
            cell.v4 += r4.weights[i] * e.value;
            inner4 += r4.weights[i] * e.err;
        }
        cell.noise = 2.0 * (cell.inner + inner4);
        total += cell.v6;
        cells[c] = cell;
    }

    SegmentDetail out;
    out.result.evals = 10 * ncell;
    const double share = opt.tol * (1.0 + std::abs(total)) / static_cast<double>(ncell);
    double qerr = 0.0, inner = 0.0;
    for (std::size_t c = 0; c < ncell; ++c) {
        const Cell &cell = cells[c];
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * cell.abs;
        const double diff = std::abs(cell.v6 - cell.v4);
        if (diff <= std::max(share, floor + cell.noise)) {
            out.result.value += cell.v6;
            out.abs += cell.abs;
            qerr += std::max(diff, floor);
            inner += cell.inner;
            out.result.panels += 1;
            continue;
        }
        const double n = lo + static_cast<double>(c);
        SegmentOptions sub = opt;
        sub.integer_breakpoints = false;
        sub.tol = std::max(share / (1.0 + std::abs(cell.v6)), 1e-15);
        auto refined = integrate_segment_detail(f, n, n + 1.0, {}, sub);
        out.result.value += refined.result.value;
        out.abs += refined.abs;
        qerr += refined.result.err;
        out.result.panels += refined.result.panels;
        out.result.evals += refined.result.evals;
    }
    out.result.err = qerr + inner;
    return out;
}

// Exact discrete-sum weights sum_{n=0}^{L-1} l_j(n) for the Lagrange basis
// on 17 integer nodes placed at rounded Chebyshev-Lobatto points of
// [0, L-1], and for the nested 9-node subset. Shift invariant, so they are
// cached by length; callers only use power-of-two lengths.
struct DiscreteSumWeights
{
    std::array<double, 17> nodes;
    std::array<double, 17> w17;
    std::array<double, 9> w9;
    bool valid = false;
};

inline DiscreteSumWeights compute_discrete_sum_weights(double length)
{
    const double lo = 0.0, hi = length;
    DiscreteSumWeights dw;
    const double span = hi - 1.0 - lo;
    const double pi = std::acos(-1.0);
    for (int j = 0; j < 17; ++j) {
        dw.nodes[j] = lo + std::round(span * 0.5 * (1.0 - std::cos(pi * j / 16.0)));
        if (j > 0 && !(dw.nodes[j] > dw.nodes[j - 1])) {
            return dw;
        }
    }
    const double mid = 0.5 * (lo + hi - 1.0), half = 0.5 * span;
    auto scaled = [&](double n) { return (n - mid) / half; };

    auto barycentric = [&](const double *nd, int m, double *b) {
        for (int j = 0; j < m; ++j) {
            double prod = 1.0;
            for (int i = 0; i < m; ++i) {
                if (i != j) prod *= scaled(nd[j]) - scaled(nd[i]);
            }
            b[j] = 1.0 / prod;
        }
    };
    std::array<double, 9> sub{};
    for (int j = 0; j < 9; ++j) sub[j] = dw.nodes[2 * j];
    std::array<double, 17> b17{};
    std::array<double, 9> b9{};
    barycentric(dw.nodes.data(), 17, b17.data());
    barycentric(sub.data(), 9, b9.data());

    auto accumulate = [&](const double *nd, const double *b, int m, long double *acc) {
        int next = 0;
        for (double n = lo; n < hi; n += 1.0) {
            if (next < m && n == nd[next]) {
                acc[next] += 1.0L;
                ++next;
                continue;
            }
            const double s = scaled(n);
            std::array<double, 17> t{};
            double denom = 0.0;
            for (int j = 0; j < m; ++j) {
                t[j] = b[j] / (s - scaled(nd[j]));
                denom += t[j];
            }
            for (int j = 0; j < m; ++j) acc[j] += t[j] / denom;
        }
    };
    std::array<long double, 17> a17{};
    std::array<long double, 9> a9{};
    accumulate(dw.nodes.data(), b17.data(), 17, a17.data());
    accumulate(sub.data(), b9.data(), 9, a9.data());
    for (int j = 0; j < 17; ++j) dw.w17[j] = static_cast<double>(a17[j]);
    for (int j = 0; j < 9; ++j) dw.w9[j] = static_cast<double>(a9[j]);
    dw.valid = true;
    return dw;
}

inline const DiscreteSumWeights &discrete_sum_weights(double length)
{
    static std::mutex mutex;
    static std::map<double, DiscreteSumWeights> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(length);
    if (it == cache.end()) {
        it = cache.emplace(length, compute_discrete_sum_weights(length)).first;
    }
    return it->second;
}

// Long far-field piece [lo, hi) of integer cells. For each Gauss offset t the
// samples n -> f(n + t) come from a function that is smooth in n (the P1
// kinks sit at cell ends), so their sum over the piece is taken from a
// degree-16 interpolant on integer nodes. Falls back to cell-by-cell
// integration when the nested degree-8 sum disagrees.
template <class F>
SegmentDetail integrate_long_piece(F &f, double lo, double hi, const SegmentOptions &opt)
{
    if (hi - lo < 256.0) {
        return integrate_cells(f, lo, hi, opt);
    }
    const DiscreteSumWeights &dw = discrete_sum_weights(hi - lo);
    if (!dw.valid) {
        return integrate_cells(f, lo, hi, opt);
    }
    const auto &r6 = unit_gauss_legendre<6>();
    const auto &r4 = unit_gauss_legendre<4>();

    struct OffsetSum
    {
        Complex s17, s9;
        double abs = 0.0, inner = 0.0;
    };
    auto offset_sum = [&](double t) {
        OffsetSum o;
        for (int j = 0; j < 17; ++j) {
            const Estimate e = eval_estimate(f, lo + dw.nodes[j] + t);
            o.s17 += dw.w17[j] * e.value;
            o.abs += std::fabs(dw.w17[j]) * std::abs(e.value);
            o.inner += std::fabs(dw.w17[j]) * e.err;
            if (j % 2 == 0) o.s9 += dw.w9[j / 2] * e.value;
        }
        return o;
    };

    SegmentDetail out;
    Complex v4{};
    double interp_err = 0.0, inner = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        const OffsetSum o = offset_sum(r6.nodes[i]);
        out.result.value += r6.weights[i] * o.s17;
        out.abs += r6.weights[i] * o.abs;
        inner += r6.weights[i] * o.inner;
        interp_err += r6.weights[i] * std::abs(o.s17 - o.s9);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const OffsetSum o = offset_sum(r4.nodes[i]);
        v4 += r4.weights[i] * o.s17;
        interp_err += r4.weights[i] * std::abs(o.s17 - o.s9);
    }
    const double rule_err = std::abs(out.result.value - v4);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * out.abs;
    const double qerr = std::max(interp_err + rule_err, floor);
    out.result.err = qerr + inner;
    out.result.panels = static_cast<std::size_t>(hi - lo);
    out.result.evals = 170;
    if (qerr > opt.tol * (1.0 + std::abs(out.result.value)) && hi - lo <= static_cast<double>(opt.panel_budget)) {
        auto direct = integrate_cells(f, lo, hi, opt);
        direct.result.evals += out.result.evals;
        return direct;
    }
    return out;
}

// One piece of a half-line: integer-aligned pieces of kinked integrands use
// the cell machinery, everything else the adaptive segment integrator.
template <class F>
SegmentDetail integrate_piece(F &f, double lo, double hi, const SegmentOptions &opt)
{
    if (opt.integer_breakpoints && lo == std::floor(lo) && hi == std::floor(hi) && hi > lo) {
        return integrate_long_piece(f, lo, hi, opt);
    }
    return integrate_segment_detail(f, lo, hi, {}, opt);
}

// Scans x = a + 2^j for the point where |f| settles into decay no slower than
// |x|^-q. Returns the distance from a at which that happens.
template <class F>
double sample_tail_onset(F &f, double a, double q)
{
    constexpr int max_j = 44;
    std::array<double, max_j + 1> mag{};
    std::array<double, max_j + 1> pos{};
    for (int j = 0; j <= max_j; ++j) {
        pos[j] = a + std::ldexp(1.0, j);
        mag[j] = std::max(std::abs(eval_estimate(f, pos[j]).value), std::abs(eval_estimate(f, pos[j] + 0.5).value));
    }
    int run = 0;
    for (int j = 0; j < max_j; ++j) {
        bool ok;
        if (mag[j] == 0.0) {
            ok = mag[j + 1] == 0.0;
        } else if (std::fabs(pos[j]) < 1.0) {
            ok = false;
        } else {
            const double expected = std::pow(std::fabs(pos[j]) / std::fabs(pos[j + 1]), q);
            ok = mag[j + 1] <= 1.25 * expected * mag[j];
        }
        run = ok ? run + 1 : 0;
        if (run == 3) {
            return std::ldexp(1.0, j - 2);
        }
    }
    throw Error(ErrorCode::TailEstimateFailed, "integrand does not show the expected decay");
}

// Integral over [a, inf) of f with |f| ~ x^-Re(q): truncation at H*2^i (integers)
// followed by Richardson elimination of the tail terms H^(1-q-j).
template <class F>
QuadratureResult integrate_half_line_impl(F &f, double a, Complex q, const LineOptions &opt)
{
    if (!(q.real() > 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "half-line integral needs decay order > 1");
    }
    const double onset = opt.onset > 0.0 ? opt.onset : sample_tail_onset(f, a, q.real());
    const double want = std::max({8.0, a + 2.0 * onset, 2.0 * std::fabs(a) + 8.0});
    double H = 8.0;
    while (H < want) H *= 2.0;

    SegmentOptions seg{opt.tol / 8.0, opt.integer_breakpoints, opt.panel_budget};
    QuadratureResult total;
    SegmentDetail first;
    if (opt.integer_breakpoints) {
        const double start = std::ceil(a);
        if (start > a) {
            first = integrate_segment_detail(f, a, start, {}, seg);
        }
        // Cells up to the next power of two, then doubling pieces up to H.
        double edge = 8.0;
        while (edge < start) edge *= 2.0;
        edge = std::min(edge, H);
        auto add = [&](const SegmentDetail &d) {
            first.result += d.result;
            first.abs += d.abs;
        };
        add(integrate_cells(f, start, edge, seg));
        for (double p = edge; p < H; p *= 2.0) {
            add(integrate_long_piece(f, p, 2.0 * p, seg));
        }
    } else {
        first = integrate_segment_detail(f, a, H, {}, seg);
    }
    Complex sum = first.result.value;
    double piece_err = first.result.err;
    total.panels = first.result.panels;
    total.evals = first.result.evals;

    RichardsonTable table(1.0 - q);
    table.push(sum);
    const double decay_gain = std::pow(2.0, 1.0 - q.real());
    const double tail_factor = decay_gain / (1.0 - decay_gain);

    double lo = H;
    for (std::size_t level = 1; level <= opt.max_levels; ++level) {
        const double hi = 2.0 * lo;
        auto piece = integrate_piece(f, lo, hi, seg);
        sum += piece.result.value;
        piece_err += piece.result.err;
        total.panels += piece.result.panels;
        total.evals += piece.result.evals;
        table.push(sum);
        lo = hi;

        const double target = opt.tol * (1.0 + std::abs(table.best()));
        // Tail already negligible: |tail beyond hi| <= tail_factor * int |f| over the last piece.
        const double tail_bound = tail_factor * piece.abs;
        if (tail_bound <= target / 8.0) {
            total.value = sum;
            total.err = piece_err + tail_bound;
            return total;
        }
        if (level >= 2 && table.last_change() <= target / 2.0) {
            total.value = table.best();
            total.err = table.last_change() + table.amplification() * piece_err;
            return total;
        }
    }
    total.value = table.best();
    total.err = table.last_change() + table.amplification() * piece_err;
    throw NoConvergence("half-line integral: tail extrapolation did not settle", total);
}

template <class F>
struct Reflected
{
    F &f;
    auto operator()(double x) -> std::invoke_result_t<F &, double>
    {
        return f(-x);
    }
};

}

/// Adaptive integral of f over [a, b] with explicit breakpoints.
template <class F>
QuadratureResult integrate_segment(F &&f, double a, double b, std::span<const double> breakpoints,
                                   const SegmentOptions &opt = {})
{
    return detail::integrate_segment_detail(f, a, b, breakpoints, opt).result;
}

template <class F>
QuadratureResult integrate_segment(F &&f, double a, double b, const SegmentOptions &opt = {})
{
    return detail::integrate_segment_detail(f, a, b, {}, opt).result;
}

/// Same as integrate_segment but also returns the final panel boundaries.
template <class F>
std::vector<double> segment_panel_boundaries(F &&f, double a, double b, const SegmentOptions &opt = {})
{
    return detail::integrate_segment_detail(f, a, b, {}, opt, true).boundaries;
}

/// Integral over [a, inf). `decay` is the exponent q in |f(x)| ~ C |x|^-Re q;
/// a complex q also removes oscillating tails of the form x^-q.
template <class F>
QuadratureResult integrate_half_line(F &&f, double a, Complex decay, const LineOptions &opt = {})
{
    return detail::integrate_half_line_impl(f, a, decay, opt);
}

/// Integral over the real line.
///
/// Absolute mode requires decay_order > 1 and integrates both half-lines.
/// Symmetric mode evaluates S(N) = int_{-N}^{N} f on a doubling sequence of N
/// and applies iterated Aitken acceleration (the principal-value style limit
/// needed when f only decays like 1/|x|).
template <class F>
QuadratureResult integrate_line(F &&f, LineMode mode, double decay_order, const LineOptions &opt = {})
{
    if (!(decay_order > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "integrate_line: decay order must be positive");
    }
    if (mode == LineMode::Absolute) {
        if (!(decay_order > 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "integrate_line: absolute mode needs decay order > 1");
        }
        LineOptions half = opt;
        half.tol = opt.tol / 2.0;
        detail::Reflected<std::remove_reference_t<F>> g{f};
        QuadratureResult r = detail::integrate_half_line_impl(f, 0.0, decay_order, half);
        r += detail::integrate_half_line_impl(g, 0.0, decay_order, half);
        return r;
    }

    detail::Reflected<std::remove_reference_t<F>> g{f};
    const double onset = opt.onset > 0.0
                             ? opt.onset
                             : std::max(detail::sample_tail_onset(f, 0.0, decay_order),
                                        detail::sample_tail_onset(g, 0.0, decay_order));
    double N = 8.0;
    while (N < 2.0 * onset) N *= 2.0;
    SegmentOptions seg{opt.tol / 8.0, opt.integer_breakpoints, opt.panel_budget};

    QuadratureResult total = integrate_segment(f, -N, N, seg);
    double piece_err = total.err;
    std::vector<Complex> seq{total.value};
    for (std::size_t level = 1; level <= opt.max_levels; ++level) {
        const QuadratureResult lo = detail::integrate_piece(f, -2.0 * N, -N, seg).result;
        const QuadratureResult hi = detail::integrate_piece(f, N, 2.0 * N, seg).result;
        N *= 2.0;
        seq.push_back(seq.back() + lo.value + hi.value);
        piece_err += lo.err + hi.err;
        total.panels += lo.panels + hi.panels;
        total.evals += lo.evals + hi.evals;
        if (seq.size() < 4) {
            continue;
        }
        const AitkenEstimate est = iterated_aitken(seq);
        const double target = opt.tol * (1.0 + std::abs(est.value));
        if (est.change <= target / 2.0) {
            total.value = est.value;
            total.err = est.change + 4.0 * piece_err;
            return total;
        }
    }
    const AitkenEstimate est = iterated_aitken(seq);
    total.value = est.value;
    total.err = est.change + 4.0 * piece_err;
    throw NoConvergence("integrate_line: symmetric limit did not settle", total);
}

/// Integral of f(x, y) over the half-strip R x [y_edge, inf) (Up) or
/// R x (-inf, y_edge] (Down), iterated: an absolutely convergent line
/// integral in x for every y, then a half-line integral in y. Panels are
/// split at integers in both directions. Requires decay_order > 2, the
/// threshold for absolute convergence of a 2-D integral of r^-q.
template <class F>
QuadratureResult integrate_half_strip(F &&f, double y_edge, StripDirection dir, double decay_order,
                                      const LineOptions &opt = {})
{
    if (!(decay_order > 2.0)) {
        throw Error(ErrorCode::UnsupportedDecay,
                    "integrate_half_strip: decay order must exceed 2 for an absolutely convergent 2-D integral");
    }
    const double sign = dir == StripDirection::Up ? 1.0 : -1.0;
    std::size_t inner_evals = 0;
    LineOptions inner = opt;
    inner.tol = opt.tol / 4.0;
    inner.onset = 0.0;

    auto outer = [&](double t) -> Estimate {
        const double y = sign * t;
        auto row = [&](double x) { return Complex(f(x, y)); };
        const QuadratureResult r = integrate_line(row, LineMode::Absolute, decay_order, inner);
        inner_evals += r.evals;
        return {r.value, r.err};
    };
    auto along_y = [&](double t) { return Complex(f(0.0, sign * t)); };

    LineOptions outer_opt = opt;
    outer_opt.tol = opt.tol / 2.0;
    outer_opt.onset = opt.onset > 0.0 ? opt.onset : detail::sample_tail_onset(along_y, sign * y_edge, decay_order);
    QuadratureResult r = detail::integrate_half_line_impl(outer, sign * y_edge, decay_order - 1.0, outer_opt);
    r.evals += inner_evals;
    return r;
}

}
