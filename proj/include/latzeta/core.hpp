#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace latzeta
{

using Complex = std::complex<double>;

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    ZeroGenerator,
    DegenerateLattice,
    PointOnLattice,
    DomainError,
    PoleHit,
    PoleNearDomain,
    UnsupportedDecay,
    BudgetExceeded,
    NoConvergence,
    SlowConvergence,
    TailEstimateFailed,
    Overflow,
};

inline const char *to_string(ErrorCode c)
{
    switch (c) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ZeroGenerator: return "ZeroGenerator";
        case ErrorCode::DegenerateLattice: return "DegenerateLattice";
        case ErrorCode::PointOnLattice: return "PointOnLattice";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::PoleNearDomain: return "PoleNearDomain";
        case ErrorCode::UnsupportedDecay: return "UnsupportedDecay";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SlowConvergence: return "SlowConvergence";
        case ErrorCode::TailEstimateFailed: return "TailEstimateFailed";
        case ErrorCode::Overflow: return "Overflow";
    }
    return "Unknown";
}

// Convergence failures are distinguished from domain errors so callers
// (the CLI in particular) can map them to different exit codes.
inline bool is_convergence_failure(ErrorCode c)
{
    return c == ErrorCode::NoConvergence || c == ErrorCode::SlowConvergence
           || c == ErrorCode::TailEstimateFailed || c == ErrorCode::BudgetExceeded;
}

class Error : public std::runtime_error
{
    public:
        Error(ErrorCode code, const std::string &what) : std::runtime_error(what), m_code(code) {}
        ErrorCode code() const noexcept
        {
            return m_code;
        }
    private:
        ErrorCode m_code;
};

/// Result of every integration routine.
struct QuadratureResult
{
    Complex value{0.0, 0.0};
    double err = 0.0;
    std::size_t panels = 0;
    std::size_t evals = 0;

    QuadratureResult &operator+=(const QuadratureResult &o)
    {
        value += o.value;
        err += o.err;
        panels += o.panels;
        evals += o.evals;
        return *this;
    }
};

/// Adaptive refinement ran out of budget; the best estimate so far is attached.
class NoConvergence : public Error
{
    public:
        NoConvergence(const std::string &what, QuadratureResult best)
            : Error(ErrorCode::NoConvergence, what), m_best(best) {}
        const QuadratureResult &best() const noexcept
        {
            return m_best;
        }
    private:
        QuadratureResult m_best;
};

inline bool isfinite(const Complex &z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline Complex checked(const Complex &z, const char *where)
{
    if (!isfinite(z)) {
        throw Error(ErrorCode::Overflow, std::string("non-finite value in ") + where);
    }
    return z;
}

// Complex literals: "0.3+0.2i", "-1.5i", "2", "i", "-i", "1e-3-2e+1i".
namespace detail
{

inline bool parse_unsigned_real(std::string_view &s, double &out)
{
    if (s.empty() || s.front() == '+' || s.front() == '-') {
        return false;
    }
    const char *first = s.data();
    const char *last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{}) {
        return false;
    }
    s.remove_prefix(static_cast<std::size_t>(res.ptr - first));
    return true;
}

inline double take_sign(std::string_view &s)
{
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        const double sign = s.front() == '-' ? -1.0 : 1.0;
        s.remove_prefix(1);
        return sign;
    }
    return 1.0;
}

}

inline Complex parse_complex(std::string_view text)
{
    const auto fail = [&]() -> Error {
        return Error(ErrorCode::ParseError, "cannot parse complex literal '" + std::string(text) + "'");
    };
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) {
        throw fail();
    }

    // First signed term: either the real part or (if followed by 'i') the imaginary part.
    double sign = detail::take_sign(s);
    double first = 1.0;
    const bool have_number = detail::parse_unsigned_real(s, first);
    if (s.empty()) {
        if (!have_number) throw fail();
        return {sign * first, 0.0};
    }
    if (s == "i") {
        return {0.0, sign * first};
    }
    if (!have_number) {
        throw fail();
    }
    const double re = sign * first;

    if (s.front() != '+' && s.front() != '-') {
        throw fail();
    }
    sign = detail::take_sign(s);
    double second = 1.0;
    detail::parse_unsigned_real(s, second);
    if (s != "i") {
        throw fail();
    }
    return {re, sign * second};
}

/// digits <= 0 selects the shortest text that reads back to the same double.
inline std::string format_real(double x, int digits = 0)
{
    char buf[64];
    if (digits <= 0) {
        const auto res = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, res.ptr);
    }
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

inline std::string format_complex(const Complex &z, int digits = 0)
{
    std::string out = format_real(z.real(), digits);
    const double im = z.imag();
    out += (std::signbit(im) ? "-" : "+");
    out += format_real(std::fabs(im), digits);
    out += 'i';
    return out;
}

/// Lattice coordinates (x0, y0) of a point p: x0*w1 + y0*w2 = p.
struct LatticeCoords
{
    double x0 = 0.0;
    double y0 = 0.0;
};

/// A lattice W = {n*w1 + m*w2} with R-linearly independent generators.
class Lattice
{
    public:
        Lattice(Complex w1, Complex w2) : m_w1(w1), m_w2(w2)
        {
            if (!isfinite(w1) || !isfinite(w2)) {
                throw Error(ErrorCode::InvalidArgument, "lattice generators must be finite");
            }
            if (w1 == Complex{} || w2 == Complex{}) {
                throw Error(ErrorCode::ZeroGenerator, "lattice generator is zero");
            }
            const double scale = std::abs(w1) + std::abs(w2);
            const double ratio_im = (w2 / w1).imag();
            if (!(std::fabs(ratio_im) > 1e-12 * scale * scale / std::norm(w1))) {
                throw Error(ErrorCode::DegenerateLattice, "lattice generators are linearly dependent over R");
            }
        }

        const Complex &w1() const noexcept
        {
            return m_w1;
        }
        const Complex &w2() const noexcept
        {
            return m_w2;
        }
        /// Im(w2/w1); its sign gives the orientation of the basis.
        double tau_im() const
        {
            return (m_w2 / m_w1).imag();
        }
        Complex point(double x, double y) const
        {
            return x * m_w1 + y * m_w2;
        }

        /// Solves x*w1 + y*w2 = p for real (x, y) by Cramer's rule.
        LatticeCoords coordinates(const Complex &p) const
        {
            const double a = m_w1.real(), b = m_w2.real();
            const double c = m_w1.imag(), d = m_w2.imag();
            const double det = a * d - b * c;
            const double scale = std::abs(m_w1) + std::abs(m_w2);
            if (!(std::fabs(det) > 1e-12 * scale * scale)) {
                throw Error(ErrorCode::DegenerateLattice, "singular lattice coordinate system");
            }
            return {(p.real() * d - b * p.imag()) / det, (a * p.imag() - c * p.real()) / det};
        }

        /// Distance from p to the nearest lattice point among the 3x3 block around
        /// the rounded coordinates.
        double distance_to_lattice(const Complex &p) const
        {
            const auto lc = coordinates(p);
            const double n0 = std::round(lc.x0), m0 = std::round(lc.y0);
            double best = std::abs(p);
            for (int dn = -1; dn <= 1; ++dn) {
                for (int dm = -1; dm <= 1; ++dm) {
                    best = std::min(best, std::abs(p - point(n0 + dn, m0 + dm)));
                }
            }
            return best;
        }

    private:
        Complex m_w1;
        Complex m_w2;
};

inline Lattice lattice_new(Complex w1, Complex w2)
{
    return Lattice(w1, w2);
}

inline LatticeCoords lattice_coordinates(const Lattice &lat, const Complex &p)
{
    return lat.coordinates(p);
}

}
