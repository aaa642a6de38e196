#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "core.hpp"

namespace latzeta
{

/// Richardson extrapolation for a sequence S(h), S(2h), S(4h), ... whose
/// error has the expansion sum_j c_j h^(p - j), i.e. a known leading
/// exponent p (Re p < 0) followed by integer steps. Exponents may be complex,
/// which covers tails like x^(-s) with complex s.
class RichardsonTable
{
    public:
        explicit RichardsonTable(Complex leading_exponent) : m_p(leading_exponent) {}

        void push(const Complex &s)
        {
            std::vector<Complex> row;
            row.reserve(m_rows.size() + 1);
            row.push_back(s);
            for (std::size_t j = 1; j <= m_rows.size(); ++j) {
                const Complex r = std::pow(Complex(2.0), m_p - static_cast<double>(j - 1));
                const Complex &prev = m_rows.back()[j - 1];
                row.push_back((row[j - 1] - r * prev) / (1.0 - r));
            }
            m_rows.push_back(std::move(row));
        }

        std::size_t size() const
        {
            return m_rows.size();
        }
        /// Most-extrapolated value from the latest row.
        const Complex &best() const
        {
            return m_rows.back().back();
        }
        /// |best() - previous best()|; the error estimate of the previous diagonal entry.
        double last_change() const
        {
            if (m_rows.size() < 2) {
                return HUGE_VAL;
            }
            return std::abs(m_rows.back().back() - m_rows[m_rows.size() - 2].back());
        }
        /// Bound on how much the extrapolation weights amplify per-entry errors.
        double amplification() const
        {
            double amp = 1.0;
            for (std::size_t j = 1; j < m_rows.size(); ++j) {
                const double r = std::abs(std::pow(Complex(2.0), m_p - static_cast<double>(j - 1)));
                amp *= (1.0 + r) / std::fabs(1.0 - r);
            }
            return amp;
        }

    private:
        Complex m_p;
        std::vector<std::vector<Complex>> m_rows;
};

/// One Aitken delta-squared step on s0, s1, s2. Falls back to s2 when the
/// second difference vanishes (sequence already converged to roundoff).
inline Complex aitken_delta2(const Complex &s0, const Complex &s1, const Complex &s2)
{
    const Complex d1 = s2 - s1;
    const Complex d0 = s1 - s0;
    const Complex dd = d1 - d0;
    const double scale = std::abs(s0) + std::abs(s1) + std::abs(s2);
    if (std::abs(dd) <= 1e-14 * scale || std::abs(dd) == 0.0) {
        return s2;
    }
    return s2 - d1 * d1 / dd;
}

/// Repeated Aitken delta-squared on a sequence: each sweep removes one
/// geometric error component. Returns the last two entries of the deepest
/// sweep that still has at least two entries (for convergence testing).
struct AitkenEstimate
{
    Complex value;
    double change = HUGE_VAL;
};

inline AitkenEstimate iterated_aitken(const std::vector<Complex> &seq)
{
    std::vector<Complex> cur = seq;
    AitkenEstimate out;
    if (cur.empty()) {
        return out;
    }
    out.value = cur.back();
    if (cur.size() >= 2) {
        out.change = std::abs(cur.back() - cur[cur.size() - 2]);
    }
    while (cur.size() >= 3) {
        std::vector<Complex> next;
        for (std::size_t i = 0; i + 2 < cur.size(); ++i) {
            next.push_back(aitken_delta2(cur[i], cur[i + 1], cur[i + 2]));
        }
        if (next.size() < 2) {
            break;
        }
        out.value = next.back();
        out.change = std::abs(next.back() - next[next.size() - 2]);
        cur = std::move(next);
    }
    return out;
}

}
