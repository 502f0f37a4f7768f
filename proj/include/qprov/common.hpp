#ifndef QPROV_COMMON_HPP
#define QPROV_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qprov {

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

/// A scalar input violates the domain of an operation.
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A two-state chain has no unique stationary distribution.
struct degenerate_chain : invalid_parameter {
    using invalid_parameter::invalid_parameter;
};

/// A matching/inversion problem has no root in the admissible range.
struct no_solution : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A requested operating target cannot be met by any admissible exponent.
struct infeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A root/optimum search could not establish a valid bracket.
struct bracket_failure : std::runtime_error {
    bracket_failure(const std::string& what, double lo, double hi, double f_lo, double f_hi)
        : std::runtime_error(what), lo(lo), hi(hi), f_lo(f_lo), f_hi(f_hi) {}
    double lo, hi, f_lo, f_hi;
};

// ---------------------------------------------------------------------------
// Small numeric toolkit
// ---------------------------------------------------------------------------

inline constexpr double ln2 = 0.6931471805599453094;

inline bool is_finite_positive(double x) { return std::isfinite(x) && x > 0.0; }
inline bool is_finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
inline bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

/// Bisection for a root of a monotone nondecreasing f on [lo, hi].
/// Requires f(lo) <= 0 <= f(hi). Stops when |f| <= f_tol or the interval
/// collapses; at most max_iter halvings.
inline double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                                double f_tol, int max_iter = 200) {
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < max_iter; ++i) {
        x = 0.5 * (lo + hi);
        const double v = f(x);
        if (std::abs(v) <= f_tol) return x;
        (v < 0.0 ? lo : hi) = x;
        if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi)))
            break;
    }
    return 0.5 * (lo + hi);
}

struct GoldenResult {
    double x;
    double value;
};

/// Golden-section maximization of a unimodal f on [lo, hi] down to |hi-lo| <= x_tol.
/// Returns the best point ever evaluated, which dominates the final midpoint
/// whenever rounding makes the interior probes disagree.
inline GoldenResult golden_max(const std::function<double(double)>& f, double lo, double hi,
                               double x_tol, int max_iter = 400) {
    static const double inv_phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    GoldenResult best = fc >= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
    for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
        if (fc >= fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if (fc > best.value) best = {c, fc};
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if (fd > best.value) best = {d, fd};
        }
    }
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm > best.value) best = {mid, fm};
    return best;
}

/// log(sum_i exp(x_i)) with the usual max shift.
inline double log_sum_exp(const std::vector<double>& x) {
    const double m = *std::max_element(x.begin(), x.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : x) s += std::exp(v - m);
    return m + std::log(s);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) { v[0] = lo; return v; }
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
    v.back() = hi;
    return v;
}

inline std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
    for (double& x : v) x = std::exp(x);
    if (n > 1) { v.front() = lo; v.back() = hi; }
    return v;
}

struct LineFit {
    double slope;
    double intercept;
    int points;
};

/// Ordinary least squares y = slope*x + intercept.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    if (n < 2) return {std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN(), n};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i]; }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    return {slope, (sy - slope * sx) / n, n};
}

/// 64-bit mix used to derive independent seed streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace qprov

#endif  // QPROV_COMMON_HPP
