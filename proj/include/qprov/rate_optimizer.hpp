#ifndef QPROV_RATE_OPTIMIZER_HPP
#define QPROV_RATE_OPTIMIZER_HPP

#include <cmath>
#include <utility>

#include "common.hpp"
#include "effective_capacity.hpp"

namespace qprov {

/// Result of maximizing C_E over the transmission rate at fixed (gamma, kappa,
/// theta). foc_residual is the first-order stationarity expression evaluated
/// at r_star (zero at an interior optimum, up to search tolerance);
/// grid_fallback records that the coarse scan saw a non-unimodal profile and
/// a dense grid was used instead; degenerate flags an optimum with C_E below
/// 1e-12 (the whole admissible range is effectively zero-rate).
struct OptimumRate {
    double r_star;
    double c_e_star;
    double foc_residual;
    std::pair<double, double> bracket;
    bool grid_fallback;
    bool degenerate;
};

/// Stationarity residual of the rate optimum,
///   gamma*xi - gamma*(theta*r + kappa) + 2*gamma*nu - 2*r*nu*ln(2)*2^r,
/// with nu and xi evaluated at r. Positive below the optimum, negative above
/// (it carries the sign of dC_E/dR).
inline double foc_residual(double gamma, double kappa, QosExponent q, double r) {
    validate(q);
    if (!is_finite_positive(r)) throw invalid_parameter("foc_residual: rate must be > 0");
    const ChannelSpec spec{gamma, r, kappa};
    const OnOffChain chain = derive_chain(spec);
    const double tr = q.theta * r;
    const double xi = std::sqrt((tr - kappa) * (tr - kappa) + 4.0 * tr * chain.mu);
    return gamma * xi - gamma * (tr + kappa) + 2.0 * gamma * chain.nu -
           2.0 * r * chain.nu * ln2 * std::exp2(r);
}

/// Magnitude scale of the residual terms at r, for relative tolerances.
inline double foc_scale(double gamma, double kappa, QosExponent q, double r) {
    const ChannelSpec spec{gamma, r, kappa};
    const OnOffChain chain = derive_chain(spec);
    const double tr = q.theta * r;
    const double xi = std::sqrt((tr - kappa) * (tr - kappa) + 4.0 * tr * chain.mu);
    return gamma * (xi + tr + kappa + 2.0 * chain.nu) + 2.0 * r * chain.nu * ln2 * std::exp2(r);
}

namespace detail {

/// Rates beyond this point leave the channel ON with probability < 1e-12;
/// C_E underflows there and the optimum cannot be outside.
inline double rate_search_ceiling(double gamma) {
    static const double z_hi = 27.63102111592855;  // 1 - 1e-12 quantile of Exp(1)
    return std::log1p(gamma * z_hi) / ln2;
}

}  // namespace detail

/// Bounded maximization of R -> C_E(gamma, theta, R, kappa) on [0, R_max],
/// R_max chosen so the ON probability there is negligible. A coarse scan
/// locates the mode (and checks the rise-then-fall shape); golden-section
/// refines it to |dR| <= 1e-9. If the scan is not unimodal the search falls
/// back to a dense grid plus local refinement and flags it.
inline OptimumRate optimize_rate(double gamma, double kappa, QosExponent q) {
    ChannelSpec probe{gamma, 0.0, kappa};
    validate(probe);
    validate(q);
    auto ce = [&](double r) {
        return effective_capacity(ChannelSpec{gamma, r, kappa}, q).value;
    };
    const double r_max = detail::rate_search_ceiling(gamma);

    auto scan_argmax = [&](int points, bool* unimodal) {
        int best = 0;
        double best_v = 0.0;
        double prev = 0.0;
        int direction_flips = 0;
        int trend = +1;
        for (int i = 0; i <= points; ++i) {
            const double r = r_max * double(i) / points;
            const double v = ce(r);
            if (v > best_v) { best_v = v; best = i; }
            if (i > 0) {
                const int dir = v > prev ? +1 : (v < prev ? -1 : trend);
                if (dir != trend) ++direction_flips;
                trend = dir;
            }
            prev = v;
        }
        if (unimodal) *unimodal = direction_flips <= 1;
        return best;
    };

    bool unimodal = true;
    int points = 64;
    int best = scan_argmax(points, &unimodal);
    bool fallback = false;
    if (!unimodal) {
        fallback = true;
        points = 4096;
        best = scan_argmax(points, nullptr);
    }
    const double lo = r_max * double(std::max(best - 1, 0)) / points;
    const double hi = r_max * double(std::min(best + 1, points)) / points;
    const GoldenResult g = golden_max(ce, lo, hi, 1e-9);

    OptimumRate out{};
    out.r_star = g.x;
    out.c_e_star = g.value;
    out.foc_residual = g.x > 0.0 ? foc_residual(gamma, kappa, q, g.x)
                                 : std::numeric_limits<double>::quiet_NaN();
    out.bracket = {lo, hi};
    out.grid_fallback = fallback;
    out.degenerate = g.value <= 1e-12;
    return out;
}

/// Independent characterization of the optimum: bisection on the sign change
/// of foc_residual over (0, R_max]. Cross-checks optimize_rate; throws
/// bracket_failure when the residual never changes sign on the scan grid.
inline double optimize_rate_by_foc(double gamma, double kappa, QosExponent q) {
    ChannelSpec probe{gamma, 0.0, kappa};
    validate(probe);
    validate(q);
    const double r_max = detail::rate_search_ceiling(gamma);
    auto f = [&](double r) { return -foc_residual(gamma, kappa, q, r); };  // increasing through 0
    const int n = 512;
    double prev_r = r_max * 1e-6;
    double prev_v = f(prev_r);
    for (int i = 1; i <= n; ++i) {
        const double r = r_max * double(i) / n;
        const double v = f(r);
        if (prev_v <= 0.0 && v >= 0.0)
            return bisect_increasing(f, prev_r, r, 0.0, 200);
        prev_r = r;
        prev_v = v;
    }
    throw bracket_failure("optimize_rate_by_foc: residual does not change sign",
                          r_max * 1e-6, r_max, -f(r_max * 1e-6), -f(r_max));
}

}  // namespace qprov

#endif  // QPROV_RATE_OPTIMIZER_HPP
