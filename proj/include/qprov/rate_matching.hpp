#ifndef QPROV_RATE_MATCHING_HPP
#define QPROV_RATE_MATCHING_HPP

#include <cmath>

#include "common.hpp"
#include "effective_capacity.hpp"
#include "markov_sources.hpp"

namespace qprov {

enum class MatchMethod { closed_form, bisection };

/// Solution of the matching condition a(theta; lambda) = C_E: the largest
/// ON-state arrival rate (and the implied average rate) the service can carry
/// at the exponent theta. residual is a(theta; lambda*) - C_E recomputed from
/// the family's bandwidth formula.
struct MatchResult {
    double lambda_on_star;
    double lambda_avg_star;
    double residual;
    MatchMethod method;
};

namespace detail {

inline void check_match_inputs(double c_e, QosExponent q) {
    validate(q);
    if (!is_finite_nonneg(c_e)) throw invalid_parameter("match: effective capacity must be >= 0");
}

inline MatchResult finish(double lambda_on, double p_on, double c_e, QosExponent q,
                          const SourceModel& family, MatchMethod method) {
    SourceModel probe = family;
    std::visit([&](auto& s) { s.lambda_on = lambda_on; }, probe);
    const double residual = effective_bandwidth(probe, q) - c_e;
    return {lambda_on, lambda_on * p_on, residual, method};
}

}  // namespace detail

/// Maximum DTMS ON-state rate supporting capacity c_e:
///   lambda* = (1/theta) * log[(e^{2 theta C} - p11 e^{theta C}) /
///                             ((1 - p11 - p22) + p22 e^{theta C})].
/// Factored around e^{-theta C} so it neither overflows nor loses digits for
/// loose exponents.
inline MatchResult max_arrival_dtms(double p11, double p22, double c_e, QosExponent q) {
    validate(DtmsSource{p11, p22, 0.0});
    detail::check_match_inputs(c_e, q);
    const double p_on = (1.0 - p11) / ((1.0 - p11) + (1.0 - p22));
    if (c_e == 0.0) return {0.0, 0.0, 0.0, MatchMethod::closed_form};
    const double th = q.theta;
    const double einv = std::exp(-th * c_e);
    const double num = -p11 * einv;                       // log1p argument of e^{theta C} - p11, scaled
    const double den = p22 + (1.0 - p11 - p22) * einv;    // e^{-theta C} * denominator
    if (den <= 0.0 || num <= -1.0)
        throw no_solution("dtms match: matching equation has no positive solution");
    const double lambda_on = c_e + (std::log1p(num) - std::log(den)) / th;
    return detail::finish(lambda_on, p_on, c_e, q, DtmsSource{p11, p22, 0.0},
                          MatchMethod::closed_form);
}

/// Burstiness form: lambda*_avg = (s/theta) * log[(e^{theta C} - (1-s))/s].
/// Identical to max_arrival_dtms with p11 = 1-s, p22 = s.
inline MatchResult max_arrival_dtms_simplified(BurstinessParam b, double c_e, QosExponent q) {
    validate(b);
    detail::check_match_inputs(c_e, q);
    if (c_e == 0.0) return {0.0, 0.0, 0.0, MatchMethod::closed_form};
    const double th = q.theta;
    const double einv = std::exp(-th * c_e);
    const double arg = -(1.0 - b.s) * einv;
    if (arg <= -1.0) throw no_solution("dtms match: matching equation has no positive solution");
    const double lambda_avg = b.s * (c_e + (std::log1p(arg) - std::log(b.s)) / th);
    return detail::finish(lambda_avg / b.s, b.s, c_e, q,
                          SourceModel{DtmsSource{1.0 - b.s, b.s, 0.0}}, MatchMethod::closed_form);
}

/// Fluid source: lambda*_avg = P_ON * C * (theta C + alpha + beta)/(theta C + alpha).
inline MatchResult max_arrival_mfs(double alpha, double beta, double c_e, QosExponent q) {
    validate(MfsSource{alpha, beta, 0.0});
    detail::check_match_inputs(c_e, q);
    if (c_e == 0.0) return {0.0, 0.0, 0.0, MatchMethod::closed_form};
    const double tc = q.theta * c_e;
    const double lambda_on = c_e * (tc + alpha + beta) / (tc + alpha);
    return detail::finish(lambda_on, alpha / (alpha + beta), c_e, q,
                          SourceModel{MfsSource{alpha, beta, 0.0}}, MatchMethod::closed_form);
}

/// Poisson-modulated source, solved by bisection of the bandwidth formula in
/// lambda. Bisection is authoritative here: it enforces the matching condition
/// directly, which the commonly written closed form for this family does not
/// (compare max_arrival_mmps_closed_form).
inline MatchResult max_arrival_mmps(double alpha, double beta, double c_e, QosExponent q) {
    validate(MmpsSource{alpha, beta, 0.0});
    detail::check_match_inputs(c_e, q);
    const double p_on = alpha / (alpha + beta);
    if (c_e == 0.0) return {0.0, 0.0, 0.0, MatchMethod::bisection};
    const double th = q.theta;
    const double em = std::expm1(th);
    const double tc = th * c_e;
    // a(theta; hi) >= C by monotonicity: hi is twice the algebraic inversion point
    double hi = 2.0 * (tc + alpha + beta) / em;
    if (!std::isfinite(hi) || hi == 0.0) {
        // tilt e^theta overflowed: the matching rate is below double range
        SourceModel probe{MmpsSource{alpha, beta, 0.0}};
        return {0.0, 0.0, effective_bandwidth(probe, q) - c_e, MatchMethod::bisection};
    }
    auto f = [&](double lam) {
        return detail::tilted_fluid_eigenvalue(em * lam, alpha, beta) / th - c_e;
    };
    const double lambda_on =
        bisect_increasing(f, 0.0, hi, 1e-12 * std::max(1.0, c_e), 200);
    return detail::finish(lambda_on, p_on, c_e, q, SourceModel{MmpsSource{alpha, beta, 0.0}},
                          MatchMethod::bisection);
}

/// Algebraic closed-form variant for the MMPS maximum average rate,
///   lambda*_avg = P_ON * theta * (theta C + alpha + beta) * C /
///                 ((e^theta - 1) * theta * C + alpha).
/// Kept for comparison because it does not satisfy the matching condition:
/// its residual is reported (and it collapses to 0 instead of C as theta -> 0).
inline MatchResult max_arrival_mmps_closed_form(double alpha, double beta, double c_e,
                                                QosExponent q) {
    validate(MmpsSource{alpha, beta, 0.0});
    detail::check_match_inputs(c_e, q);
    const double p_on = alpha / (alpha + beta);
    if (c_e == 0.0) return {0.0, 0.0, 0.0, MatchMethod::closed_form};
    const double th = q.theta;
    const double tc = th * c_e;
    const double lambda_avg = p_on * th * (tc + alpha + beta) * c_e / (std::expm1(th) * tc + alpha);
    return detail::finish(lambda_avg / p_on, p_on, c_e, q,
                          SourceModel{MmpsSource{alpha, beta, 0.0}}, MatchMethod::closed_form);
}

/// Generic numeric inversion of a(theta; lambda) = c_e for any family; the
/// oracle the closed forms are checked against. The lambda field of `family`
/// is ignored. Throws bracket_failure with the evaluated endpoints if no
/// bracket can be grown (not reachable for these families: their bandwidths
/// are continuous, strictly increasing and unbounded in lambda).
inline MatchResult invert_bandwidth(const SourceModel& family, double c_e, QosExponent q) {
    validate(family);
    detail::check_match_inputs(c_e, q);
    if (c_e == 0.0) return {0.0, 0.0, 0.0, MatchMethod::bisection};
    auto a_of = [&](double lam) {
        SourceModel probe = family;
        std::visit([&](auto& s) { s.lambda_on = lam; }, probe);
        return effective_bandwidth(probe, q);
    };
    double hi = std::max(1.0, 2.0 * c_e);
    double f_hi = a_of(hi) - c_e;
    int grow = 0;
    while (f_hi < 0.0 && grow++ < 80) {
        hi *= 2.0;
        f_hi = a_of(hi) - c_e;
    }
    if (f_hi < 0.0)
        throw bracket_failure("invert_bandwidth: no upper bracket", 0.0, hi, -c_e, f_hi);
    auto f = [&](double lam) { return a_of(lam) - c_e; };
    const double lambda_on = bisect_increasing(f, 0.0, hi, 1e-12 * std::max(1.0, c_e), 200);
    const double p_on = steady_state_on(family);
    return detail::finish(lambda_on, p_on, c_e, q, family, MatchMethod::bisection);
}

/// Family dispatch: closed forms where they are exact, bisection for MMPS.
inline MatchResult max_arrival(const SourceModel& family, double c_e, QosExponent q) {
    struct Visitor {
        double c_e;
        QosExponent q;
        MatchResult operator()(const DtmsSource& s) const {
            return max_arrival_dtms(s.p11, s.p22, c_e, q);
        }
        MatchResult operator()(const MfsSource& s) const {
            return max_arrival_mfs(s.alpha, s.beta, c_e, q);
        }
        MatchResult operator()(const MmpsSource& s) const {
            return max_arrival_mmps(s.alpha, s.beta, c_e, q);
        }
    };
    return std::visit(Visitor{c_e, q}, family);
}

}  // namespace qprov

#endif  // QPROV_RATE_MATCHING_HPP
