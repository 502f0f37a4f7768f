#ifndef QPROV_MARKOV_SOURCES_HPP
#define QPROV_MARKOV_SOURCES_HPP

#include <cmath>
#include <variant>

#include "common.hpp"
#include "effective_capacity.hpp"

namespace qprov {

// ---------------------------------------------------------------------------
// Source models. All three are two-state ON/OFF: no traffic in OFF, and in ON
// either a fixed batch per block (DTMS), a fluid rate (MFS) or a Poisson
// intensity (MMPS). lambda_on is bits per block of unit duration.
// ---------------------------------------------------------------------------

/// Discrete-time Markov source: p11 = stay-OFF, p22 = stay-ON probability.
struct DtmsSource {
    double p11;
    double p22;
    double lambda_on;
};

/// Markov fluid source modulated by a continuous-time chain with OFF->ON rate
/// alpha and ON->OFF rate beta.
struct MfsSource {
    double alpha;
    double beta;
    double lambda_on;
};

/// Markov-modulated Poisson source; lambda_on is the ON-state intensity.
struct MmpsSource {
    double alpha;
    double beta;
    double lambda_on;
};

using SourceModel = std::variant<DtmsSource, MfsSource, MmpsSource>;

enum class SourceFamily { dtms, mfs, mmps };

/// Single-knob burstiness parameterization of the DTMS: p11 = 1-s, p22 = s.
/// Smaller s means burstier arrivals; s = 1 is a constant-rate source.
struct BurstinessParam {
    double s;
};

inline void validate(const DtmsSource& m) {
    if (!is_probability(m.p11)) throw invalid_parameter("dtms: p11 must be in [0,1]");
    if (!is_probability(m.p22)) throw invalid_parameter("dtms: p22 must be in [0,1]");
    if (!is_finite_nonneg(m.lambda_on)) throw invalid_parameter("dtms: lambda must be >= 0");
    if (m.p11 == 1.0 && m.p22 == 1.0) throw degenerate_chain("dtms: p11 = p22 = 1 has no unique stationary state");
}

inline void validate(const MfsSource& m) {
    if (!is_finite_positive(m.alpha)) throw invalid_parameter("mfs: alpha must be > 0");
    if (!is_finite_nonneg(m.beta)) throw invalid_parameter("mfs: beta must be >= 0");
    if (!is_finite_nonneg(m.lambda_on)) throw invalid_parameter("mfs: lambda must be >= 0");
}

inline void validate(const MmpsSource& m) {
    if (!is_finite_positive(m.alpha)) throw invalid_parameter("mmps: alpha must be > 0");
    if (!is_finite_nonneg(m.beta)) throw invalid_parameter("mmps: beta must be >= 0");
    if (!is_finite_nonneg(m.lambda_on)) throw invalid_parameter("mmps: lambda must be >= 0");
}

inline void validate(const BurstinessParam& b) {
    if (!(std::isfinite(b.s) && b.s > 0.0 && b.s <= 1.0))
        throw invalid_parameter("burstiness s must be in (0,1]");
}

inline void validate(const SourceModel& m) {
    std::visit([](const auto& s) { validate(s); }, m);
}

/// Stationary ON probability: (1-p11)/(2-p11-p22) for the discrete chain,
/// alpha/(alpha+beta) for the continuous ones.
inline double steady_state_on(const SourceModel& m) {
    validate(m);
    struct Visitor {
        double operator()(const DtmsSource& s) const {
            return (1.0 - s.p11) / ((1.0 - s.p11) + (1.0 - s.p22));
        }
        double operator()(const MfsSource& s) const { return s.alpha / (s.alpha + s.beta); }
        double operator()(const MmpsSource& s) const { return s.alpha / (s.alpha + s.beta); }
    };
    return std::visit(Visitor{}, m);
}

/// Long-run average arrival rate lambda_on * P_ON.
inline double mean_rate(const SourceModel& m) {
    const double lam = std::visit([](const auto& s) { return s.lambda_on; }, m);
    return lam * steady_state_on(m);
}

namespace detail {

/// Largest eigenvalue of the tilted fluid generator,
///   Lambda(x) = [x - (alpha+beta) + sqrt((x - (alpha+beta))^2 + 4*alpha*x)] / 2,
/// for tilt x >= 0. The conjugate form below x = alpha+beta and a scaled
/// square root for huge x keep every branch free of cancellation/overflow.
inline double tilted_fluid_eigenvalue(double x, double alpha, double beta) {
    const double ab = alpha + beta;
    if (x <= 0.0) return 0.0;
    if (x < ab) {
        const double s = std::sqrt((ab - x) * (ab - x) + 4.0 * alpha * x);
        return 2.0 * alpha * x / ((ab - x) + s);
    }
    const double s = x > 1e150 ? x * std::sqrt((1.0 - ab / x) * (1.0 - ab / x) + 4.0 * alpha / x)
                               : std::sqrt((x - ab) * (x - ab) + 4.0 * alpha * x);
    return 0.5 * (x - ab + s);
}

/// log of the Perron root of P * diag(1, e^{theta*lambda}) for the discrete
/// chain, i.e. theta * a(theta). Rearranged around (root - 1) so that tiny
/// tilts keep full precision, with a log-domain branch once e^{theta*lambda}
/// would overflow.
inline double dtms_log_perron(double p11, double p22, double lambda, double theta) {
    const double x = theta * lambda;
    if (x == 0.0) return 0.0;
    if (x > 700.0) {
        const double einv = std::exp(-x);  // underflow to 0 is harmless
        const double h = p11 * einv + p22;
        const double disc = std::max(h * h - 4.0 * (p11 + p22 - 1.0) * einv, 0.0);
        return x + std::log(0.5 * (h + std::sqrt(disc)));
    }
    const double em = std::expm1(x);
    const double d = (1.0 - p11) + (1.0 - p22);  // > 0: both-absorbing chains are rejected
    const double c1 = 4.0 * p22 - 2.0 * d * p22 - 4.0 + 4.0 * d;
    const double u = em * (c1 + p22 * p22 * em);
    const double s = std::sqrt(std::max(d * d + u, 0.0));
    const double root_minus_1 = 0.5 * (p22 * em + u / (d + s));
    return std::log1p(root_minus_1);
}

}  // namespace detail

/// Effective bandwidth a(theta): the minimum constant service rate that
/// supports the source under the tail-decay exponent theta. Closed forms:
///   DTMS: log-Perron root of the tilted transition matrix, divided by theta;
///   MFS:  fluid eigenvalue at tilt theta*lambda, divided by theta;
///   MMPS: fluid eigenvalue at tilt (e^theta - 1)*lambda, divided by theta.
/// Values are per block of unit duration. The MMPS bandwidth is unbounded in
/// theta and reports +inf once e^theta overflows a double.
inline double effective_bandwidth(const SourceModel& m, QosExponent q) {
    validate(m);
    validate(q);
    const double th = q.theta;
    struct Visitor {
        double th;
        double operator()(const DtmsSource& s) const {
            return detail::dtms_log_perron(s.p11, s.p22, s.lambda_on, th) / th;
        }
        double operator()(const MfsSource& s) const {
            return detail::tilted_fluid_eigenvalue(th * s.lambda_on, s.alpha, s.beta) / th;
        }
        double operator()(const MmpsSource& s) const {
            const double tilt = std::expm1(th) * s.lambda_on;
            if (!std::isfinite(tilt))
                return s.lambda_on > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
            return detail::tilted_fluid_eigenvalue(tilt, s.alpha, s.beta) / th;
        }
    };
    return std::visit(Visitor{th}, m);
}

/// DTMS built from the single burstiness parameter.
inline DtmsSource dtms_from_burstiness(BurstinessParam b, double lambda_on) {
    validate(b);
    return DtmsSource{1.0 - b.s, b.s, lambda_on};
}

}  // namespace qprov

#endif  // QPROV_MARKOV_SOURCES_HPP
