#ifndef QPROV_EFFECTIVE_CAPACITY_HPP
#define QPROV_EFFECTIVE_CAPACITY_HPP

#include <cmath>

#include "common.hpp"
#include "markov_channel.hpp"

namespace qprov {

/// Decay exponent theta (1/bits) of the buffer/delay tail. Strictly positive;
/// the theta -> 0 limit is served by capacity_upper_bound, never by theta = 0.
struct QosExponent {
    double theta = 1.0;
};

inline void validate(QosExponent q) {
    if (!is_finite_positive(q.theta)) throw invalid_parameter("theta must be > 0");
}

struct EffectiveCapacityResult {
    double value;        // bits/block supportable under the exponent guarantee
    double xi;           // sqrt((theta*R + kappa)^2 - 4*nu*theta*R)
    double upper_bound;  // R * exp(-psi), the mean service rate
};

/// Effective capacity of the fixed-rate ON/OFF service chain,
///   C_E = (1/2theta) * [theta*R + kappa - xi].
/// Evaluated through the subtraction-free equivalent 2*nu*R/(theta*R+kappa+xi)
/// so the small-theta regime keeps full precision, and with the discriminant
/// rearranged as (theta*R - kappa)^2 + 4*theta*R*mu, which cannot cancel.
inline EffectiveCapacityResult effective_capacity(const ChannelSpec& spec, QosExponent q) {
    validate(q);
    const OnOffChain chain = derive_chain(spec);
    const double tr = q.theta * spec.rate;
    const double k = spec.kappa;
    const double xi = std::sqrt((tr - k) * (tr - k) + 4.0 * tr * chain.mu);
    const double upper = spec.rate * chain.p_on;
    double value = 2.0 * chain.nu * spec.rate / (tr + k + xi);
    // the algebra guarantees value <= upper; keep rounding from breaking it
    value = std::min(value, upper);
    return {value, xi, upper};
}

/// Fast-mixing limit of the effective capacity: lim_{kappa->inf} C_E = R*exp(-psi).
/// Also the mean service rate of the ON/OFF process, hence an upper bound for
/// every kappa and theta.
inline double capacity_upper_bound(const ChannelSpec& spec) {
    const OnOffChain chain = derive_chain(spec);
    return spec.rate * chain.p_on;
}

/// Slow-mixing limit: lim_{kappa->0} C_E = 0 for any positive exponent.
inline double capacity_lower_limit(const ChannelSpec& spec, QosExponent q) {
    validate(spec);
    validate(q);
    return 0.0;
}

/// Analytic dC_E/dR at fixed (gamma, kappa, theta); the rate dependence enters
/// both directly and through nu(R) = kappa * exp(-(2^R - 1)/gamma).
inline double effective_capacity_rate_derivative(const ChannelSpec& spec, QosExponent q) {
    validate(q);
    const OnOffChain chain = derive_chain(spec);
    const double th = q.theta;
    const double tr = th * spec.rate;
    const double k = spec.kappa;
    const double xi = std::sqrt((tr - k) * (tr - k) + 4.0 * tr * chain.mu);
    const double dnu = -chain.nu * ln2 * std::exp2(spec.rate) / spec.gamma;
    const double dxi = th * ((tr + k) - 2.0 * (chain.nu + dnu * spec.rate)) / xi;
    return (th - dxi) / (2.0 * th);
}

}  // namespace qprov

#endif  // QPROV_EFFECTIVE_CAPACITY_HPP
