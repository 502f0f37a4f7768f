#ifndef QPROV_MARKOV_CHANNEL_HPP
#define QPROV_MARKOV_CHANNEL_HPP

#include <cmath>

#include "common.hpp"

namespace qprov {

/// Operating point of a fixed-rate link over a Rayleigh block-fading channel:
/// average SNR gamma (linear), transmission rate (bits per block of unit
/// duration) and channel-memory decay rate kappa (1/block). Large kappa means
/// a fast-mixing, effectively memoryless channel at block resolution.
struct ChannelSpec {
    double gamma = 10.0;
    double rate = 3.0;
    double kappa = 50.0;
};

inline void validate(const ChannelSpec& spec) {
    if (!is_finite_positive(spec.gamma)) throw invalid_parameter("channel: gamma must be > 0");
    if (!is_finite_nonneg(spec.rate)) throw invalid_parameter("channel: rate must be >= 0");
    if (!is_finite_positive(spec.kappa)) throw invalid_parameter("channel: kappa must be > 0");
}

/// Two-state continuous-time service chain. The link is ON when the channel
/// power gain exceeds psi, i.e. when the instantaneous capacity exceeds the
/// fixed rate; nu and mu are the OFF->ON and ON->OFF transition rates and sum
/// to the memory decay rate kappa.
struct OnOffChain {
    double nu;    // OFF -> ON rate
    double mu;    // ON -> OFF rate
    double p_on;  // stationary ON probability, nu / (nu + mu)
    double psi;   // outage threshold on the exponential power gain

    double kappa() const { return nu + mu; }
};

/// Maps (gamma, rate, kappa) to the ON/OFF service chain:
/// psi = (2^rate - 1)/gamma, p_on = exp(-psi), nu = kappa*p_on, mu = kappa - nu.
inline OnOffChain derive_chain(const ChannelSpec& spec) {
    validate(spec);
    const double psi = std::expm1(spec.rate * ln2) / spec.gamma;
    const double p_on = std::exp(-psi);
    const double nu = spec.kappa * p_on;
    const double mu = -spec.kappa * std::expm1(-psi);  // kappa * (1 - p_on)
    return OnOffChain{nu, mu, p_on, psi};
}

/// Shannon capacity log2(1 + gamma*z) of one block with power gain z.
inline double instantaneous_capacity(double gamma, double z) {
    if (!is_finite_positive(gamma)) throw invalid_parameter("gamma must be > 0");
    if (!is_finite_nonneg(z)) throw invalid_parameter("gain must be >= 0");
    return std::log1p(gamma * z) / ln2;
}

/// ON means the fixed rate is decodable; a block at exactly rate == capacity
/// is an outage (OFF).
inline bool is_on(const ChannelSpec& spec, double z) {
    return instantaneous_capacity(spec.gamma, z) > spec.rate;
}

/// Per-block transition probabilities of the chain sampled every
/// block_duration time units. State order is {OFF, ON}; rows are "from".
struct BlockKernel {
    double p[2][2];
    double block_duration;

    double stationary_on() const { return p[0][1] / (p[0][1] + p[1][0]); }

    /// Next state given a uniform draw u in [0,1).
    bool step(bool on, double u) const { return u < p[on ? 1 : 0][1]; }
};

/// Exact matrix exponential of the two-state generator over duration T:
/// p(x -> ON) = p_on + (1{x=ON} - p_on) * exp(-kappa*T).
inline BlockKernel discretize(const OnOffChain& chain, double T) {
    if (!is_finite_positive(T)) throw invalid_parameter("block duration must be > 0");
    const double decay = std::exp(-chain.kappa() * T);
    const double off_on = chain.p_on * (1.0 - decay);
    const double on_on = chain.p_on + (1.0 - chain.p_on) * decay;
    BlockKernel k{};
    k.block_duration = T;
    k.p[0][1] = off_on;
    k.p[0][0] = 1.0 - off_on;
    k.p[1][1] = on_on;
    k.p[1][0] = 1.0 - on_on;
    return k;
}

}  // namespace qprov

#endif  // QPROV_MARKOV_CHANNEL_HPP
