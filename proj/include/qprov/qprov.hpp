#ifndef QPROV_QPROV_HPP
#define QPROV_QPROV_HPP

// Statistical QoS provisioning for fixed-rate transmission over a two-state
// Markov fading channel fed by Markovian traffic: effective capacity and its
// memory-rate bounds, effective bandwidths of DTMS/MFS/MMPS sources, matched
// maximum arrival rates, the throughput-optimal fixed rate, delay-violation
// models and a Monte Carlo queue simulator that validates all of it.

#include "common.hpp"
#include "effective_capacity.hpp"
#include "experiments.hpp"
#include "markov_channel.hpp"
#include "markov_sources.hpp"
#include "qos_analysis.hpp"
#include "queue_sim.hpp"
#include "rate_matching.hpp"
#include "rate_optimizer.hpp"

#endif  // QPROV_QPROV_HPP
