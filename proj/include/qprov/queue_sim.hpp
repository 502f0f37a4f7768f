#ifndef QPROV_QUEUE_SIM_HPP
#define QPROV_QUEUE_SIM_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "common.hpp"
#include "effective_capacity.hpp"
#include "markov_channel.hpp"
#include "markov_sources.hpp"

namespace qprov {
namespace detail {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(seed ^ splitmix64(stream + 0x51ed2700u)));
}

/// Uniform in [0,1), 53-bit, identical on every platform.
inline double u01(Rng& g) { return double(g() >> 11) * 0x1.0p-53; }

/// Exponential holding time with the given rate; draws in (0, inf).
inline double exp_draw(Rng& g, double rate) { return -std::log1p(-u01(g)) / rate; }

/// Poisson count by inversion of exponential gaps, split into chunks so the
/// running product never underflows. Exact for any mean >= 0.
inline long poisson_draw(Rng& g, double mean) {
    long n = 0;
    while (mean > 30.0) {
        double p = 1.0;
        const double limit = std::exp(-30.0);
        long k = -1;
        do { p *= 1.0 - u01(g); ++k; } while (p > limit);
        n += k;
        mean -= 30.0;
    }
    const double limit = std::exp(-mean);
    double p = 1.0;
    long k = -1;
    do { p *= 1.0 - u01(g); ++k; } while (p > limit);
    return n + k;
}

/// Exact trajectory of a two-state continuous-time chain: advances `on`
/// across a window of the given duration by sampling exponential holding
/// times, and returns the time spent ON within the window.
struct CtmcOccupancy {
    double rate_off_on;
    double rate_on_off;

    double advance(bool& on, double duration, Rng& g) const {
        double remaining = duration;
        double on_time = 0.0;
        for (;;) {
            const double rate = on ? rate_on_off : rate_off_on;
            if (!(rate > 0.0)) {  // absorbing state
                if (on) on_time += remaining;
                return on_time;
            }
            const double hold = exp_draw(g, rate);
            if (hold >= remaining) {
                if (on) on_time += remaining;
                return on_time;
            }
            if (on) on_time += hold;
            remaining -= hold;
            on = !on;
        }
    }
};

// ---------------------------------------------------------------------------
// Per-block increment processes. Service integrates the ON occupancy of the
// channel chain within each block (the service the continuous-time model
// actually delivers); fluid arrivals integrate the source occupancy the same
// way, and Poisson arrivals are drawn conditionally on it. Sampling the state
// only at block boundaries would bias every slow-mixing (kappa*T near 1)
// configuration against the closed forms.
// ---------------------------------------------------------------------------

struct ChannelServiceProcess {
    CtmcOccupancy ctmc;  // {nu, mu}
    double p_on;
    double rate_bits;   // bits per unit time
    double duration;    // block duration T
    bool on = false;
    double on_time_total = 0.0;

    void init(Rng& g) { on = u01(g) < p_on; }
    double step(Rng& g) {
        const double occ = ctmc.advance(on, duration, g);
        on_time_total += occ;
        return rate_bits * occ;
    }
};

struct DtmsArrivalProcess {
    double p11, p22, lambda;
    double p_on;
    bool on = false;
    double on_time_total = 0.0;

    void init(Rng& g) { on = u01(g) < p_on; }
    double step(Rng& g) {
        on = u01(g) < (on ? p22 : 1.0 - p11);
        if (on) on_time_total += 1.0;
        return on ? lambda : 0.0;
    }
};

struct FluidArrivalProcess {
    CtmcOccupancy ctmc;  // {alpha, beta}
    double p_on;
    double lambda;  // bits per unit time while ON
    double duration;
    bool on = false;
    double on_time_total = 0.0;

    void init(Rng& g) { on = u01(g) < p_on; }
    double step(Rng& g) {
        const double occ = ctmc.advance(on, duration, g);
        on_time_total += occ;
        return lambda * occ;
    }
};

struct PoissonArrivalProcess {
    CtmcOccupancy ctmc;  // {alpha, beta}
    double p_on;
    double lambda;  // intensity per unit time while ON
    double duration;
    bool on = false;
    double on_time_total = 0.0;

    void init(Rng& g) { on = u01(g) < p_on; }
    double step(Rng& g) {
        const double occ = ctmc.advance(on, duration, g);
        on_time_total += occ;
        return occ > 0.0 ? double(poisson_draw(g, lambda * occ)) : 0.0;
    }
};

inline ChannelServiceProcess make_service_process(const ChannelSpec& spec, double T) {
    const OnOffChain chain = derive_chain(spec);
    return ChannelServiceProcess{{chain.nu, chain.mu}, chain.p_on, spec.rate, T};
}

// ---------------------------------------------------------------------------
// FIFO virtual-delay bookkeeping: a batch arriving in block k waits until the
// cumulative service clears the workload it found on arrival (its virtual
// waiting time; the batch's own bits are not part of that workload). Targets
// are nondecreasing, so a single two-pointer pass resolves every batch.
// ---------------------------------------------------------------------------

struct DelayTracker {
    struct Batch {
        double target;
        double bits;
        long block;
    };
    std::deque<Batch> pending;
    std::vector<double> bits_by_delay;  // index = delay in blocks
    double recorded_bits = 0.0;
    long max_tracked = 200000;

    void on_arrival(double target, double bits, long block, bool record) {
        if (record && bits > 0.0) pending.push_back({target, bits, block});
    }
    void on_service(double cum_service, long block) {
        const double slack = 1e-9 * std::max(1.0, cum_service);
        while (!pending.empty() && pending.front().target <= cum_service + slack) {
            const long d = block - pending.front().block;
            if (d >= 0 && d < max_tracked) {
                if (std::size_t(d) >= bits_by_delay.size()) bits_by_delay.resize(d + 1, 0.0);
                bits_by_delay[std::size_t(d)] += pending.front().bits;
                recorded_bits += pending.front().bits;
            }
            pending.pop_front();
        }
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Monte Carlo estimators of the tilted-rate definitions
//   a(theta)  =  (1/theta t) log E[exp(+theta A(t))]
//   C_E(theta) = -(1/theta t) log E[exp(-theta S(t))]
// via an interacting particle population: every block each path multiplies its
// weight by the per-block tilt, the population periodically resamples paths in
// proportion to weight, and the products of per-block mean weights telescope
// into the log-expectation. A plain average of exp(+-theta X(t)) has relative
// variance growing like exp(c*t) and is useless at the horizons of interest;
// the population estimator keeps it linear in t. The first half of the horizon
// is treated as warmup: differencing the log-partition across [t/2, t] removes
// the O(1) transient so the estimate targets the t -> infinity limit itself.
// All weight handling is in log domain.
// ---------------------------------------------------------------------------

struct EstimateResult {
    double value;
    double std_error;      // across independent particle groups
    double ci_halfwidth;   // 1.96 * std_error
    int groups;
    long long paths_per_group;
    bool tilt_guard;  // theta * peak-rate * horizon exceeded exp() range per path
};

namespace detail {

template <class Process>
double tilted_group_rate(const Process& proto, double sign, double theta, long t, long n,
                         Rng& rng) {
    std::vector<Process> parts(std::size_t(n), proto);
    std::vector<Process> scratch;
    scratch.reserve(parts.size());
    for (auto& p : parts) p.init(rng);
    std::vector<double> logw(parts.size(), 0.0);
    std::vector<double> w(parts.size());
    double log_scale = 0.0;
    const long t0 = t / 2;

    auto log_mean_weight = [&]() {
        double m = logw[0];
        for (double v : logw) m = std::max(m, v);
        double s = 0.0;
        for (double v : logw) s += std::exp(v - m);
        return log_scale + m + std::log(s / double(n));
    };

    double l0 = 0.0;
    for (long k = 1; k <= t; ++k) {
        for (auto i = std::size_t(0); i < parts.size(); ++i)
            logw[i] += sign * theta * parts[i].step(rng);
        if (k == t0) l0 = log_mean_weight();
        if (k == t) break;

        double m = logw[0];
        for (double v : logw) m = std::max(m, v);
        double s1 = 0.0, s2 = 0.0;
        for (auto i = std::size_t(0); i < parts.size(); ++i) {
            w[i] = std::exp(logw[i] - m);
            s1 += w[i];
            s2 += w[i] * w[i];
        }
        if (s1 * s1 / s2 < 0.5 * double(n)) {
            // systematic resampling
            log_scale += m + std::log(s1 / double(n));
            scratch.clear();
            const double step_w = s1 / double(n);
            double cum = w[0];
            std::size_t idx = 0;
            double pos = u01(rng) * step_w;
            for (long j = 0; j < n; ++j) {
                while (cum < pos && idx + 1 < parts.size()) cum += w[++idx];
                scratch.push_back(parts[idx]);
                pos += step_w;
            }
            parts.swap(scratch);
            std::fill(logw.begin(), logw.end(), 0.0);
        }
    }
    const double l1 = log_mean_weight();
    return sign * (l1 - l0) / (theta * double(t - t0));
}

template <class Process>
EstimateResult tilted_rate_estimate(const Process& proto, double sign, double theta, long blocks,
                                    long replicas, std::uint64_t seed, bool tilt_guard) {
    if (blocks < 4) throw invalid_parameter("estimator: need at least 4 blocks");
    if (replicas < 8) throw invalid_parameter("estimator: need at least 8 paths");
    const int groups = replicas >= 40000 ? 20 : int(std::max<long>(4, replicas / 2000));
    const long n = replicas / groups;
    std::vector<double> rates(groups);
    for (int g = 0; g < groups; ++g) {
        Rng rng = make_rng(seed, std::uint64_t(g) + 1);
        rates[g] = tilted_group_rate(proto, sign, theta, blocks, n, rng);
    }
    double mean = 0.0;
    for (double r : rates) mean += r;
    mean /= groups;
    double var = 0.0;
    for (double r : rates) var += (r - mean) * (r - mean);
    var /= (groups - 1);
    const double se = std::sqrt(var / groups);
    return {mean, se, 1.96 * se, groups, n, tilt_guard};
}

}  // namespace detail

/// Monte Carlo estimate of the effective capacity at theta from sampled
/// channel trajectories over `blocks` blocks (unit duration each); `replicas`
/// is the total particle-path budget, split into independent groups for the
/// standard error. Horizons of 200 blocks or more give stable estimates.
inline EstimateResult estimate_effective_capacity(const ChannelSpec& spec, QosExponent q,
                                                  long blocks, long replicas,
                                                  std::uint64_t seed) {
    validate(spec);
    validate(q);
    const auto proto = detail::make_service_process(spec, 1.0);
    const bool guard = q.theta * spec.rate * double(blocks) > 700.0;
    return detail::tilted_rate_estimate(proto, -1.0, q.theta, blocks, replicas, seed, guard);
}

/// Mirror estimator for the effective bandwidth of a source model.
inline EstimateResult estimate_effective_bandwidth(const SourceModel& source, QosExponent q,
                                                   long blocks, long replicas,
                                                   std::uint64_t seed) {
    validate(source);
    validate(q);
    const double lam = std::visit([](const auto& s) { return s.lambda_on; }, source);
    const bool guard = q.theta * lam * double(blocks) > 700.0;
    struct Visitor {
        QosExponent q;
        long blocks, replicas;
        std::uint64_t seed;
        bool guard;
        EstimateResult operator()(const DtmsSource& s) const {
            const double p_on = (1.0 - s.p11) / ((1.0 - s.p11) + (1.0 - s.p22));
            detail::DtmsArrivalProcess proto{s.p11, s.p22, s.lambda_on, p_on};
            return detail::tilted_rate_estimate(proto, +1.0, q.theta, blocks, replicas, seed,
                                                guard);
        }
        EstimateResult operator()(const MfsSource& s) const {
            detail::FluidArrivalProcess proto{{s.alpha, s.beta}, s.alpha / (s.alpha + s.beta),
                                              s.lambda_on, 1.0};
            return detail::tilted_rate_estimate(proto, +1.0, q.theta, blocks, replicas, seed,
                                                guard);
        }
        EstimateResult operator()(const MmpsSource& s) const {
            detail::PoissonArrivalProcess proto{{s.alpha, s.beta}, s.alpha / (s.alpha + s.beta),
                                                s.lambda_on, 1.0};
            return detail::tilted_rate_estimate(proto, +1.0, q.theta, blocks, replicas, seed,
                                                guard);
        }
    };
    return std::visit(Visitor{q, blocks, replicas, seed, guard}, source);
}

// ---------------------------------------------------------------------------
// Slotted FIFO queue simulation
// ---------------------------------------------------------------------------

struct SimConfig {
    ChannelSpec channel;
    SourceModel source;
    long blocks = 1000000;
    long warmup = 10000;
    int replicas = 20;
    std::uint64_t seed = 1;
    double block_duration = 1.0;
};

inline void validate(const SimConfig& cfg) {
    validate(cfg.channel);
    validate(cfg.source);
    if (cfg.blocks < 1) throw invalid_parameter("sim: blocks must be >= 1");
    if (cfg.warmup < 0 || cfg.warmup >= cfg.blocks)
        throw invalid_parameter("sim: warmup must be in [0, blocks)");
    if (cfg.replicas < 1) throw invalid_parameter("sim: replicas must be >= 1");
    if (!is_finite_positive(cfg.block_duration))
        throw invalid_parameter("sim: block duration must be > 0");
}

struct TailPoint {
    double x;     // threshold (bits for the queue tail, blocks for the delay tail)
    double prob;  // empirical Pr{X >= x} (queue: Pr{Q > x}), averaged over replicas
    double se;    // standard error across replicas
};

struct SimReport {
    double mean_arrival = 0.0;  // bits per block after warmup
    double mean_service = 0.0;
    std::vector<TailPoint> queue_tail;
    std::vector<TailPoint> delay_tail;
    double fitted_decay = std::numeric_limits<double>::quiet_NaN();  // 1/blocks
    double fitted_decay_se = std::numeric_limits<double>::quiet_NaN();
    double zeta_hat = 0.0;  // fraction of blocks with a non-empty buffer
    double ci_halfwidth = std::numeric_limits<double>::quiet_NaN();  // 1.96 * fitted_decay_se
    bool unstable = false;
    double channel_on_fraction = 0.0;  // time-average ON occupancy
    double source_on_fraction = 0.0;
    double recorded_bits = 0.0;
    long censored_batches = 0;
    std::pair<double, double> fit_band{std::numeric_limits<double>::quiet_NaN(),
                                       std::numeric_limits<double>::quiet_NaN()};
};

namespace detail {

struct ReplicaTails {
    std::vector<double> delay_bits;  // bits by integer delay
    double total_bits = 0.0;
    std::vector<double> queue_hist;  // block counts by W bin
    long measured_blocks = 0;
    double arr_sum = 0.0, srv_sum = 0.0;
    long nonempty = 0;
    double ch_on = 0.0, src_on = 0.0;
    long censored = 0;
};

template <class ArrivalProc>
ReplicaTails run_replica(const SimConfig& cfg, ArrivalProc src, ChannelServiceProcess ch,
                         double qbin, Rng rng) {
    ReplicaTails out;
    src.init(rng);
    ch.init(rng);
    DelayTracker delays;
    double w = 0.0, cum_service = 0.0;
    for (long k = 1; k <= cfg.blocks; ++k) {
        const double a = src.step(rng);
        const double s = ch.step(rng);
        const bool measured = k > cfg.warmup;
        delays.on_arrival(cum_service + w, a, k, measured);
        cum_service += s;
        w = std::max(0.0, w + a - s);
        delays.on_service(cum_service, k);
        if (measured) {
            out.arr_sum += a;
            out.srv_sum += s;
            if (w > 0.0) ++out.nonempty;
            const auto bin = std::size_t(std::min(w / qbin, 4095.0));
            if (out.queue_hist.size() <= bin) out.queue_hist.resize(bin + 1, 0.0);
            out.queue_hist[bin] += 1.0;
            ++out.measured_blocks;
        }
    }
    out.censored = long(delays.pending.size());
    out.delay_bits = std::move(delays.bits_by_delay);
    out.total_bits = delays.recorded_bits;
    out.ch_on = ch.on_time_total / (double(cfg.blocks) * cfg.block_duration);
    out.src_on = src.on_time_total / (double(cfg.blocks) * cfg.block_duration);
    return out;
}

inline void mean_se(const std::vector<double>& v, double& mean, double& se) {
    const int n = int(v.size());
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    se = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
}

}  // namespace detail

/// Runs the Lindley recursion Q <- max(0, Q + A - S) over seeded replicas and
/// reports empirical queue/delay tails, the fitted exponential decay rate of
/// the delay tail (least squares on log Pr{D >= d} over the band with at
/// least 30 pooled samples and Pr <= 0.1) and the non-empty-buffer fraction.
/// Identical config and seed reproduce the report exactly. When the mean
/// arrival rate reaches the mean service rate the queue has no steady state
/// and the report is flagged unstable.
inline SimReport simulate(const SimConfig& cfg) {
    validate(cfg);
    const double T = cfg.block_duration;
    const auto service_proto = detail::make_service_process(cfg.channel, T);
    const double lam_on = std::visit([](const auto& s) { return s.lambda_on; }, cfg.source);
    const double qbin = std::max({cfg.channel.rate * T, lam_on, 1e-9}) / 4.0;

    std::vector<detail::ReplicaTails> reps(static_cast<std::size_t>(cfg.replicas));
    for (int r = 0; r < cfg.replicas; ++r) {
        detail::Rng rng = detail::make_rng(cfg.seed, std::uint64_t(r) + 0x100);
        std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, DtmsSource>) {
                    const double p_on = (1.0 - s.p11) / ((1.0 - s.p11) + (1.0 - s.p22));
                    reps[r] = detail::run_replica(
                        cfg, detail::DtmsArrivalProcess{s.p11, s.p22, s.lambda_on, p_on},
                        service_proto, qbin, rng);
                } else if constexpr (std::is_same_v<S, MfsSource>) {
                    reps[r] = detail::run_replica(
                        cfg,
                        detail::FluidArrivalProcess{{s.alpha, s.beta},
                                                    s.alpha / (s.alpha + s.beta), s.lambda_on, T},
                        service_proto, qbin, rng);
                } else {
                    reps[r] = detail::run_replica(
                        cfg,
                        detail::PoissonArrivalProcess{{s.alpha, s.beta},
                                                      s.alpha / (s.alpha + s.beta), s.lambda_on,
                                                      T},
                        service_proto, qbin, rng);
                }
            },
            cfg.source);
    }

    SimReport rep;
    const int R = cfg.replicas;

    std::size_t max_delay = 0, max_qbin = 0;
    for (const auto& t : reps) {
        max_delay = std::max(max_delay, t.delay_bits.size());
        max_qbin = std::max(max_qbin, t.queue_hist.size());
        rep.mean_arrival += t.arr_sum / double(t.measured_blocks) / R;
        rep.mean_service += t.srv_sum / double(t.measured_blocks) / R;
        rep.zeta_hat += double(t.nonempty) / double(t.measured_blocks) / R;
        rep.channel_on_fraction += t.ch_on / R;
        rep.source_on_fraction += t.src_on / R;
        rep.recorded_bits += t.total_bits;
        rep.censored_batches += t.censored;
    }
    rep.unstable = rep.mean_arrival >= rep.mean_service;

    // delay tail: per-replica survival curves, then mean +- SE per threshold
    std::vector<double> pooled_bits_geq(max_delay + 1, 0.0);
    std::vector<std::vector<double>> surv(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) {
        const auto& bits = reps[r].delay_bits;
        surv[r].assign(max_delay + 1, 0.0);
        double acc = 0.0;
        for (std::size_t d = max_delay + 1; d-- > 0;) {
            if (d < bits.size()) acc += bits[d];
            surv[r][d] = reps[r].total_bits > 0.0 ? acc / reps[r].total_bits : 0.0;
            pooled_bits_geq[d] += acc;
        }
    }
    double pooled_total = 0.0;
    for (const auto& t : reps) pooled_total += t.total_bits;

    std::vector<double> fit_x, fit_y;
    std::vector<double> replica_slopes;
    for (std::size_t d = 0; d <= max_delay; ++d) {
        std::vector<double> vals(static_cast<std::size_t>(R));
        for (int r = 0; r < R; ++r) vals[r] = surv[r][d];
        double m, se;
        detail::mean_se(vals, m, se);
        if (m > 0.0) rep.delay_tail.push_back({double(d), m, se});
        const bool in_band = pooled_total > 0.0 && pooled_bits_geq[d] >= 30.0 && m <= 0.1 && m > 0.0;
        if (in_band) {
            fit_x.push_back(double(d));
            fit_y.push_back(std::log(m));
        }
    }
    if (fit_x.size() >= 3) {
        rep.fitted_decay = -fit_line(fit_x, fit_y).slope;
        rep.fit_band = {fit_x.front(), fit_x.back()};
        // spread of per-replica fits over the same band
        for (int r = 0; r < R; ++r) {
            std::vector<double> xs, ys;
            for (std::size_t i = 0; i < fit_x.size(); ++i) {
                const double v = surv[r][std::size_t(fit_x[i])];
                if (v > 0.0) {
                    xs.push_back(fit_x[i]);
                    ys.push_back(std::log(v));
                }
            }
            if (xs.size() >= 3) replica_slopes.push_back(-fit_line(xs, ys).slope);
        }
        if (replica_slopes.size() >= 2) {
            double m, se;
            detail::mean_se(replica_slopes, m, se);
            rep.fitted_decay_se = se;
            rep.ci_halfwidth = 1.96 * se;
        }
    }

    // queue tail: Pr{Q > j*qbin}
    for (std::size_t b = 0; b + 1 <= max_qbin; ++b) {
        std::vector<double> vals(std::size_t(R), 0.0);
        for (int r = 0; r < R; ++r) {
            const auto& h = reps[r].queue_hist;
            double above = 0.0;
            for (std::size_t j = b + 1; j < h.size(); ++j) above += h[j];
            vals[r] = above / double(reps[r].measured_blocks);
        }
        double m, se;
        detail::mean_se(vals, m, se);
        if (m <= 0.0 && b > 0) break;
        rep.queue_tail.push_back({double(b) * qbin, m, se});
        if (rep.queue_tail.size() >= 512) break;
    }
    return rep;
}

}  // namespace qprov

#endif  // QPROV_QUEUE_SIM_HPP
