#ifndef QPROV_QOS_ANALYSIS_HPP
#define QPROV_QOS_ANALYSIS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "common.hpp"
#include "effective_capacity.hpp"
#include "markov_sources.hpp"
#include "rate_matching.hpp"
#include "rate_optimizer.hpp"

namespace qprov {

/// Inputs of the delay-tail model Pr{D >= d} ~ zeta * exp(-theta * a(theta) * d):
/// zeta is the non-empty-buffer probability (1 is the conservative default),
/// bandwidth is the arrival's effective bandwidth at theta. At a matched
/// operating point bandwidth equals the effective capacity.
struct DelayModel {
    double zeta = 1.0;
    QosExponent theta{1.0};
    double bandwidth = 0.0;
};

inline void validate(const DelayModel& m) {
    if (!is_probability(m.zeta)) throw invalid_parameter("delay: zeta must be in [0,1]");
    validate(m.theta);
    if (!is_finite_nonneg(m.bandwidth)) throw invalid_parameter("delay: bandwidth must be >= 0");
}

/// Delay-violation probability min(1, zeta * exp(-theta * a * d)).
inline double delay_violation(const DelayModel& m, double d) {
    validate(m);
    if (!is_finite_nonneg(d)) throw invalid_parameter("delay threshold must be >= 0");
    return std::min(1.0, m.zeta * std::exp(-m.theta.theta * m.bandwidth * d));
}

/// Smallest exponent theta with zeta * exp(-theta * C_E(theta) * d) <= epsilon,
/// found by bisection on [1e-8, 1e4]. theta * C_E(theta) saturates (it never
/// exceeds the OFF->ON rate nu), so tight targets can be unreachable: that is
/// reported as infeasible rather than returned as the bracket edge.
inline QosExponent required_theta(const ChannelSpec& spec, double d, double epsilon,
                                  double zeta = 1.0) {
    validate(spec);
    if (!is_finite_positive(d)) throw invalid_parameter("required_theta: d must be > 0");
    if (!(epsilon > 0.0 && epsilon <= zeta && zeta <= 1.0))
        throw invalid_parameter("required_theta: need 0 < epsilon <= zeta <= 1");
    const double lo = 1e-8, hi = 1e4;
    auto g = [&](double th) {
        // decreasing in theta; root is where the model meets epsilon
        return zeta * std::exp(-th * effective_capacity(spec, {th}).value * d) - epsilon;
    };
    if (g(lo) <= 0.0) return {lo};
    if (g(hi) > 0.0)
        throw infeasible("required_theta: target epsilon unreachable for this channel and d");
    auto increasing = [&](double th) { return -g(th); };
    double a = lo, b = hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = std::sqrt(a * b);  // bisect in log(theta)
        (increasing(mid) < 0.0 ? a : b) = mid;
        if (b - a <= 1e-8 * a) break;
    }
    return {0.5 * (a + b)};
}

/// Exponent theta* at which the source's effective bandwidth meets the
/// channel's effective capacity, a(theta*) = C_E(theta*): the operating
/// exponent of the queue formed by this arrival/service pair.
inline double operating_exponent(const ChannelSpec& spec, const SourceModel& source) {
    validate(spec);
    validate(source);
    const double mean = mean_rate(source);
    const double cap = capacity_upper_bound(spec);
    if (mean >= cap)
        throw infeasible("operating_exponent: mean arrival rate at or above mean service rate");
    auto h = [&](double th) {
        const double a = effective_bandwidth(source, {th});
        return a - effective_capacity(spec, {th}).value;  // increasing in theta
    };
    double lo = 1e-9;
    if (h(lo) >= 0.0) return lo;
    double hi = 1.0;
    int grow = 0;
    while (h(hi) < 0.0 && grow++ < 60) hi *= 2.0;
    if (h(hi) < 0.0)
        throw bracket_failure("operating_exponent: no crossing found", lo, hi, h(lo), h(hi));
    double a = lo, b = hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = std::sqrt(a * b);
        (h(mid) < 0.0 ? a : b) = mid;
        if (b - a <= 1e-10 * a) break;
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Reliability-latency tradeoff tables
// ---------------------------------------------------------------------------

/// Column-labelled numeric table handed to the CLI serializers.
struct SweepTable {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> warnings;
};

enum class TradeoffSweep { gamma, theta, p_on };

/// Configuration of one tradeoff sweep. rate = NaN means "optimize the rate"
/// (at theta for the gamma sweep, per point for the theta sweep, at theta_ref
/// for the p_on sweep); a finite rate fixes it. The p_on sweep holds the
/// average arrival rate fixed and solves for each family's operating exponent.
struct TradeoffConfig {
    TradeoffSweep sweep = TradeoffSweep::gamma;
    std::vector<double> grid;
    double gamma = 10.0;
    double kappa = 50.0;
    double theta = 1.0;
    double rate = std::numeric_limits<double>::quiet_NaN();
    double d = 5.0;
    double zeta = 1.0;
    double lambda_avg = 1.0;   // p_on sweep only
    double theta_ref = 0.01;   // p_on sweep only: exponent used to choose the rate
    double rate_sum = 10.0;    // p_on sweep only: alpha + beta of the fluid/Poisson chains
};

namespace detail {

inline double pick_rate(const TradeoffConfig& cfg, double gamma, double theta) {
    if (std::isfinite(cfg.rate)) return cfg.rate;
    return optimize_rate(gamma, cfg.kappa, {theta}).r_star;
}

}  // namespace detail

/// Delay-violation probability along a gamma, theta or P_ON grid; see
/// TradeoffConfig. Tables are checked for the expected monotone shape and
/// violations are recorded in `warnings` (they are empirical observations,
/// not theorems).
inline SweepTable tradeoff_curve(const TradeoffConfig& cfg) {
    if (cfg.grid.empty()) throw invalid_parameter("tradeoff: empty grid");
    if (!std::is_sorted(cfg.grid.begin(), cfg.grid.end()))
        throw invalid_parameter("tradeoff: grid must be ascending");
    if (!is_finite_nonneg(cfg.d)) throw invalid_parameter("tradeoff: d must be >= 0");
    SweepTable t;
    t.params = {{"kappa", std::to_string(cfg.kappa)},
                {"d", std::to_string(cfg.d)},
                {"zeta", std::to_string(cfg.zeta)}};

    switch (cfg.sweep) {
        case TradeoffSweep::gamma: {
            t.experiment = "tradeoff_gamma";
            t.columns = {"gamma", "theta", "rate", "kappa", "c_e", "exponent", "d", "violation"};
            for (double g : cfg.grid) {
                if (!(g > 0.0)) throw invalid_parameter("tradeoff: gamma grid must be positive");
                const double r = detail::pick_rate(cfg, g, cfg.theta);
                const double ce = effective_capacity({g, r, cfg.kappa}, {cfg.theta}).value;
                const double v = delay_violation({cfg.zeta, {cfg.theta}, ce}, cfg.d);
                t.rows.push_back({g, cfg.theta, r, cfg.kappa, ce, cfg.theta * ce, cfg.d, v});
            }
            for (size_t i = 1; i < t.rows.size(); ++i)
                if (t.rows[i][7] > t.rows[i - 1][7] * (1.0 + 1e-12))
                    t.warnings.push_back("violation not nonincreasing in gamma at index " +
                                         std::to_string(i));
            break;
        }
        case TradeoffSweep::theta: {
            t.experiment = "tradeoff_theta";
            t.columns = {"theta", "gamma", "rate", "kappa", "c_e", "exponent", "d", "violation"};
            for (double th : cfg.grid) {
                if (!(th > 0.0)) throw invalid_parameter("tradeoff: theta grid must be positive");
                const double r = detail::pick_rate(cfg, cfg.gamma, th);
                const double ce = effective_capacity({cfg.gamma, r, cfg.kappa}, {th}).value;
                const double v = delay_violation({cfg.zeta, {th}, ce}, cfg.d);
                t.rows.push_back({th, cfg.gamma, r, cfg.kappa, ce, th * ce, cfg.d, v});
            }
            for (size_t i = 1; i < t.rows.size(); ++i)
                if (t.rows[i][7] > t.rows[i - 1][7] * (1.0 + 1e-12))
                    t.warnings.push_back("violation not nonincreasing in theta at index " +
                                         std::to_string(i));
            break;
        }
        case TradeoffSweep::p_on: {
            t.experiment = "tradeoff_p_on";
            t.columns = {"p_on",         "gamma",        "rate",          "kappa",
                         "lambda_avg",   "d",            "theta_op_dtms", "violation_dtms",
                         "theta_op_mfs", "violation_mfs", "theta_op_mmps", "violation_mmps"};
            const double r = detail::pick_rate(cfg, cfg.gamma, cfg.theta_ref);
            const ChannelSpec ch{cfg.gamma, r, cfg.kappa};
            for (double p : cfg.grid) {
                if (!(p > 0.0 && p <= 1.0))
                    throw invalid_parameter("tradeoff: p_on grid must be in (0,1]");
                const double lam_on = cfg.lambda_avg / p;
                const double alpha = cfg.rate_sum * p;
                const double beta = cfg.rate_sum - alpha;
                std::vector<double> row{p, cfg.gamma, r, cfg.kappa, cfg.lambda_avg, cfg.d};
                const SourceModel sources[3] = {
                    SourceModel{DtmsSource{1.0 - p, p, lam_on}},
                    SourceModel{MfsSource{alpha, beta, lam_on}},
                    SourceModel{MmpsSource{alpha, beta, lam_on}},
                };
                for (const auto& src : sources) {
                    const double th_op = operating_exponent(ch, src);
                    const double a_op = effective_bandwidth(src, {th_op});
                    row.push_back(th_op);
                    row.push_back(delay_violation({cfg.zeta, {th_op}, a_op}, cfg.d));
                }
                t.rows.push_back(row);
            }
            // burstier (smaller p_on) should never be more reliable
            for (size_t i = 1; i < t.rows.size(); ++i)
                for (int c : {7, 9, 11})
                    if (t.rows[i][c] > t.rows[i - 1][c] * (1.0 + 1e-9))
                        t.warnings.push_back("violation increases with p_on at index " +
                                             std::to_string(i) + " column " + t.columns[c]);
            break;
        }
    }
    return t;
}

}  // namespace qprov

#endif  // QPROV_QOS_ANALYSIS_HPP
