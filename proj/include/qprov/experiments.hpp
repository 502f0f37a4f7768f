#ifndef QPROV_EXPERIMENTS_HPP
#define QPROV_EXPERIMENTS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "common.hpp"
#include "effective_capacity.hpp"
#include "markov_sources.hpp"
#include "qos_analysis.hpp"
#include "rate_matching.hpp"
#include "rate_optimizer.hpp"

namespace qprov {

// ---------------------------------------------------------------------------
// Parametric experiments behind the `sweep` CLI command. Every row carries the
// inputs alongside the outputs so the emitted files are self-describing.
// Sources are matched on P_ON: the DTMS burstiness parameter is s = P_ON and
// the fluid/Poisson chains use alpha = rate_sum * P_ON, beta = rate_sum - alpha
// (rate_sum defaults to 10).
// ---------------------------------------------------------------------------

namespace detail {

inline void require_grid(bool ok, const char* what) {
    if (!ok) throw invalid_parameter(std::string("sweep: ") + what);
}

struct MatchedSources {
    DtmsSource dtms;
    MfsSource mfs;
    MmpsSource mmps;
};

inline MatchedSources sources_for_p_on(double p_on, double rate_sum) {
    require_grid(p_on > 0.0 && p_on <= 1.0, "p_on must be in (0,1]");
    const double alpha = rate_sum * p_on;
    return {DtmsSource{1.0 - p_on, p_on, 0.0}, MfsSource{alpha, rate_sum - alpha, 0.0},
            MmpsSource{alpha, rate_sum - alpha, 0.0}};
}

}  // namespace detail

struct Fig2Config {
    double theta = 1.0;
    double kappa = 50.0;
    double gamma = 10.0;
    double p_on = 0.5;
    double r_min = 0.1;
    double r_max = 8.0;
    double r_step = 0.05;
    double rate_sum = 10.0;
};

/// Maximum average arrival rate of each source family as a function of the
/// transmission rate. All families peak where C_E(R) peaks.
inline SweepTable fig2_rate_sweep(const Fig2Config& cfg = {}) {
    detail::require_grid(cfg.r_step > 0.0 && cfg.r_max >= cfg.r_min, "bad rate range");
    SweepTable t;
    t.experiment = "fig2_rate_sweep";
    t.columns = {"rate_bits_per_block", "gamma_linear",        "theta_per_bit",
                 "kappa_per_block",     "p_on_source",         "c_e_bits_per_block",
                 "lambda_avg_dtms",     "lambda_avg_mfs",      "lambda_avg_mmps"};
    t.params = {{"theta", std::to_string(cfg.theta)}, {"kappa", std::to_string(cfg.kappa)},
                {"gamma", std::to_string(cfg.gamma)}, {"p_on", std::to_string(cfg.p_on)}};
    const auto src = detail::sources_for_p_on(cfg.p_on, cfg.rate_sum);
    const QosExponent q{cfg.theta};
    for (double r = cfg.r_min; r <= cfg.r_max + 1e-12; r += cfg.r_step) {
        const double ce = effective_capacity({cfg.gamma, r, cfg.kappa}, q).value;
        const double dt = max_arrival_dtms(src.dtms.p11, src.dtms.p22, ce, q).lambda_avg_star;
        const double mf = max_arrival_mfs(src.mfs.alpha, src.mfs.beta, ce, q).lambda_avg_star;
        const double mm = max_arrival_mmps(src.mmps.alpha, src.mmps.beta, ce, q).lambda_avg_star;
        t.rows.push_back({r, cfg.gamma, cfg.theta, cfg.kappa, cfg.p_on, ce, dt, mf, mm});
    }
    return t;
}

struct Fig3Config {
    double rate = 3.0;
    std::vector<double> gammas{1.0, 10.0};
    std::vector<double> thetas{0.1, 1.0};
    double kappa_min = 0.1;
    double kappa_max = 1e4;
    int points = 50;
};

/// Effective capacity against the channel-memory decay rate; every curve is
/// nondecreasing in kappa and saturates at R * exp(-psi).
inline SweepTable fig3_kappa_sweep(const Fig3Config& cfg = {}) {
    detail::require_grid(!cfg.gammas.empty() && !cfg.thetas.empty(), "empty grid");
    detail::require_grid(cfg.points >= 2 && cfg.kappa_max > cfg.kappa_min && cfg.kappa_min > 0,
                         "bad kappa range");
    SweepTable t;
    t.experiment = "fig3_kappa_sweep";
    t.columns = {"kappa_per_block", "gamma_linear", "theta_per_bit", "rate_bits_per_block",
                 "c_e_bits_per_block", "saturation_bound"};
    t.params = {{"rate", std::to_string(cfg.rate)}};
    for (double g : cfg.gammas)
        for (double th : cfg.thetas)
            for (double k : logspace(cfg.kappa_min, cfg.kappa_max, cfg.points)) {
                const ChannelSpec spec{g, cfg.rate, k};
                t.rows.push_back({k, g, th, cfg.rate, effective_capacity(spec, {th}).value,
                                  capacity_upper_bound(spec)});
            }
    return t;
}

struct Fig4Config {
    std::vector<double> p_ons{0.1, 0.5, 0.9};
    double theta = 1.0;
    double kappa = 50.0;
    double gamma_min = 1.0;
    double gamma_max = 100.0;
    int points = 41;
    double rate = std::numeric_limits<double>::quiet_NaN();  // NaN: optimize per point
    double rate_sum = 10.0;
};

/// Maximum average arrival rate against SNR for the three families at several
/// source duty cycles; the transmission rate is optimized per point unless
/// fixed in the config.
inline SweepTable fig4_gamma_sweep(const Fig4Config& cfg = {}) {
    detail::require_grid(!cfg.p_ons.empty(), "empty p_on grid");
    detail::require_grid(cfg.points >= 2 && cfg.gamma_max > cfg.gamma_min && cfg.gamma_min > 0,
                         "bad gamma range");
    SweepTable t;
    t.experiment = "fig4_gamma_sweep";
    t.columns = {"gamma_linear",       "gamma_db",        "p_on_source",  "theta_per_bit",
                 "kappa_per_block",    "rate_used",       "c_e_bits_per_block",
                 "lambda_avg_dtms",    "lambda_avg_mfs",  "lambda_avg_mmps"};
    const QosExponent q{cfg.theta};
    for (double p : cfg.p_ons) {
        const auto src = detail::sources_for_p_on(p, cfg.rate_sum);
        for (double g : logspace(cfg.gamma_min, cfg.gamma_max, cfg.points)) {
            const double r =
                std::isfinite(cfg.rate) ? cfg.rate : optimize_rate(g, cfg.kappa, q).r_star;
            const double ce = effective_capacity({g, r, cfg.kappa}, q).value;
            t.rows.push_back({g, 10.0 * std::log10(g), p, cfg.theta, cfg.kappa, r, ce,
                              max_arrival_dtms(src.dtms.p11, src.dtms.p22, ce, q).lambda_avg_star,
                              max_arrival_mfs(src.mfs.alpha, src.mfs.beta, ce, q).lambda_avg_star,
                              max_arrival_mmps(src.mmps.alpha, src.mmps.beta, ce, q)
                                  .lambda_avg_star});
        }
    }
    return t;
}

struct Fig5Config {
    std::vector<double> p_ons{0.1, 0.5};
    double gamma = 10.0;
    double kappa = 50.0;
    double theta_min = 0.01;
    double theta_max = 10.0;
    int points = 40;
    double rate = std::numeric_limits<double>::quiet_NaN();
    double rate_sum = 10.0;
};

/// Maximum average arrival rate against the QoS exponent. Rates collapse as
/// theta grows, the Poisson-modulated family fastest.
inline SweepTable fig5_theta_sweep(const Fig5Config& cfg = {}) {
    detail::require_grid(!cfg.p_ons.empty(), "empty p_on grid");
    detail::require_grid(cfg.points >= 2 && cfg.theta_max > cfg.theta_min && cfg.theta_min > 0,
                         "bad theta range");
    SweepTable t;
    t.experiment = "fig5_theta_sweep";
    t.columns = {"theta_per_bit",   "p_on_source",     "gamma_linear",
                 "kappa_per_block", "rate_used",       "c_e_bits_per_block",
                 "lambda_avg_dtms", "lambda_avg_mfs",  "lambda_avg_mmps"};
    for (double p : cfg.p_ons) {
        const auto src = detail::sources_for_p_on(p, cfg.rate_sum);
        for (double th : logspace(cfg.theta_min, cfg.theta_max, cfg.points)) {
            const QosExponent q{th};
            const double r =
                std::isfinite(cfg.rate) ? cfg.rate : optimize_rate(cfg.gamma, cfg.kappa, q).r_star;
            const double ce = effective_capacity({cfg.gamma, r, cfg.kappa}, q).value;
            t.rows.push_back({th, p, cfg.gamma, cfg.kappa, r, ce,
                              max_arrival_dtms(src.dtms.p11, src.dtms.p22, ce, q).lambda_avg_star,
                              max_arrival_mfs(src.mfs.alpha, src.mfs.beta, ce, q).lambda_avg_star,
                              max_arrival_mmps(src.mmps.alpha, src.mmps.beta, ce, q)
                                  .lambda_avg_star});
        }
    }
    return t;
}

struct Fig6Config {
    TradeoffConfig gamma_sweep;
    TradeoffConfig theta_sweep;
    TradeoffConfig p_on_sweep;

    Fig6Config() {
        gamma_sweep.sweep = TradeoffSweep::gamma;
        gamma_sweep.grid = logspace(1.0, 100.0, 30);
        theta_sweep.sweep = TradeoffSweep::theta;
        theta_sweep.grid = logspace(0.01, 10.0, 30);
        p_on_sweep.sweep = TradeoffSweep::p_on;
        p_on_sweep.grid = linspace(0.05, 1.0, 20);
    }
};

/// The three delay-violation tradeoff tables (SNR, exponent, duty cycle).
inline std::vector<SweepTable> fig6_delay_tradeoff(const Fig6Config& cfg = {}) {
    return {tradeoff_curve(cfg.gamma_sweep), tradeoff_curve(cfg.theta_sweep),
            tradeoff_curve(cfg.p_on_sweep)};
}

struct Fig7Config {
    std::vector<double> ce_values;  // empty: derive from `gammas` at the optimum rate
    std::vector<double> gammas{10.0, 31.6227766016838};
    double theta = 1.0;
    double kappa = 50.0;
    double p_on_min = 0.05;
    double p_on_max = 1.0;
    int points = 20;
    double rate_sum = 10.0;
};

/// ON-state arrival rate needed to sustain a given effective capacity as the
/// source duty cycle varies; burstier sources need larger ON-state rates.
inline SweepTable fig7_arrival_vs_pon(const Fig7Config& cfg = {}) {
    detail::require_grid(cfg.points >= 2 && cfg.p_on_max > cfg.p_on_min && cfg.p_on_min > 0,
                         "bad p_on range");
    std::vector<double> ces = cfg.ce_values;
    const QosExponent q{cfg.theta};
    if (ces.empty()) {
        detail::require_grid(!cfg.gammas.empty(), "empty gamma list");
        for (double g : cfg.gammas) ces.push_back(optimize_rate(g, cfg.kappa, q).c_e_star);
    }
    SweepTable t;
    t.experiment = "fig7_arrival_vs_pon";
    t.columns = {"p_on_source",    "c_e_target",    "theta_per_bit",
                 "lambda_on_dtms", "lambda_on_mfs", "lambda_on_mmps"};
    for (double ce : ces)
        for (double p : linspace(cfg.p_on_min, cfg.p_on_max, cfg.points)) {
            const auto src = detail::sources_for_p_on(p, cfg.rate_sum);
            t.rows.push_back(
                {p, ce, cfg.theta,
                 max_arrival_dtms(src.dtms.p11, src.dtms.p22, ce, q).lambda_on_star,
                 max_arrival_mfs(src.mfs.alpha, src.mfs.beta, ce, q).lambda_on_star,
                 max_arrival_mmps(src.mmps.alpha, src.mmps.beta, ce, q).lambda_on_star});
        }
    return t;
}

struct CustomSweepConfig {
    std::vector<double> gammas{10.0};
    std::vector<double> thetas{1.0};
    std::vector<double> rates{3.0};
    std::vector<double> kappas{50.0};
    double p_on = 0.5;
    double rate_sum = 10.0;
};

/// Cartesian sweep over (gamma, theta, rate, kappa) with the matched-source
/// maximum rates at each point.
inline SweepTable custom_sweep(const CustomSweepConfig& cfg) {
    detail::require_grid(!cfg.gammas.empty() && !cfg.thetas.empty() && !cfg.rates.empty() &&
                             !cfg.kappas.empty(),
                         "empty grid");
    const auto src = detail::sources_for_p_on(cfg.p_on, cfg.rate_sum);
    SweepTable t;
    t.experiment = "custom";
    t.columns = {"gamma_linear",       "theta_per_bit",   "rate_bits_per_block",
                 "kappa_per_block",    "psi",             "p_on_channel",
                 "c_e_bits_per_block", "upper_bound",     "lambda_avg_dtms",
                 "lambda_avg_mfs",     "lambda_avg_mmps"};
    for (double g : cfg.gammas)
        for (double th : cfg.thetas)
            for (double r : cfg.rates)
                for (double k : cfg.kappas) {
                    const ChannelSpec spec{g, r, k};
                    const QosExponent q{th};
                    const auto chain = derive_chain(spec);
                    const auto ce = effective_capacity(spec, q);
                    t.rows.push_back(
                        {g, th, r, k, chain.psi, chain.p_on, ce.value, ce.upper_bound,
                         max_arrival_dtms(src.dtms.p11, src.dtms.p22, ce.value, q).lambda_avg_star,
                         max_arrival_mfs(src.mfs.alpha, src.mfs.beta, ce.value, q).lambda_avg_star,
                         max_arrival_mmps(src.mmps.alpha, src.mmps.beta, ce.value, q)
                             .lambda_avg_star});
                }
    return t;
}

}  // namespace qprov

#endif  // QPROV_EXPERIMENTS_HPP
