#ifndef QPROV_SERIALIZE_HPP
#define QPROV_SERIALIZE_HPP

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "experiments.hpp"
#include "qos_analysis.hpp"
#include "queue_sim.hpp"
#include "rate_matching.hpp"
#include "rate_optimizer.hpp"

namespace qprov {

/// 12 significant digits, '.' decimal point, locale-independent.
inline std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void write_csv(const SweepTable& t, std::ostream& os) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_sig(row[i]);
        os << "\n";
    }
}

inline nlohmann::json to_json(const SweepTable& t) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : t.params) params[k] = v;
    return {{"experiment", t.experiment},
            {"params", params},
            {"columns", t.columns},
            {"rows", t.rows},
            {"warnings", t.warnings}};
}

inline nlohmann::json to_json(const MatchResult& m) {
    return {{"lambda_on_star", m.lambda_on_star},
            {"lambda_avg_star", m.lambda_avg_star},
            {"residual", m.residual},
            {"method", m.method == MatchMethod::bisection ? "bisection" : "closed_form"}};
}

inline nlohmann::json to_json(const EffectiveCapacityResult& r) {
    return {{"value", r.value}, {"xi", r.xi}, {"upper_bound", r.upper_bound}};
}

inline nlohmann::json to_json(const OptimumRate& o) {
    return {{"r_star", o.r_star},
            {"c_e_star", o.c_e_star},
            {"foc_residual", o.foc_residual},
            {"bracket", {o.bracket.first, o.bracket.second}},
            {"grid_fallback", o.grid_fallback},
            {"degenerate", o.degenerate}};
}

inline nlohmann::json to_json(const EstimateResult& e) {
    return {{"value", e.value},
            {"std_error", e.std_error},
            {"ci_halfwidth", e.ci_halfwidth},
            {"groups", e.groups},
            {"paths_per_group", e.paths_per_group},
            {"tilt_guard", e.tilt_guard}};
}

inline nlohmann::json to_json(const std::vector<TailPoint>& tail) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : tail) arr.push_back({{"x", p.x}, {"prob", p.prob}, {"se", p.se}});
    return arr;
}

inline nlohmann::json to_json(const SimReport& r) {
    return {{"mean_arrival", r.mean_arrival},
            {"mean_service", r.mean_service},
            {"queue_tail", to_json(r.queue_tail)},
            {"delay_tail", to_json(r.delay_tail)},
            {"fitted_decay", r.fitted_decay},
            {"fitted_decay_se", r.fitted_decay_se},
            {"zeta_hat", r.zeta_hat},
            {"ci_halfwidth", r.ci_halfwidth},
            {"unstable", r.unstable},
            {"channel_on_fraction", r.channel_on_fraction},
            {"source_on_fraction", r.source_on_fraction},
            {"recorded_bits", r.recorded_bits},
            {"censored_batches", r.censored_batches},
            {"fit_band", {r.fit_band.first, r.fit_band.second}}};
}

/// Tails as CSV: kind is "queue" or "delay", x is bits resp. blocks.
inline void write_tails_csv(const SimReport& r, std::ostream& os) {
    os << "kind,x,prob,se\n";
    for (const auto& p : r.queue_tail)
        os << "queue," << format_sig(p.x) << ',' << format_sig(p.prob) << ','
           << format_sig(p.se) << "\n";
    for (const auto& p : r.delay_tail)
        os << "delay," << format_sig(p.x) << ',' << format_sig(p.prob) << ','
           << format_sig(p.se) << "\n";
}

}  // namespace qprov

#endif  // QPROV_SERIALIZE_HPP
