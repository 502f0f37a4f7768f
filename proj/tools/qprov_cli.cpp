// Command-line front end: point queries for every library operation plus the
// parametric sweep experiments, emitting JSON records on stdout and CSV/JSON
// data files. Exit codes: 0 ok, 2 usage, 3 infeasible/no-solution, 4 numerical
// failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <qprov/qprov.hpp>
#include <qprov/serialize.hpp>

using json = nlohmann::json;
using namespace qprov;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

bool given(double v) { return !std::isnan(v); }

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

/// Grid syntax: "1,2,5" (list), "lo:hi:n" (linear), "log:lo:hi:n" (log-spaced).
std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    if (text.find(':') != std::string::npos) {
        while (std::getline(ss, tok, ':')) parts.push_back(tok);
        const bool logspaced = parts.size() == 4 && parts[0] == "log";
        if (!(logspaced || parts.size() == 3))
            throw invalid_parameter("grid range must be lo:hi:n or log:lo:hi:n");
        const int base = logspaced ? 1 : 0;
        const double lo = std::stod(parts[base]);
        const double hi = std::stod(parts[base + 1]);
        const int n = std::stoi(parts[base + 2]);
        if (!(hi > lo) || n < 2) throw invalid_parameter("grid range must be well-ordered");
        return logspaced ? logspace(lo, hi, n) : linspace(lo, hi, n);
    }
    std::vector<double> out;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw invalid_parameter("empty grid");
    return out;
}

struct ChannelFlags {
    double gamma = kUnset;
    double gamma_db = kUnset;
    double rate = kUnset;
    double kappa = kUnset;

    void add(CLI::App* cmd, bool with_rate = true) {
        auto* g = cmd->add_option("--gamma", gamma, "average SNR, linear");
        cmd->add_option("--gamma-db", gamma_db, "average SNR in dB")->excludes(g);
        if (with_rate) cmd->add_option("--rate", rate, "transmission rate, bits/block");
        cmd->add_option("--kappa", kappa, "channel memory decay rate, 1/block");
    }
    double gamma_linear() const {
        if (given(gamma_db)) return std::pow(10.0, gamma_db / 10.0);
        return gamma;
    }
    ChannelSpec spec() const {
        const double g = gamma_linear();
        if (!given(g) || !given(rate) || !given(kappa))
            throw invalid_parameter("channel needs --gamma (or --gamma-db), --rate and --kappa");
        return {g, rate, kappa};
    }
    json echo() const {
        json j{{"gamma", gamma_linear()}, {"rate", rate}, {"kappa", kappa}};
        if (given(gamma_db)) j["gamma_db"] = gamma_db;
        return j;
    }
};

struct SourceFlags {
    std::string family = "dtms";
    double p11 = kUnset, p22 = kUnset, alpha = kUnset, beta = kUnset, s = kUnset;
    double lambda = 0.0;

    void add(CLI::App* cmd) {
        cmd->add_option("--source", family, "source family: dtms, mfs or mmps")
            ->check(CLI::IsMember({"dtms", "mfs", "mmps"}));
        cmd->add_option("--p11", p11, "dtms stay-OFF probability");
        cmd->add_option("--p22", p22, "dtms stay-ON probability");
        cmd->add_option("--alpha", alpha, "OFF->ON rate of the fluid/Poisson chain");
        cmd->add_option("--beta", beta, "ON->OFF rate of the fluid/Poisson chain");
        cmd->add_option("--s", s, "dtms burstiness parameter (p11 = 1-s, p22 = s)");
        cmd->add_option("--lambda", lambda, "ON-state arrival rate, bits/block");
    }
    SourceModel build() const {
        if (family == "dtms") {
            if (given(s)) return dtms_from_burstiness({s}, lambda);
            if (!given(p11) || !given(p22))
                throw invalid_parameter("dtms needs --p11 and --p22 (or --s)");
            return DtmsSource{p11, p22, lambda};
        }
        if (!given(alpha) || !given(beta))
            throw invalid_parameter(family + " needs --alpha and --beta");
        if (family == "mfs") return MfsSource{alpha, beta, lambda};
        return MmpsSource{alpha, beta, lambda};
    }
    json echo() const {
        json j{{"source", family}, {"lambda", lambda}};
        if (given(s)) j["s"] = s;
        if (given(p11)) j["p11"] = p11;
        if (given(p22)) j["p22"] = p22;
        if (given(alpha)) j["alpha"] = alpha;
        if (given(beta)) j["beta"] = beta;
        return j;
    }
};

/// Config-file layer: keys are long option names with '-' replaced by '_'.
/// Values from the file become option defaults, so explicit flags win.
void apply_config(CLI::App& app, const json& cfg) {
    for (CLI::Option* opt : app.get_options()) {
        for (const std::string& lname : opt->get_lnames()) {
            if (lname == "config") continue;
            std::string key = lname;
            for (char& c : key) c = c == '-' ? '_' : c;
            if (cfg.contains(key)) {
                const json& v = cfg.at(key);
                opt->default_val(v.is_string() ? v.get<std::string>() : v.dump());
            }
        }
    }
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        apply_config(*sub, cfg);
}

json load_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw invalid_parameter(std::string("cannot open config ") + argv[i + 1]);
            json cfg;
            in >> cfg;
            if (!cfg.is_object()) throw invalid_parameter("config must be a JSON object");
            return cfg;
        }
    }
    return json::object();
}

void write_table(const SweepTable& table, const std::string& path, const std::string& format) {
    if (path.empty()) {
        if (format == "csv")
            write_csv(table, std::cout);
        else
            emit(to_json(table));
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    if (format == "csv")
        write_csv(table, out);
    else
        out << to_json(table).dump(2) << "\n";
    json note{{"written", path}, {"rows", table.rows.size()}, {"experiment", table.experiment}};
    if (!table.warnings.empty()) note["warnings"] = table.warnings;
    emit(note);
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

}  // namespace

int main(int argc, char** argv) {
    std::cout.precision(15);
    CLI::App app{"statistical QoS provisioning toolkit for Markov ON/OFF fading channels"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its keys");

    double theta = 1.0, zeta = 1.0, d = 0.0, ce_in = kUnset, epsilon = kUnset;
    std::uint64_t seed = 1;
    long blocks = -1, warmup = -1, replicas = -1;
    double block_duration = 1.0;
    std::string out_path, format = "csv", mode = "queue";

    // ---- capacity ----------------------------------------------------------
    auto* cap = app.add_subcommand("capacity", "effective capacity of the fixed-rate link");
    ChannelFlags cap_ch;
    cap_ch.add(cap);
    cap->add_option("--theta", theta, "QoS exponent, 1/bits");

    // ---- bandwidth ---------------------------------------------------------
    auto* bw = app.add_subcommand("bandwidth", "effective bandwidth of a Markov source");
    SourceFlags bw_src;
    bw_src.add(bw);
    bw->add_option("--theta", theta, "QoS exponent, 1/bits");

    // ---- match -------------------------------------------------------------
    auto* match = app.add_subcommand("match",
                                     "maximum arrival rate matching the effective capacity");
    ChannelFlags match_ch;
    SourceFlags match_src;
    match_ch.add(match);
    match_src.add(match);
    match->add_option("--theta", theta, "QoS exponent, 1/bits");
    match->add_option("--ce", ce_in, "effective capacity target (else derived from the channel)");

    // ---- optimize ----------------------------------------------------------
    auto* opt = app.add_subcommand("optimize", "throughput-optimal fixed transmission rate");
    ChannelFlags opt_ch;
    opt_ch.add(opt, /*with_rate=*/false);
    opt->add_option("--theta", theta, "QoS exponent, 1/bits");

    // ---- delay -------------------------------------------------------------
    auto* delay = app.add_subcommand(
        "delay", "delay-violation probability, or the exponent required for a target");
    ChannelFlags delay_ch;
    delay_ch.add(delay);
    double bandwidth_in = kUnset;
    delay->add_option("--theta", theta, "QoS exponent, 1/bits");
    delay->add_option("--bandwidth", bandwidth_in,
                      "effective bandwidth at theta (else the channel's capacity is used)");
    delay->add_option("--zeta", zeta, "non-empty-buffer probability");
    delay->add_option("--d", d, "delay threshold, blocks");
    delay->add_option("--epsilon", epsilon,
                      "violation target: solve for the smallest exponent meeting it");

    // ---- simulate ----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Monte Carlo queue simulation and estimators");
    ChannelFlags sim_ch;
    SourceFlags sim_src;
    sim_ch.add(sim);
    sim_src.add(sim);
    sim->add_option("--mode", mode, "queue (default), capacity or bandwidth")
        ->check(CLI::IsMember({"queue", "capacity", "bandwidth"}));
    sim->add_option("--theta", theta, "QoS exponent for the estimator modes");
    sim->add_option("--blocks", blocks, "horizon per replica/path");
    sim->add_option("--warmup", warmup, "blocks discarded before measuring (queue mode)");
    sim->add_option("--replicas", replicas, "independent replicas (queue) or total paths");
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--block-duration", block_duration, "block duration (queue mode)");
    sim->add_option("--out", out_path, "optional data file for the tails");
    sim->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // ---- sweep -------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "figure-data experiments");
    std::string experiment = "fig2";
    sweep->add_option("--experiment", experiment, "fig2..fig7 or custom")
        ->check(CLI::IsMember(
            {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "custom"}));
    ChannelFlags sweep_ch;
    sweep_ch.add(sweep);
    sweep->add_option("--theta", theta, "QoS exponent");
    double p_on = 0.5, rate_sum = 10.0, lambda_avg = 1.0, theta_ref = 0.01;
    std::string p_ons = "0.1,0.5", gammas, thetas, rates, kappas, ce_list;
    double r_min = 0.1, r_max = 8.0, r_step = 0.05;
    double lo = kUnset, hi = kUnset;
    int points = -1;
    sweep->add_option("--p-on", p_on, "source duty cycle (fig2)");
    sweep->add_option("--p-ons", p_ons, "comma list of duty cycles (fig4, fig5)");
    sweep->add_option("--rate-sum", rate_sum, "alpha + beta of the fluid/Poisson chains");
    sweep->add_option("--lambda-avg", lambda_avg, "fixed average arrival rate (fig6 P_ON sweep)");
    sweep->add_option("--theta-ref", theta_ref, "rate-selection exponent (fig6 P_ON sweep)");
    sweep->add_option("--r-min", r_min, "fig2 rate grid start");
    sweep->add_option("--r-max", r_max, "fig2 rate grid end");
    sweep->add_option("--r-step", r_step, "fig2 rate grid step");
    sweep->add_option("--lo", lo, "sweep-variable lower end (fig3/fig4/fig5/fig7)");
    sweep->add_option("--hi", hi, "sweep-variable upper end (fig3/fig4/fig5/fig7)");
    sweep->add_option("--points", points, "sweep-variable grid size");
    sweep->add_option("--gammas", gammas, "grid for gamma (fig3, fig7, custom)");
    sweep->add_option("--thetas", thetas, "grid for theta (fig3, custom)");
    sweep->add_option("--rates", rates, "grid for rate (custom)");
    sweep->add_option("--kappas", kappas, "grid for kappa (custom)");
    sweep->add_option("--ce-list", ce_list, "explicit capacity targets (fig7)");
    sweep->add_option("--d", d, "delay threshold (fig6)");
    sweep->add_option("--zeta", zeta, "non-empty-buffer probability (fig6)");
    sweep->add_option("--out", out_path, "output file (fig6 writes three, suffixed)");
    sweep->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        apply_config(app, load_config(argc, argv));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*cap) {
            const ChannelSpec spec = cap_ch.spec();
            const auto chain = derive_chain(spec);
            const auto r = effective_capacity(spec, {theta});
            json j{{"command", "capacity"}, {"params", cap_ch.echo()}};
            j["params"]["theta"] = theta;
            j["psi"] = chain.psi;
            j["p_on"] = chain.p_on;
            j["nu"] = chain.nu;
            j["mu"] = chain.mu;
            j.update(to_json(r));
            emit(j);
        } else if (*bw) {
            const SourceModel src = bw_src.build();
            json j{{"command", "bandwidth"}, {"params", bw_src.echo()}};
            j["params"]["theta"] = theta;
            j["value"] = effective_bandwidth(src, {theta});
            j["mean_rate"] = mean_rate(src);
            j["p_on"] = steady_state_on(src);
            emit(j);
        } else if (*match) {
            const SourceModel src = match_src.build();
            double ce = ce_in;
            json params = match_src.echo();
            params["theta"] = theta;
            if (!given(ce)) {
                const ChannelSpec spec = match_ch.spec();
                ce = effective_capacity(spec, {theta}).value;
                params.update(match_ch.echo());
            }
            params["ce"] = ce;
            json j{{"command", "match"}, {"params", params}};
            j.update(to_json(max_arrival(src, ce, {theta})));
            j["inversion_check"] = to_json(invert_bandwidth(src, ce, {theta}));
            if (std::holds_alternative<MmpsSource>(src)) {
                const auto& m = std::get<MmpsSource>(src);
                j["closed_form_variant"] =
                    to_json(max_arrival_mmps_closed_form(m.alpha, m.beta, ce, {theta}));
            }
            emit(j);
        } else if (*opt) {
            const double g = opt_ch.gamma_linear();
            if (!given(g) || !given(opt_ch.kappa))
                throw invalid_parameter("optimize needs --gamma (or --gamma-db) and --kappa");
            json params{{"gamma", g}, {"kappa", opt_ch.kappa}, {"theta", theta}};
            json j{{"command", "optimize"}, {"params", params}};
            j.update(to_json(optimize_rate(g, opt_ch.kappa, {theta})));
            j["r_star_foc"] = optimize_rate_by_foc(g, opt_ch.kappa, {theta});
            emit(j);
        } else if (*delay) {
            if (given(epsilon)) {
                const ChannelSpec spec = delay_ch.spec();
                json params = delay_ch.echo();
                params["d"] = d;
                params["epsilon"] = epsilon;
                params["zeta"] = zeta;
                const QosExponent th = required_theta(spec, d, epsilon, zeta);
                json j{{"command", "delay"}, {"params", params}};
                j["required_theta"] = th.theta;
                j["c_e_at_theta"] = effective_capacity(spec, th).value;
                emit(j);
            } else {
                double a = bandwidth_in;
                json params{{"theta", theta}, {"zeta", zeta}, {"d", d}};
                if (!given(a)) {
                    const ChannelSpec spec = delay_ch.spec();
                    a = effective_capacity(spec, {theta}).value;
                    params.update(delay_ch.echo());
                }
                params["bandwidth"] = a;
                json j{{"command", "delay"}, {"params", params}};
                j["violation"] = delay_violation({zeta, {theta}, a}, d);
                emit(j);
            }
        } else if (*sim) {
            if (mode == "queue") {
                SimConfig cfg;
                cfg.channel = sim_ch.spec();
                cfg.source = sim_src.build();
                cfg.blocks = blocks > 0 ? blocks : 200000;
                cfg.warmup = warmup >= 0 ? warmup : cfg.blocks / 10;
                cfg.replicas = replicas > 0 ? int(replicas) : 4;
                cfg.seed = seed;
                cfg.block_duration = block_duration;
                const SimReport rep = simulate(cfg);
                json params = sim_ch.echo();
                params.update(sim_src.echo());
                params["blocks"] = cfg.blocks;
                params["warmup"] = cfg.warmup;
                params["replicas"] = cfg.replicas;
                params["seed"] = cfg.seed;
                params["block_duration"] = cfg.block_duration;
                json j{{"command", "simulate"}, {"mode", "queue"}, {"params", params}};
                j.update(to_json(rep));
                emit(j);
                if (!out_path.empty()) {
                    std::ofstream file(out_path);
                    if (!file) throw std::runtime_error("cannot open " + out_path);
                    if (format == "csv")
                        write_tails_csv(rep, file);
                    else
                        file << to_json(rep).dump(2) << "\n";
                }
            } else {
                const long b = blocks > 0 ? blocks : 500;
                const long n = replicas > 0 ? replicas : 100000;
                json params{{"theta", theta}, {"blocks", b}, {"replicas", n}, {"seed", seed}};
                json j{{"command", "simulate"}, {"mode", mode}, {"params", params}};
                if (mode == "capacity") {
                    const ChannelSpec spec = sim_ch.spec();
                    params.update(sim_ch.echo());
                    j["params"] = params;
                    j.update(to_json(estimate_effective_capacity(spec, {theta}, b, n, seed)));
                    j["closed_form"] = effective_capacity(spec, {theta}).value;
                } else {
                    const SourceModel src = sim_src.build();
                    params.update(sim_src.echo());
                    j["params"] = params;
                    j.update(to_json(estimate_effective_bandwidth(src, {theta}, b, n, seed)));
                    j["closed_form"] = effective_bandwidth(src, {theta});
                }
                emit(j);
            }
        } else if (*sweep) {
            std::vector<SweepTable> tables;
            try {
                if (experiment == "fig2") {
                    Fig2Config c;
                    c.theta = theta;
                    if (given(sweep_ch.gamma_linear())) c.gamma = sweep_ch.gamma_linear();
                    if (given(sweep_ch.kappa)) c.kappa = sweep_ch.kappa;
                    c.p_on = p_on;
                    c.r_min = r_min;
                    c.r_max = r_max;
                    c.r_step = r_step;
                    c.rate_sum = rate_sum;
                    tables.push_back(fig2_rate_sweep(c));
                } else if (experiment == "fig3") {
                    Fig3Config c;
                    if (given(sweep_ch.rate)) c.rate = sweep_ch.rate;
                    if (!gammas.empty()) c.gammas = parse_grid(gammas);
                    if (!thetas.empty()) c.thetas = parse_grid(thetas);
                    if (given(lo)) c.kappa_min = lo;
                    if (given(hi)) c.kappa_max = hi;
                    if (points > 0) c.points = points;
                    tables.push_back(fig3_kappa_sweep(c));
                } else if (experiment == "fig4") {
                    Fig4Config c;
                    c.p_ons = parse_grid(p_ons);
                    c.theta = theta;
                    if (given(sweep_ch.kappa)) c.kappa = sweep_ch.kappa;
                    if (given(lo)) c.gamma_min = lo;
                    if (given(hi)) c.gamma_max = hi;
                    if (points > 0) c.points = points;
                    if (given(sweep_ch.rate)) c.rate = sweep_ch.rate;
                    c.rate_sum = rate_sum;
                    tables.push_back(fig4_gamma_sweep(c));
                } else if (experiment == "fig5") {
                    Fig5Config c;
                    c.p_ons = parse_grid(p_ons);
                    if (given(sweep_ch.gamma_linear())) c.gamma = sweep_ch.gamma_linear();
                    if (given(sweep_ch.kappa)) c.kappa = sweep_ch.kappa;
                    if (given(lo)) c.theta_min = lo;
                    if (given(hi)) c.theta_max = hi;
                    if (points > 0) c.points = points;
                    if (given(sweep_ch.rate)) c.rate = sweep_ch.rate;
                    c.rate_sum = rate_sum;
                    tables.push_back(fig5_theta_sweep(c));
                } else if (experiment == "fig6") {
                    Fig6Config c;
                    for (TradeoffConfig* tc :
                         {&c.gamma_sweep, &c.theta_sweep, &c.p_on_sweep}) {
                        if (given(sweep_ch.gamma_linear())) tc->gamma = sweep_ch.gamma_linear();
                        if (given(sweep_ch.kappa)) tc->kappa = sweep_ch.kappa;
                        if (given(sweep_ch.rate)) tc->rate = sweep_ch.rate;
                        tc->theta = theta;
                        tc->d = d > 0.0 ? d : 5.0;
                        tc->zeta = zeta;
                        tc->lambda_avg = lambda_avg;
                        tc->theta_ref = theta_ref;
                        tc->rate_sum = rate_sum;
                    }
                    const auto three = fig6_delay_tradeoff(c);
                    tables.insert(tables.end(), three.begin(), three.end());
                } else if (experiment == "fig7") {
                    Fig7Config c;
                    c.theta = theta;
                    if (given(sweep_ch.kappa)) c.kappa = sweep_ch.kappa;
                    if (!ce_list.empty()) c.ce_values = parse_grid(ce_list);
                    if (!gammas.empty()) c.gammas = parse_grid(gammas);
                    if (given(lo)) c.p_on_min = lo;
                    if (given(hi)) c.p_on_max = hi;
                    if (points > 0) c.points = points;
                    c.rate_sum = rate_sum;
                    tables.push_back(fig7_arrival_vs_pon(c));
                } else {
                    CustomSweepConfig c;
                    c.gammas = gammas.empty() ? std::vector<double>{} : parse_grid(gammas);
                    c.thetas = thetas.empty() ? std::vector<double>{} : parse_grid(thetas);
                    c.rates = rates.empty() ? std::vector<double>{} : parse_grid(rates);
                    c.kappas = kappas.empty() ? std::vector<double>{} : parse_grid(kappas);
                    c.p_on = p_on;
                    c.rate_sum = rate_sum;
                    tables.push_back(custom_sweep(c));
                }
            } catch (const std::exception& e) {
                // flush whatever was produced, plus a machine-readable manifest
                if (!tables.empty() && !out_path.empty()) {
                    for (std::size_t i = 0; i < tables.size(); ++i)
                        write_table(tables[i], with_suffix(out_path, "_partial"), format);
                }
                json manifest{{"command", "sweep"},
                              {"experiment", experiment},
                              {"error", e.what()},
                              {"tables_completed", tables.size()}};
                if (!out_path.empty()) {
                    std::ofstream mf(out_path + ".failmanifest.json");
                    mf << manifest.dump(2) << "\n";
                }
                std::cerr << manifest.dump(2) << "\n";
                throw;
            }
            if (tables.size() == 1) {
                write_table(tables[0], out_path, format);
            } else {
                const char* suffixes[3] = {"_gamma", "_theta", "_pon"};
                for (std::size_t i = 0; i < tables.size(); ++i)
                    write_table(tables[i],
                                out_path.empty() ? out_path : with_suffix(out_path, suffixes[i]),
                                format);
            }
        }
    } catch (const infeasible& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "infeasible"}}.dump() << "\n";
        return kExitInfeasible;
    } catch (const no_solution& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "no_solution"}}.dump() << "\n";
        return kExitInfeasible;
    } catch (const bracket_failure& e) {
        std::cerr << json{{"error", e.what()},
                          {"kind", "bracket_failure"},
                          {"lo", e.lo},
                          {"hi", e.hi},
                          {"f_lo", e.f_lo},
                          {"f_hi", e.f_hi}}
                         .dump()
                  << "\n";
        return kExitNumerical;
    } catch (const invalid_parameter& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "numerical"}}.dump() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
