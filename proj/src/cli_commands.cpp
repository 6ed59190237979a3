#include "fixsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fixsim/bounds.hpp"
#include "fixsim/branching.hpp"
#include "fixsim/chains.hpp"
#include "fixsim/coupling.hpp"
#include "fixsim/errors.hpp"
#include "fixsim/exact.hpp"
#include "fixsim/fit.hpp"
#include "fixsim/game.hpp"
#include "fixsim/montecarlo.hpp"

namespace fixsim {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration: defaults, JSON config file, CLI flags (flags win).

struct ExperimentConfig {
    GameSpec game{4.0, 2.0, 3.0, 1.0, 0.3};  // the running example payoffs
    std::vector<int> N_list{100};
    std::vector<int> i_list;          // empty = subcommand-specific default
    long long replicas = 10000;
    std::uint64_t seed = 1;
    std::vector<long long> horizons{1, 2, 3, 4, 5};
    int J = 0;                        // 0 = ceil(N^0.6)
    double eta = 1.5;
    double C0 = 0.0;                  // 0 = estimate from coupling draws
    long long c0_replicas = 100000;
    int cap = kSolverCapDefault;
    bool serial = false;
    std::string format = "csv";       // csv | json
    std::string out;                  // empty = stdout
};

json config_echo(const std::string& command, const ExperimentConfig& cfg) {
    json j;
    j["command"] = command;
    j["a"] = cfg.game.a;
    j["b"] = cfg.game.b;
    j["c"] = cfg.game.c;
    j["d"] = cfg.game.d;
    j["w"] = cfg.game.w;
    j["N"] = cfg.N_list;
    if (!cfg.i_list.empty()) j["i"] = cfg.i_list;
    j["replicas"] = cfg.replicas;
    j["seed"] = cfg.seed;
    j["horizons"] = cfg.horizons;
    j["J"] = cfg.J;
    j["eta"] = cfg.eta;
    j["C0"] = cfg.C0;
    j["c0_replicas"] = cfg.c0_replicas;
    j["cap"] = cfg.cap;
    j["serial"] = cfg.serial;
    return j;
}

// Reads one scalar-or-array integer list entry.
template <class T>
std::vector<T> json_list(const json& v, const char* key) {
    std::vector<T> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(e.get<T>());
    } else {
        out.push_back(v.get<T>());
    }
    if (out.empty()) {
        throw std::invalid_argument(std::string("config key '") + key +
                                    "' must not be an empty list");
    }
    return out;
}

void apply_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in.good()) {
        throw std::invalid_argument("cannot open config file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        // e.what() carries the byte/line position diagnostics.
        throw std::invalid_argument(std::string("config file ") + path + ": " +
                                    e.what());
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "a") cfg.game.a = value.get<double>();
        else if (key == "b") cfg.game.b = value.get<double>();
        else if (key == "c") cfg.game.c = value.get<double>();
        else if (key == "d") cfg.game.d = value.get<double>();
        else if (key == "w") cfg.game.w = value.get<double>();
        else if (key == "N") cfg.N_list = json_list<int>(value, "N");
        else if (key == "i") cfg.i_list = json_list<int>(value, "i");
        else if (key == "replicas") cfg.replicas = value.get<long long>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "horizons") cfg.horizons = json_list<long long>(value, "horizons");
        else if (key == "J") cfg.J = value.get<int>();
        else if (key == "eta") cfg.eta = value.get<double>();
        else if (key == "C0") cfg.C0 = value.get<double>();
        else if (key == "c0_replicas") cfg.c0_replicas = value.get<long long>();
        else if (key == "cap") cfg.cap = value.get<int>();
        else if (key == "serial") cfg.serial = value.get<bool>();
        else if (key == "format") cfg.format = value.get<std::string>();
        else if (key == "out") cfg.out = value.get<std::string>();
        else {
            throw std::invalid_argument("config file " + path +
                                        ": unknown key '" + key + "'");
        }
    }
}

// CLI option handles shared by every subcommand; values land in a scratch
// copy and are copied over the (defaults + config file) state only for
// options that were actually passed.
struct CommonOpts {
    ExperimentConfig scratch;
    std::string config_path;
    CLI::Option* a = nullptr;
    CLI::Option* b = nullptr;
    CLI::Option* c = nullptr;
    CLI::Option* d = nullptr;
    CLI::Option* w = nullptr;
    CLI::Option* N = nullptr;
    CLI::Option* i = nullptr;
    CLI::Option* replicas = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* horizons = nullptr;
    CLI::Option* J = nullptr;
    CLI::Option* eta = nullptr;
    CLI::Option* C0 = nullptr;
    CLI::Option* c0_replicas = nullptr;
    CLI::Option* cap = nullptr;
    CLI::Option* serial = nullptr;
    CLI::Option* format = nullptr;
    CLI::Option* out = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file; flags override it");
    o.a = cmd->add_option("--a", o.scratch.game.a, "payoff a (A vs A)");
    o.b = cmd->add_option("--b", o.scratch.game.b, "payoff b (A vs B)");
    o.c = cmd->add_option("--c", o.scratch.game.c, "payoff c (B vs A)");
    o.d = cmd->add_option("--d", o.scratch.game.d, "payoff d (B vs B)");
    o.w = cmd->add_option("--w", o.scratch.game.w, "selection strength in [0,1]");
    o.N = cmd->add_option("--N", o.scratch.N_list, "population size(s)");
    o.i = cmd->add_option("--i", o.scratch.i_list, "initial state(s)");
    o.replicas = cmd->add_option("--replicas", o.scratch.replicas, "Monte Carlo replicas");
    o.seed = cmd->add_option("--seed", o.scratch.seed, "base RNG seed");
    o.horizons = cmd->add_option("--m", o.scratch.horizons, "time horizons");
    o.J = cmd->add_option("--J", o.scratch.J, "coupling range cap (0 = ceil(N^0.6))");
    o.eta = cmd->add_option("--eta", o.scratch.eta, "exceedance slope parameter (> 1)");
    o.C0 = cmd->add_option("--C0", o.scratch.C0, "mismatch constant (0 = estimate)");
    o.c0_replicas = cmd->add_option("--c0-replicas", o.scratch.c0_replicas,
                                    "replicas per state for the C0 estimate");
    o.cap = cmd->add_option("--cap", o.scratch.cap, "dense solver cap");
    o.serial = cmd->add_flag("--serial", o.scratch.serial,
                             "run Monte Carlo on the serial reference path");
    o.format = cmd->add_option("--format", o.scratch.format, "csv or json")
                   ->check(CLI::IsMember({"csv", "json"}));
    o.out = cmd->add_option("--out", o.scratch.out, "output file (default stdout)");
}

ExperimentConfig resolve(const CommonOpts& o) {
    ExperimentConfig cfg;
    if (!o.config_path.empty()) apply_config_file(o.config_path, cfg);
    if (o.a->count()) cfg.game.a = o.scratch.game.a;
    if (o.b->count()) cfg.game.b = o.scratch.game.b;
    if (o.c->count()) cfg.game.c = o.scratch.game.c;
    if (o.d->count()) cfg.game.d = o.scratch.game.d;
    if (o.w->count()) cfg.game.w = o.scratch.game.w;
    if (o.N->count()) cfg.N_list = o.scratch.N_list;
    if (o.i->count()) cfg.i_list = o.scratch.i_list;
    if (o.replicas->count()) cfg.replicas = o.scratch.replicas;
    if (o.seed->count()) cfg.seed = o.scratch.seed;
    if (o.horizons->count()) cfg.horizons = o.scratch.horizons;
    if (o.J->count()) cfg.J = o.scratch.J;
    if (o.eta->count()) cfg.eta = o.scratch.eta;
    if (o.C0->count()) cfg.C0 = o.scratch.C0;
    if (o.c0_replicas->count()) cfg.c0_replicas = o.scratch.c0_replicas;
    if (o.cap->count()) cfg.cap = o.scratch.cap;
    if (o.serial->count()) cfg.serial = o.scratch.serial;
    if (o.format->count()) cfg.format = o.scratch.format;
    if (o.out->count()) cfg.out = o.scratch.out;
    cfg.game.validate();
    if (cfg.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
    if (cfg.N_list.empty()) throw std::invalid_argument("need at least one N");
    return cfg;
}

RunMode run_mode(const ExperimentConfig& cfg) {
    return cfg.serial ? RunMode::Serial : RunMode::Parallel;
}

int default_range_cap(int N) {
    return static_cast<int>(std::ceil(std::pow(static_cast<double>(N), 0.6)));
}

// ---------------------------------------------------------------------------
// Output: one table per command, emitted as CSV with '#' metadata lines or
// as JSON, written atomically (whole file or nothing).

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct Table {
    std::string command;
    json config;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;
};

std::string render_csv(const Table& t) {
    std::ostringstream os;
    os << "# fixsim " << t.command << "\n";
    os << "# version " << kVersion << "\n";
    os << "# config " << t.config.dump() << "\n";
    for (const std::string& note : t.notes) os << "# note " << note << "\n";
    for (std::size_t k = 0; k < t.columns.size(); ++k) {
        os << (k ? "," : "") << t.columns[k];
    }
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            os << (k ? "," : "") << row[k];
        }
        os << "\n";
    }
    return os.str();
}

std::string render_json(const Table& t) {
    json j;
    j["command"] = t.command;
    j["version"] = kVersion;
    j["config"] = t.config;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    j["notes"] = t.notes;
    return j.dump(2) + "\n";
}

void emit(const Table& t, const ExperimentConfig& cfg) {
    const std::string body =
        cfg.format == "json" ? render_json(t) : render_csv(t);
    if (cfg.out.empty()) {
        std::cout << body;
        return;
    }
    const std::string tmp = cfg.out + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f.good()) {
            throw std::runtime_error("cannot open " + tmp + " for writing");
        }
        f << body;
        if (!f.good()) {
            throw std::runtime_error("short write to " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), cfg.out.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move " + tmp + " into place");
    }
}

// Fixation probability for one (N, i), dense solver below the cap and
// Monte Carlo above it. Returns the value and which path produced it.
std::pair<double, std::string> fixation_value(const ExperimentConfig& cfg,
                                              int N, int i,
                                              std::uint64_t salt) {
    if (N <= cfg.cap) {
        const FixationVector fv =
            solve_fixation(ChainKernel::wright_fisher(cfg.game, N), cfg.cap);
        return {fv.p[static_cast<std::size_t>(i)], "exact"};
    }
    const ChainKernel kernel = ChainKernel::wright_fisher(cfg.game, N);
    const McEstimate est = monte_carlo_fixation(kernel, i, cfg.replicas,
                                                cfg.seed ^ salt, run_mode(cfg));
    return {est.point, "mc"};
}

std::uint64_t salt_of(int N, int i) {
    return 0x9e3779b97f4a7c15ULL *
           (static_cast<std::uint64_t>(N) * 1024ULL + static_cast<std::uint64_t>(i));
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_certify(const ExperimentConfig& cfg) {
    const DominanceCertificate cert = certify_dominance(cfg.game);
    Table t;
    t.command = "certify";
    t.config = config_echo(t.command, cfg);
    t.columns = {"quantity", "value"};
    t.rows = {
        {"N0", std::to_string(cert.N0)},
        {"alpha", fmt_num(cert.alpha)},
        {"gamma", fmt_num(cert.gamma)},
        {"rho", fmt_num(cert.rho)},
        {"theta", fmt_num(cert.theta)},
        {"lambda", fmt_num(cert.lambda)},
        {"alpha_site", ratio_site_name(cert.alpha_site)},
        {"gamma_site", ratio_site_name(cert.gamma_site)},
    };
    emit(t, cfg);
    return 0;
}

int cmd_exact(const ExperimentConfig& cfg, const std::string& model) {
    const int N = cfg.N_list.front();
    const ChainKernel kernel =
        model == "moran"      ? ChainKernel::moran(cfg.game, N)
        : model == "embedded" ? ChainKernel::embedded_moran(cfg.game, N)
                              : ChainKernel::wright_fisher(cfg.game, N);
    const FixationVector fv = solve_fixation(kernel, cfg.cap);

    Table t;
    t.command = "exact";
    t.config = config_echo(t.command, cfg);
    t.config["model"] = model;

    bool have_cert = true;
    DominanceCertificate cert{};
    try {
        cert = certify_dominance(cfg.game);
        if (N < cert.N0) have_cert = false;
    } catch (const DominanceViolated&) {
        have_cert = false;
    }
    if (!have_cert) {
        t.notes.push_back("no certificate at this N; bound columns omitted");
    }

    std::vector<int> states = cfg.i_list;
    if (states.empty()) {
        for (int i = 0; i <= N; ++i) states.push_back(i);
    }
    if (have_cert) {
        t.columns = {"i", "p_lower_bound", "p", "p_upper_bound"};
    } else {
        t.columns = {"i", "p"};
    }
    for (int i : states) {
        if (i < 0 || i > N) throw std::invalid_argument("state i outside {0..N}");
        const double p = fv.p[static_cast<std::size_t>(i)];
        if (have_cert) {
            const BoundReport rep = model == "wf"
                                        ? wf_fixation_bounds(cert, N, i)
                                        : moran_fixation_bounds(cert, N, i);
            t.rows.push_back({std::to_string(i), fmt_num(rep.lower), fmt_num(p),
                              fmt_num(rep.upper)});
        } else {
            t.rows.push_back({std::to_string(i), fmt_num(p)});
        }
    }
    emit(t, cfg);
    return 0;
}

int cmd_bounds(const ExperimentConfig& cfg, const std::string& model) {
    const DominanceCertificate cert = certify_dominance(cfg.game);
    Table t;
    t.command = "bounds";
    t.config = config_echo(t.command, cfg);
    t.config["model"] = model;
    t.columns = {"N", "i", "lower", "exact", "upper", "source"};
    for (int N : cfg.N_list) {
        std::vector<int> states = cfg.i_list;
        if (states.empty()) {
            for (int i = 1; i < N; ++i) states.push_back(i);
        }
        FixationVector fv;
        if (model == "wf") {
            fv = solve_fixation(ChainKernel::wright_fisher(cfg.game, N), cfg.cap);
        }
        for (int i : states) {
            if (i < 1 || i > N - 1) {
                throw std::invalid_argument("bound rows need interior i");
            }
            const BoundReport rep = model == "wf" ? wf_fixation_bounds(cert, N, i)
                                                  : moran_fixation_bounds(cert, N, i);
            const double exact =
                model == "wf" ? fv.p[static_cast<std::size_t>(i)]
                              : moran_closed_form(cfg.game, N, i);
            t.rows.push_back({std::to_string(N), std::to_string(i),
                              fmt_num(rep.lower), fmt_num(exact), fmt_num(rep.upper),
                              bound_source_name(rep.source)});
        }
    }
    emit(t, cfg);
    return 0;
}

int cmd_figure1(const ExperimentConfig& cfg, double wmin, double wmax,
                double wstep) {
    if (!(wmin > 0.0) || !(wmax <= 1.0) || !(wstep > 0.0) || wmin > wmax) {
        throw std::invalid_argument(
            "figure1 needs a w-grid inside (0,1]: 0 < wmin <= wmax <= 1, step > 0");
    }
    const int N = cfg.N_list.front();
    const int i0 = cfg.i_list.empty() ? 1 : cfg.i_list.front();

    Table t;
    t.command = "figure1";
    t.config = config_echo(t.command, cfg);
    t.config["wmin"] = wmin;
    t.config["wmax"] = wmax;
    t.config["wstep"] = wstep;

    t.columns = {"w", "p_inf", "p_mc", "stderr"};
    int idx = 0;
    for (double w = wmin; w <= wmax + 1e-12; w += wstep, ++idx) {
        GameSpec spec = cfg.game;
        spec.w = std::min(w, 1.0);
        const DominanceCertificate cert = certify_dominance(spec);
        const double p_inf = 1.0 - solve_q(cert.lambda).q;
        const ChainKernel kernel = ChainKernel::wright_fisher(spec, N);
        const McEstimate mc =
            monte_carlo_fixation(kernel, i0, cfg.replicas,
                                 cfg.seed ^ salt_of(idx, i0), run_mode(cfg));
        t.rows.push_back({fmt_num(spec.w), fmt_num(p_inf), fmt_num(mc.point),
                          fmt_num(mc.std_error)});
    }
    emit(t, cfg);
    return 0;
}

int cmd_table1(const ExperimentConfig& cfg) {
    const DominanceCertificate cert = certify_dominance(cfg.game);
    const double q = solve_q(cert.lambda).q;

    Table t;
    t.command = "table1";
    t.config = config_echo(t.command, cfg);
    t.columns = {"N", "q_N", "q_N_minus_q", "source"};
    for (int N : cfg.N_list) {
        if (N < 10) {
            throw std::invalid_argument(
                "table rows fit i = 1..10 and need N >= 10");
        }
        std::vector<std::pair<int, double>> pairs;
        std::string source;
        if (N <= cfg.cap) {
            const FixationVector fv =
                solve_fixation(ChainKernel::wright_fisher(cfg.game, N), cfg.cap);
            for (int i = 1; i <= 10; ++i) pairs.emplace_back(i, fv.p[i]);
            source = "exact";
        } else {
            const ChainKernel kernel = ChainKernel::wright_fisher(cfg.game, N);
            for (int i = 1; i <= 10; ++i) {
                const McEstimate est =
                    monte_carlo_fixation(kernel, i, cfg.replicas,
                                         cfg.seed ^ salt_of(N, i), run_mode(cfg));
                pairs.emplace_back(i, est.point);
            }
            source = "mc";
        }
        const FitResult fit = fit_qn(pairs);
        t.rows.push_back({std::to_string(N), fmt_num(fit.q_fit),
                          fmt_num(fit.q_fit - q), source});
    }
    emit(t, cfg);
    return 0;
}

int cmd_logplot(const ExperimentConfig& cfg, bool caption_literal) {
    Table t;
    t.command = "logplot";
    t.config = config_echo(t.command, cfg);
    t.config["caption_literal"] = caption_literal;
    t.columns = {"N", "i", "value"};

    std::vector<int> states = cfg.i_list;
    if (states.empty()) states = {1, 2, 3, 4, 5};

    for (int N : cfg.N_list) {
        for (int i : states) {
            if (i < 1 || i > N) {
                throw std::invalid_argument("logplot needs 1 <= i <= N");
            }
            const auto [p, src] = fixation_value(cfg, N, i, salt_of(N, i));
            const double quantity = caption_literal ? p : 1.0 - p;
            if (quantity <= 0.0) {
                std::cerr << "fixsim logplot: skipping N=" << N << " i=" << i
                          << " (quantity is zero)\n";
                t.notes.push_back("skipped N=" + std::to_string(N) +
                                  " i=" + std::to_string(i) + " (zero quantity)");
                continue;
            }
            (void)src;
            const double value = -std::log(quantity) / static_cast<double>(i);
            t.rows.push_back({std::to_string(N), std::to_string(i), fmt_num(value)});
        }
    }
    emit(t, cfg);
    return 0;
}

int cmd_fixtime(const ExperimentConfig& cfg) {
    const DominanceCertificate cert = certify_dominance(cfg.game);
    const int N = cfg.N_list.front();
    const int k = cfg.i_list.empty() ? 1 : cfg.i_list.front();
    const int J = cfg.J > 0 ? cfg.J : default_range_cap(N);

    double C0 = cfg.C0;
    Table t;
    t.command = "fixtime";
    t.config = config_echo(t.command, cfg);
    t.config["J_effective"] = J;
    if (C0 <= 0.0) {
        C0 = estimate_c0(cfg.game, N, J, cfg.c0_replicas,
                         cfg.seed ^ 0xc0c0c0c0ULL, run_mode(cfg));
        t.notes.push_back(
            "C0 = " + fmt_num(C0) +
            " estimated from coupling draws; empirical lower estimate, not "
            "a rigorous constant");
    }
    t.config["C0_effective"] = C0;

    const ChainKernel kernel = ChainKernel::wright_fisher(cfg.game, N);
    const std::vector<TimeCdfPoint> emp = empirical_time_cdf(
        kernel, k, cfg.replicas, cfg.seed, cfg.horizons, run_mode(cfg));

    t.columns = {"m", "lower", "empirical", "upper"};
    bool all_vacuous = true;
    for (const TimeCdfPoint& pt : emp) {
        const int m = static_cast<int>(pt.horizon);
        if (m < 1) throw std::invalid_argument("fixtime horizons must be >= 1");
        const TimeWindow win = fixation_time_window(k, m, N, J, cfg.eta, C0, cert);
        if (win.lower > 0.0 || win.upper < 1.0) all_vacuous = false;
        t.rows.push_back({std::to_string(m), fmt_num(win.lower),
                          fmt_num(pt.probability), fmt_num(win.upper)});
    }
    if (all_vacuous) {
        std::cerr << "fixsim fixtime: window is vacuous ([0,1]) at every "
                     "horizon; increase N or lower the horizons\n";
        t.notes.push_back("window vacuous at every horizon");
    }
    emit(t, cfg);
    return 0;
}

int cmd_couple(const ExperimentConfig& cfg, int triple_steps) {
    Table t;
    t.config = config_echo("couple", cfg);

    const int N = cfg.N_list.front();
    if (triple_steps > 0) {
        // One monotone triple path, long format.
        t.command = "couple";
        t.config["triple_steps"] = triple_steps;
        const int i0 = cfg.i_list.empty() ? N / 10 + 1 : cfg.i_list.front();
        RngStream rng(cfg.seed, 0);
        const std::vector<TripleState> path =
            monotone_triple_simulate(cfg.game, N, i0, triple_steps, rng);
        t.columns = {"step", "x1", "x2", "x3"};
        for (std::size_t s = 0; s < path.size(); ++s) {
            t.rows.push_back({std::to_string(s), std::to_string(path[s].x1),
                              std::to_string(path[s].x2),
                              std::to_string(path[s].x3)});
        }
        emit(t, cfg);
        return 0;
    }

    // Mismatch-rate table over the coupling range.
    t.command = "couple";
    const int J = cfg.J > 0 ? cfg.J : default_range_cap(N);
    WfBpCoupler coupler(cfg.game, N);
    if (coupler.certificate().lambda * J > 600.0) {
        throw std::invalid_argument(
            "mismatch table needs lambda * J <= 600 (poisson pmf cap)");
    }
    std::vector<double> rates(static_cast<std::size_t>(J) + 1, 0.0);
    double c0_hat = 0.0;
    for (int i = 1; i <= J; ++i) {
        const MaximalCoupling& coupling = coupler.coupling_at(i);
        const std::uint64_t state_seed = cfg.seed ^ salt_of(N, i);
        const auto totals = run_replicas(
            cfg.replicas, state_seed, 1, run_mode(cfg),
            [&](long long, RngStream& rng, std::vector<long long>& tally) {
                const auto [x, z] = coupling.sample(rng);
                if (x != z) ++tally[0];
            });
        rates[static_cast<std::size_t>(i)] =
            static_cast<double>(totals[0]) / static_cast<double>(cfg.replicas);
        c0_hat = std::max(c0_hat, rates[static_cast<std::size_t>(i)] *
                                      static_cast<double>(N) /
                                      std::pow(static_cast<double>(i), 1.5));
    }
    t.notes.push_back("C0_hat = " + fmt_num(c0_hat) +
                      " (empirical lower estimate, not a rigorous constant)");
    t.columns = {"i", "rate", "bound"};
    for (int i = 1; i <= J; ++i) {
        const double bound = c0_hat * std::pow(static_cast<double>(i), 1.5) /
                             static_cast<double>(N);
        t.rows.push_back({std::to_string(i),
                          fmt_num(rates[static_cast<std::size_t>(i)]),
                          fmt_num(bound)});
    }
    emit(t, cfg);
    return 0;
}

std::vector<std::pair<int, double>> read_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) {
        throw std::invalid_argument("cannot open pairs file " + path);
    }
    std::vector<std::pair<int, double>> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        int i = 0;
        double p = 0.0;
        if (std::sscanf(line.c_str(), "%d,%lf", &i, &p) == 2) {
            pairs.emplace_back(i, p);
        } else if (!pairs.empty()) {
            throw std::invalid_argument("pairs file " + path +
                                        ": malformed line '" + line + "'");
        }
        // else: header line, skipped
    }
    return pairs;
}

int cmd_fit(const ExperimentConfig& cfg, const std::string& pairs_path) {
    const std::vector<std::pair<int, double>> pairs = read_pairs(pairs_path);
    const FitResult fit = fit_qn(pairs);
    Table t;
    t.command = "fit";
    t.config = config_echo(t.command, cfg);
    t.config["pairs"] = pairs_path;
    t.columns = {"quantity", "value"};
    t.rows = {
        {"q_fit", fmt_num(fit.q_fit)},
        {"sse", fmt_num(fit.sse)},
        {"n_pairs", std::to_string(pairs.size())},
    };
    emit(t, cfg);
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
    return run_cli(args);
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"stochastic fixation toolkit for 2x2 evolutionary games"};
    app.require_subcommand(1);

    int rc = 0;
    CommonOpts opt_certify, opt_exact, opt_bounds, opt_figure1, opt_table1,
        opt_logplot, opt_fixtime, opt_couple, opt_fit;

    CLI::App* certify = app.add_subcommand("certify", "dominance certificate");
    add_common(certify, opt_certify);
    certify->callback([&] { rc = cmd_certify(resolve(opt_certify)); });

    CLI::App* exact = app.add_subcommand("exact", "exact fixation probabilities");
    add_common(exact, opt_exact);
    std::string exact_model = "wf";
    exact->add_option("--model", exact_model, "wf, moran or embedded")
        ->check(CLI::IsMember({"wf", "moran", "embedded"}));
    exact->callback([&] { rc = cmd_exact(resolve(opt_exact), exact_model); });

    CLI::App* bounds = app.add_subcommand("bounds", "sandwich bound tables");
    add_common(bounds, opt_bounds);
    std::string bounds_model = "wf";
    bounds->add_option("--model", bounds_model, "wf or moran")
        ->check(CLI::IsMember({"wf", "moran"}));
    bounds->callback([&] { rc = cmd_bounds(resolve(opt_bounds), bounds_model); });

    CLI::App* figure1 =
        app.add_subcommand("figure1", "fixation of one mutant across w");
    add_common(figure1, opt_figure1);
    double wmin = 0.05, wmax = 1.0, wstep = 0.05;
    figure1->add_option("--wmin", wmin, "grid start (> 0)");
    figure1->add_option("--wmax", wmax, "grid end (<= 1)");
    figure1->add_option("--wstep", wstep, "grid step");
    figure1->callback(
        [&] { rc = cmd_figure1(resolve(opt_figure1), wmin, wmax, wstep); });

    CLI::App* table1 = app.add_subcommand("table1", "fitted q_N against q");
    add_common(table1, opt_table1);
    table1->callback([&] {
        ExperimentConfig cfg = resolve(opt_table1);
        if (!opt_table1.N->count() && opt_table1.config_path.empty()) {
            cfg.N_list = {10, 20, 50, 100, 500, 1000};
        }
        rc = cmd_table1(cfg);
    });

    CLI::App* logplot = app.add_subcommand("logplot", "per-capita log quantities");
    add_common(logplot, opt_logplot);
    bool caption_literal = false;
    logplot->add_flag("--caption-literal", caption_literal,
                      "emit -(1/i) log p instead of -(1/i) log(1-p)");
    logplot->callback(
        [&] { rc = cmd_logplot(resolve(opt_logplot), caption_literal); });

    CLI::App* fixtime = app.add_subcommand("fixtime", "absorption time window");
    add_common(fixtime, opt_fixtime);
    fixtime->callback([&] { rc = cmd_fixtime(resolve(opt_fixtime)); });

    CLI::App* couple = app.add_subcommand("couple", "coupling diagnostics");
    add_common(couple, opt_couple);
    int triple_steps = 0;
    couple->add_option("--triple-steps", triple_steps,
                       "emit one monotone triple path of this many steps");
    couple->callback([&] { rc = cmd_couple(resolve(opt_couple), triple_steps); });

    CLI::App* fit = app.add_subcommand("fit", "least-squares q fit of (i,p) pairs");
    add_common(fit, opt_fit);
    std::string pairs_path;
    fit->add_option("--pairs", pairs_path, "CSV file of i,p rows")->required();
    fit->callback([&] { rc = cmd_fit(resolve(opt_fit), pairs_path); });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const DomainError& e) {
        std::cerr << "fixsim: domain error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "fixsim: numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "fixsim: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fixsim: " << e.what() << "\n";
        return 4;
    }
    return rc;
}

}  // namespace fixsim
