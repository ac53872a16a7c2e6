// signet: command-line front end.
//
//   signet <command> [options] [--config run.json]
//
// A config file is a JSON object {"schema": 1, "command": ..., "<option>": value}
// whose keys are long option names; options given on the command line win.

#include "signet/dynamics_ct.hpp"
#include "signet/dynamics_dt.hpp"
#include "signet/error.hpp"
#include "signet/frustration.hpp"
#include "signet/graph.hpp"
#include "signet/io.hpp"
#include "signet/nonlinearity.hpp"
#include "signet/parallel.hpp"
#include "signet/rng.hpp"
#include "signet/spectra.hpp"
#include "signet/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace signet;

namespace {

constexpr int kSchema = 1;

// ---------------------------------------------------------------- config

std::string config_token(const Json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    if (v.is_array()) {
        std::string out;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (k) out += ",";
            out += config_token(v[k], key + "[" + std::to_string(k) + "]");
        }
        return out;
    }
    throw Error(ErrorCode::ParseError, "cli.config", "unsupported value for '" + key + "'");
}

// Splices the config file into the argument list right after the command
// name, so that later command-line occurrences override it.
std::vector<std::string> expand_config(std::vector<std::string> args, const std::vector<std::string>& commands) {
    std::string path;
    for (std::size_t k = 1; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) {
            path = args[k + 1];
            args.erase(args.begin() + k, args.begin() + k + 2);
            break;
        }
        if (args[k].rfind("--config=", 0) == 0) {
            path = args[k].substr(9);
            args.erase(args.begin() + k);
            break;
        }
    }
    if (path.empty()) return args;

    const std::string text = read_file(path);
    Json cfg;
    try {
        cfg = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "cli.config", path + ": " + e.what());
    }
    if (!cfg.is_object()) throw Error(ErrorCode::ParseError, "cli.config", path + ": expected a JSON object");
    if (!cfg.contains("schema") || cfg["schema"] != kSchema)
        throw Error(ErrorCode::ParseError, "cli.config", path + ": 'schema' must be 1");

    // The command may come from the file when none is on the command line.
    std::size_t cmd = 1;
    while (cmd < args.size() && std::find(commands.begin(), commands.end(), args[cmd]) == commands.end()) ++cmd;
    if (cmd == args.size()) {
        if (!cfg.contains("command") || !cfg["command"].is_string())
            throw Error(ErrorCode::ParseError, "cli.config", path + ": no command given");
        args.insert(args.begin() + 1, cfg["command"].get<std::string>());
        cmd = 1;
    } else if (cfg.contains("command") && cfg["command"] != args[cmd]) {
        throw Error(ErrorCode::ParseError, "cli.config",
                    path + ": file is for '" + cfg["command"].get<std::string>() + "', not '" + args[cmd] + "'");
    }

    std::vector<std::string> inject;
    for (const auto& [key, value] : cfg.items()) {
        if (key == "schema" || key == "command") continue;
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (value.is_boolean()) {
            if (value.get<bool>()) inject.push_back(flag);
            continue;
        }
        if (value.is_null()) continue;
        inject.push_back(flag);
        inject.push_back(config_token(value, key));
    }
    args.insert(args.begin() + cmd + 1, inject.begin(), inject.end());
    return args;
}

// ---------------------------------------------------------------- options

struct GraphSource {
    std::string path;
    int n = 20;
    double p = 0.5;
    double neg = 0.3;
    double w_lo = 0.0;
    double w_hi = 1.0;
    std::uint64_t graph_seed = 0;
    double regularize = 0.0;
};

struct ProfileSource {
    std::string kind = "tanh";
    std::string params;
};

struct StartSource {
    std::string x0 = "random";
    double scale = 1.0;
    std::uint64_t seed = 0;
};

struct Outputs {
    std::string json;
    std::string csv;
};

void add_graph_options(CLI::App* c, GraphSource& g) {
    c->add_option("--graph", g.path, "graph file (.json, or .csv edge list); otherwise a random graph");
    c->add_option("--n", g.n, "random graph: vertices")->check(CLI::PositiveNumber);
    c->add_option("--p", g.p, "random graph: edge probability")->check(CLI::Range(0.0, 1.0));
    c->add_option("--neg", g.neg, "random graph: probability an edge is negative")->check(CLI::Range(0.0, 1.0));
    c->add_option("--w-lo", g.w_lo, "random graph: weights uniform on (w-lo, w-hi]");
    c->add_option("--w-hi", g.w_hi, "random graph: upper weight");
    c->add_option("--graph-seed", g.graph_seed, "random graph: seed");
    c->add_option("--regularize", g.regularize, "scale to constant absolute degree (0 = off)");
}

void add_profile_options(CLI::App* c, ProfileSource& p) {
    c->add_option("--psi", p.kind, "sigmoid: tanh | rational")->check(CLI::IsMember({"tanh", "rational"}));
    c->add_option("--psi-params", p.params, "comma separated parameters (rational: shape)");
}

void add_start_options(CLI::App* c, StartSource& s) {
    c->add_option("--x0", s.x0, "initial state: zero | random | path to a state file");
    c->add_option("--x0-scale", s.scale, "random x0 is uniform on [-scale, scale]");
    c->add_option("--seed", s.seed, "seed for random x0");
}

void add_outputs(CLI::App* c, Outputs& o, const char* csv_help) {
    c->add_option("--out", o.json, "JSON result file");
    if (csv_help) c->add_option("--csv", o.csv, csv_help);
}

struct LoadedGraph {
    SignedGraph graph;
    Json meta;
};

LoadedGraph load(const GraphSource& src) {
    if (!src.path.empty()) {
        GraphFile f = load_graph(src.path);
        Json meta = f.meta.is_null() ? Json::object() : f.meta;
        meta["source"] = src.path;
        if (src.regularize > 0.0) {
            meta["regularized_degree"] = src.regularize;
            return {regularize_degrees(f.graph, {.target_degree = src.regularize}), meta};
        }
        return {std::move(f.graph), meta};
    }
    const RandomGraphParams params{.n = src.n,
                                   .edge_prob = src.p,
                                   .negative_prob = src.neg,
                                   .weight_low = src.w_lo,
                                   .weight_high = src.w_hi,
                                   .seed = src.graph_seed};
    SignedGraph g = random_signed_graph(params);
    Json meta;
    meta["generator"] = "erdos_renyi_signed";
    meta["n"] = src.n;
    meta["edge_prob"] = src.p;
    meta["negative_prob"] = src.neg;
    meta["weight_range"] = {src.w_lo, src.w_hi};
    meta["seed"] = src.graph_seed;
    if (src.regularize > 0.0) {
        meta["regularized_degree"] = src.regularize;
        g = regularize_degrees(g, {.target_degree = src.regularize});
    }
    return {std::move(g), meta};
}

std::vector<double> parse_params(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "cli.psi_params", "not a number: '" + item + "'");
        }
    }
    return out;
}

NonlinearityProfile profile(const ProfileSource& p, int n) { return make_profile(p.kind, parse_params(p.params), n); }

Json profile_json(const ProfileSource& p) {
    return {{"kind", p.kind}, {"params", parse_params(p.params)}};
}

Vector initial_state(const StartSource& s, int n) {
    if (s.x0 == "zero") return Vector::Zero(n);
    if (s.x0 == "random") {
        Rng rng(s.seed);
        Vector x(n);
        for (int i = 0; i < n; ++i) x(i) = rng.uniform(-s.scale, s.scale);
        return x;
    }
    return parse_state(read_file(s.x0), n);
}

Json start_json(const StartSource& s) {
    Json j;
    j["x0"] = s.x0;
    if (s.x0 == "random") {
        j["scale"] = s.scale;
        j["seed"] = s.seed;
    }
    return j;
}

int default_jobs() {
    const char* env = std::getenv("SIGNET_JOBS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw Error(ErrorCode::BadArgument, "cli.jobs", "SIGNET_JOBS must be a positive integer");
    return static_cast<int>(v);
}

void emit(const Outputs& o, const Json& j) {
    if (!o.json.empty()) write_file(o.json, dump_json(j) + "\n");
}

// ---------------------------------------------------------------- summary

std::string num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string vec(const Vector& v, int limit = 12) {
    std::string out = "(";
    const int shown = std::min<int>(static_cast<int>(v.size()), limit);
    for (int k = 0; k < shown; ++k) out += (k ? ", " : "") + num(v(k));
    if (shown < v.size()) out += ", ... (" + std::to_string(v.size()) + " values)";
    return out + ")";
}

std::string sig(const Signature& s) {
    std::string out;
    for (int v : s) out += v > 0 ? '+' : '-';
    return out;
}

void line(const std::string& key, const std::string& value) {
    std::printf("%-14s = %s\n", key.c_str(), value.c_str());
}

void graph_lines(const SignedGraph& g) {
    int neg = 0;
    for (const auto& e : g.edges()) neg += e.weight < 0;
    line("n", std::to_string(g.n()));
    line("edges", std::to_string(g.edge_count()) + " (" + std::to_string(neg) + " negative)");
    line("max degree", num(g.max_degree()) + (g.is_degree_regular() ? " (regular)" : ""));
}

void threshold_lines(const SpectralSummary& s) {
    line("lambda", vec(s.eigs));
    line("pi1", num(s.pi1));
    line("pi2", num(s.pi2));
    if (s.pi1d) line("pi1d", num(*s.pi1d) + " (eps_step " + num(*s.step_size) + ")");
}

std::string onset_text(const SweepResult& r, OnsetKind kind) {
    try {
        const Onset o = estimate_onset(r, kind);
        return num(o.value) + " +- " + num(o.half_width);
    } catch (const Error&) {
        return "none in grid";
    }
}

// ---------------------------------------------------------------- commands

int cmd_gen(const GraphSource& src, const Outputs& out) {
    const LoadedGraph lg = load(src);
    const Json j = graph_to_json(lg.graph, lg.meta);
    if (out.json.empty())
        std::cout << dump_json(j) << "\n";
    else
        emit(out, j);
    if (!out.csv.empty()) {
        std::ostringstream os;
        os << "i,j,w\n";
        for (const auto& e : lg.graph.edges()) os << e.i << "," << e.j << "," << format_double(e.weight) << "\n";
        write_file(out.csv, os.str());
    }
    if (!out.json.empty()) {
        graph_lines(lg.graph);
        line("balanced", is_structurally_balanced(lg.graph).balanced ? "true" : "false");
    }
    return 0;
}

int cmd_analyze(const GraphSource& src, double eps_step, bool exact, const HeuristicOptions& hopt,
                const Outputs& out) {
    const LoadedGraph lg = load(src);
    const SignedGraph& g = lg.graph;
    const std::optional<double> step = eps_step > 0 ? std::optional<double>(eps_step) : std::nullopt;
    const SpectralSummary s = thresholds(g, step);
    const BalanceResult bal = is_structurally_balanced(g);
    const FrustrationResult fr = exact ? frustration_exact(g) : frustration_auto(g, hopt);
    const BoundReport br = check_pi1_bounds(g, s, fr);

    graph_lines(g);
    line("balanced", bal.balanced ? "true" : "false");
    threshold_lines(s);
    line("frustration", num(fr.value) + (fr.exact ? " (exact)" : " (heuristic)"));
    line("pi1 bound", "1 <= " + num(s.pi1) + " <= min(" + num(br.frustration_ceiling) + ", " + num(s.pi2) + "): " +
                          (br.holds ? "holds" : "VIOLATED") + (br.symmetric_L ? "" : " (degrees not regular)"));
    Json j;
    j["command"] = "analyze";
    j["graph"] = lg.meta;
    j["balanced"] = bal.balanced;
    if (bal.signature) j["balancing_signature"] = *bal.signature;
    j["spectrum"] = to_json(s);
    j["frustration"] = to_json(fr);
    j["pi1_bounds"] = to_json(br);
    if (step && step.value() * g.max_degree() <= 1.0) {
        const FirstBifurcation fb = classify_first_bifurcation(s);
        line("first bifurc.", std::string(to_string(fb)));
        j["first_bifurcation"] = std::string(to_string(fb));
    } else if (step) {
        line("step regime", step.value() * g.max_degree() < 2.0 ? "stable (eps max delta > 1)" : "too large");
    }
    emit(out, j);
    return 0;
}

int cmd_frustration(const GraphSource& src, bool exact, const HeuristicOptions& hopt, const Outputs& out) {
    const LoadedGraph lg = load(src);
    const FrustrationResult fr = exact ? frustration_exact(lg.graph) : frustration_auto(lg.graph, hopt);
    line("n", std::to_string(lg.graph.n()));
    line("eps", num(fr.value) + (fr.exact ? " (exact)" : " (heuristic)"));
    line("method", fr.method);
    line("signature", sig(fr.signature));
    line("ceiling", num(lg.graph.n() / (lg.graph.n() - 2.0 * fr.value)) + "  (n / (n - 2 eps))");
    Json j;
    j["command"] = "frustration";
    j["graph"] = lg.meta;
    j["frustration"] = to_json(fr);
    emit(out, j);
    return 0;
}

struct CtArgs {
    double pi = 0.0;
    IntegrateOptions integ;
    int equilibria = 0;
    std::string eq_csv;
};

int cmd_simulate_ct(const GraphSource& src, const ProfileSource& ps, const StartSource& ss, const CtArgs& a,
                    const Outputs& out) {
    const LoadedGraph lg = load(src);
    const SignedGraph& g = lg.graph;
    const NonlinearityProfile psi = profile(ps, g.n());
    const SpectralSummary s = thresholds(g);
    const Vector x0 = initial_state(ss, g.n());
    const Trajectory tr = integrate(g, psi, a.pi, x0, a.integ);
    const Vector& xt = tr.terminal();
    const StabilityResult st = classify_stability(g, psi, a.pi, xt);

    line("pi", num(a.pi) + "  (pi1 " + num(s.pi1) + ", pi2 " + num(s.pi2) + ")");
    line("steps", std::to_string(tr.steps) + (tr.converged ? " (stopped at equilibrium)" : ""));
    line("terminal", vec(xt));
    line("||x||_1", num(xt.cwiseAbs().sum()));
    line("||f(x)||_inf", num(vector_field(g, psi, a.pi, xt).cwiseAbs().maxCoeff()));
    line("stability", std::string(to_string(st.kind)) + " (leading " + num(st.leading) + ")");
    line("V(x0) -> V(x)", num(lyapunov_value(psi, x0)) + " -> " + num(lyapunov_value(psi, xt)));

    Json j;
    j["command"] = "simulate-ct";
    j["graph"] = lg.meta;
    j["profile"] = profile_json(ps);
    j["start"] = start_json(ss);
    j["pi"] = a.pi;
    j["thresholds"] = to_json(s);
    j["method"] = tr.method;
    j["step"] = tr.step;
    j["steps"] = tr.steps;
    j["converged"] = tr.converged;
    j["terminal"] = std::vector<double>(xt.data(), xt.data() + xt.size());
    j["stability"] = std::string(to_string(st.kind));
    if (a.equilibria > 0) {
        const EquilibriumSet set =
            find_equilibria(g, psi, a.pi, {.n_seeds = a.equilibria, .seed = ss.seed, .warm_starts = {xt}});
        line("equilibria", std::to_string(set.records.size()) + " (" + std::to_string(set.nontrivial_count()) +
                               " nontrivial)");
        j["equilibria"] = to_json(set);
        if (!a.eq_csv.empty()) {
            std::ostringstream os;
            write_equilibria_csv(os, set);
            write_file(a.eq_csv, os.str());
        }
    }
    if (!out.csv.empty()) {
        std::ostringstream os;
        write_trajectory_csv(os, tr);
        write_file(out.csv, os.str());
    }
    emit(out, j);
    return 0;
}

int cmd_simulate_dt(const GraphSource& src, const ProfileSource& ps, const StartSource& ss, double pi,
                    double eps_step, SimulateOptions sim, const Outputs& out) {
    const LoadedGraph lg = load(src);
    const SignedGraph& g = lg.graph;
    const NonlinearityProfile psi = profile(ps, g.n());
    const SpectralSummary s = thresholds(g, eps_step);
    sim.record = !out.csv.empty();
    const DtOutcome o = simulate(g, psi, pi, eps_step, initial_state(ss, g.n()), sim);
    const NecessaryConditionCheck nc = check_necessary_conditions(o, s);

    line("pi", num(pi) + "  (pi1 " + num(s.pi1) + ", pi1d " + num(*s.pi1d) + ")");
    line("eps_step", num(eps_step) + "  (eps max delta " + num(eps_step * g.max_degree()) + ")");
    line("outcome", std::string(to_string(o.kind)) + " after " + std::to_string(o.iterations) + " iterations");
    line("state", vec(o.state));
    if (o.kind == DtKind::Period2) line("amplitude", num(o.amplitude()));
    line("||x||_1", num(o.state.cwiseAbs().sum()));
    if (o.regime == StepRegime::Contractive) line("first bifurc.", std::string(to_string(classify_first_bifurcation(s))));
    line("necessary", std::string(nc.fixed_point_ok && nc.period2_ok ? "consistent" : "VIOLATED"));

    Json j;
    j["command"] = "simulate-dt";
    j["graph"] = lg.meta;
    j["profile"] = profile_json(ps);
    j["start"] = start_json(ss);
    j["thresholds"] = to_json(s);
    j["outcome"] = to_json(o);
    j["necessary_conditions"] = {{"fixed_point_ok", nc.fixed_point_ok}, {"period2_ok", nc.period2_ok}};
    if (!out.csv.empty()) {
        std::vector<double> t(o.trajectory.size());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k);
        std::ostringstream os;
        write_trajectory_csv(os, t, o.trajectory);
        write_file(out.csv, os.str());
    }
    emit(out, j);
    return 0;
}

struct SweepArgs {
    double from = 0.0, to = 0.0, step = 0.0;
    double eps_step = 0.0;
    SweepOptions opts;
};

int cmd_sweep(bool dt, const GraphSource& src, const ProfileSource& ps, SweepArgs a, const Outputs& out) {
    const LoadedGraph lg = load(src);
    const SignedGraph& g = lg.graph;
    const NonlinearityProfile psi = profile(ps, g.n());
    const std::vector<double> grid = make_grid(a.from, a.to, a.step);
    const SweepResult r = dt ? sweep_dt(g, psi, grid, a.eps_step, a.opts) : sweep_ct(g, psi, grid, a.opts);

    line("grid", num(grid.front()) + " : " + num(a.step) + " : " + num(grid.back()) + "  (" +
                     std::to_string(grid.size()) + " points)");
    threshold_lines(r.thresholds);
    line("pi1 onset", onset_text(r, OnsetKind::Nontrivial));
    line("pi2 onset", onset_text(r, OnsetKind::Multi));
    if (dt) {
        line("cycle onset", onset_text(r, OnsetKind::Cycle));
        int undecided = 0;
        for (const auto& c : r.cells) undecided += c.undecided;
        line("undecided", std::to_string(undecided));
        line("violations", std::to_string(r.violations.size()));
    }
    line("branches", std::to_string(r.branch_count));

    Json j = sweep_summary(r);
    j["command"] = dt ? "sweep-dt" : "sweep-ct";
    j["graph"] = lg.meta;
    j["profile"] = profile_json(ps);
    j["seed"] = a.opts.seed;
    j["seeds_per_point"] = a.opts.seeds_per_point;
    if (!out.csv.empty()) {
        std::ostringstream os;
        write_sweep_csv(os, r);
        write_file(out.csv, os.str());
    }
    emit(out, j);
    return 0;
}

struct EnsembleArgs {
    int count = 100;
    std::uint64_t seed = 0;
    bool unbalanced_only = false;
    int jobs = 1;
    HeuristicOptions heuristic;
};

struct Member {
    std::uint64_t seed = 0;
    int attempts = 0;
    SpectralSummary s;
    FrustrationResult fr;
    BoundReport br;
    bool balanced = false;
    bool regular = false;
    int unscalable = 0;
};

int cmd_ensemble(const GraphSource& src, const EnsembleArgs& a, const Outputs& out) {
    if (a.count < 1) throw Error(ErrorCode::BadArgument, "cli.ensemble", "--count must be positive");
    std::vector<Member> members(a.count);
    parallel_for(a.count, a.jobs, [&](int k) {
        Member& m = members[k];
        GraphSource gs = src;
        // Redraw until unbalanced when asked; each member has its own seed stream.
        for (std::uint64_t t = 0;; ++t) {
            gs.graph_seed = derive_seed(derive_seed(a.seed, static_cast<std::uint64_t>(k)), t);
            gs.path.clear();
            if (t >= 1000) throw Error(ErrorCode::NoConvergence, "cli.ensemble", "no usable graph in 1000 draws");
            std::optional<SignedGraph> drawn;
            try {
                drawn = load(gs).graph;
            } catch (const Error& e) {
                // Graphs without a constant-degree scaling (pendant vertices) are redrawn.
                if (e.code() != ErrorCode::NoConvergence) throw;
                ++m.unscalable;
                continue;
            }
            const SignedGraph& g = *drawn;
            m.balanced = is_structurally_balanced(g).balanced;
            if (m.balanced && a.unbalanced_only) continue;
            m.seed = gs.graph_seed;
            m.attempts = static_cast<int>(t) + 1;
            m.s = thresholds(g);
            m.fr = frustration_auto(g, a.heuristic);
            m.br = check_pi1_bounds(g, m.s, m.fr);
            m.regular = g.is_degree_regular(1e-8);
            break;
        }
    });

    int holds = 0, balanced = 0, unscalable = 0;
    std::vector<double> gaps;
    double mean_eps = 0.0;
    for (const Member& m : members) {
        holds += m.br.holds;
        unscalable += m.unscalable;
        balanced += m.balanced;
        mean_eps += m.fr.value / a.count;
        if (!m.balanced && m.s.lambda1 < 2.0 - m.s.lambda_n) gaps.push_back(m.br.frustration_ceiling / m.s.pi1 - 1.0);
    }
    double median = std::nan("");
    if (!gaps.empty()) {
        std::sort(gaps.begin(), gaps.end());
        const std::size_t h = gaps.size() / 2;
        median = gaps.size() % 2 ? gaps[h] : 0.5 * (gaps[h - 1] + gaps[h]);
    }

    line("graphs", std::to_string(a.count) + " (n " + std::to_string(src.n) + ", p " + num(src.p) + ", neg " +
                       num(src.neg) + ")");
    line("balanced", std::to_string(balanced));
    if (src.regularize > 0.0) line("redrawn", std::to_string(unscalable) + " (no constant-degree scaling)");
    line("mean eps", num(mean_eps));
    line("pi1 bound", std::to_string(holds) + " / " + std::to_string(a.count) + " hold");
    line("median gap", (gaps.empty() ? std::string("n/a") : num(median)) + "  (ceiling / pi1 - 1, lambda1 < 2 - lambdan, " +
                           std::to_string(gaps.size()) + " graphs)");

    Json j;
    j["command"] = "ensemble";
    Json gen;
    gen["n"] = src.n;
    gen["edge_prob"] = src.p;
    gen["negative_prob"] = src.neg;
    gen["weight_range"] = {src.w_lo, src.w_hi};
    gen["regularized_degree"] = src.regularize;
    gen["seed"] = a.seed;
    gen["unbalanced_only"] = a.unbalanced_only;
    j["generator"] = gen;
    j["count"] = a.count;
    j["balanced"] = balanced;
    j["bound_holds"] = holds;
    j["redrawn_unscalable"] = unscalable;
    j["mean_frustration"] = mean_eps;
    j["median_gap"] = gaps.empty() ? Json(nullptr) : Json(median);
    j["gap_subset"] = gaps.size();
    emit(out, j);

    if (!out.csv.empty()) {
        std::ostringstream os;
        os << "index,seed,balanced,regular,lambda1,lambda2,lambda_n,pi1,pi2,eps,exact,ceiling,bound_holds\n";
        for (int k = 0; k < a.count; ++k) {
            const Member& m = members[k];
            os << k << "," << m.seed << "," << m.balanced << "," << m.regular << "," << format_double(m.s.lambda1)
               << "," << format_double(m.s.lambda2) << "," << format_double(m.s.lambda_n) << ","
               << format_double(m.s.pi1) << "," << format_double(m.s.pi2) << "," << format_double(m.fr.value) << ","
               << m.fr.exact << "," << format_double(m.br.frustration_ceiling) << "," << m.br.holds << "\n";
        }
        write_file(out.csv, os.str());
    }
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Opinion dynamics on signed networks: thresholds, frustration, simulation and sweeps.", "signet"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", "signet 0.1.0");
    app.footer("Any command accepts --config FILE (JSON, \"schema\": 1); command-line options win.\n"
               "SIGNET_JOBS sets the default --jobs.");

    GraphSource gsrc;
    ProfileSource psrc;
    StartSource ssrc;
    Outputs outs;
    HeuristicOptions hopt;
    bool exact = false;
    double eps_step = 0.0;
    int jobs = default_jobs();

    auto* gen = app.add_subcommand("gen", "generate a random signed graph");
    add_graph_options(gen, gsrc);
    add_outputs(gen, outs, "also write an i,j,w edge list");

    auto* analyze = app.add_subcommand("analyze", "spectrum, thresholds, balance and frustration");
    add_graph_options(analyze, gsrc);
    analyze->add_option("--eps-step", eps_step, "Euler step; adds pi1d and the first-bifurcation type");
    analyze->add_flag("--exact", exact, "exhaustive frustration (n <= 24)");
    analyze->add_option("--restarts", hopt.restarts, "heuristic restarts");
    analyze->add_option("--seed", hopt.seed, "heuristic seed");
    add_outputs(analyze, outs, nullptr);

    auto* frus = app.add_subcommand("frustration", "frustration index and optimal signature");
    add_graph_options(frus, gsrc);
    frus->add_flag("--exact", exact, "exhaustive search (n <= 24)");
    frus->add_option("--restarts", hopt.restarts, "heuristic restarts");
    frus->add_option("--seed", hopt.seed, "heuristic seed");
    add_outputs(frus, outs, nullptr);

    CtArgs ct;
    auto* sct = app.add_subcommand("simulate-ct", "integrate the continuous-time model");
    add_graph_options(sct, gsrc);
    add_profile_options(sct, psrc);
    add_start_options(sct, ssrc);
    sct->add_option("--pi", ct.pi, "social effort")->required();
    sct->add_option("--horizon", ct.integ.horizon, "final time");
    sct->add_option("--dt", ct.integ.step, "RK4 step");
    sct->add_option("--stop-tol", ct.integ.stop_tol, "stop once ||f||_inf falls below this (0 = never)");
    sct->add_flag("--adaptive", ct.integ.adaptive, "step-doubling refinement");
    sct->add_option("--local-tol", ct.integ.local_tol, "adaptive local error target");
    sct->add_option("--record-every", ct.integ.record_every, "keep every k-th state (0 = ends only)");
    sct->add_option("--equilibria", ct.equilibria, "also search equilibria with this many seeds");
    sct->add_option("--eq-csv", ct.eq_csv, "equilibria CSV (pi,branch_id,norm2,norm1,stability)");
    add_outputs(sct, outs, "trajectory CSV (t,x1..xn)");

    double dt_pi = 0.0;
    SimulateOptions sim;
    auto* sdt = app.add_subcommand("simulate-dt", "iterate the Euler map");
    add_graph_options(sdt, gsrc);
    add_profile_options(sdt, psrc);
    add_start_options(sdt, ssrc);
    sdt->add_option("--pi", dt_pi, "social effort")->required();
    sdt->add_option("--eps-step", eps_step, "Euler step")->required()->check(CLI::PositiveNumber);
    sdt->add_option("--iters", sim.max_iters, "iteration budget");
    sdt->add_option("--tol", sim.tol, "fixed point / cycle tolerance");
    add_outputs(sdt, outs, "trajectory CSV (t = iteration)");

    SweepArgs sw_ct, sw_dt;
    sw_ct.from = sw_ct.step = 0.005;
    sw_ct.to = 4.0;
    sw_dt.from = sw_dt.step = 0.01;
    sw_dt.to = 3.0;
    auto add_sweep = [&](CLI::App* c, SweepArgs& a) {
        add_graph_options(c, gsrc);
        add_profile_options(c, psrc);
        c->add_option("--from", a.from, "first pi");
        c->add_option("--to", a.to, "last pi");
        c->add_option("--step", a.step, "grid spacing")->check(CLI::PositiveNumber);
        c->add_option("--seeds-per-point", a.opts.seeds_per_point, "random starts per grid point");
        c->add_option("--seed", a.opts.seed, "base seed");
        c->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
        c->add_flag("--no-warm", [&a](std::int64_t) { a.opts.warm_pass = false; }, "skip the continuation pass");
        add_outputs(c, outs, "branch CSV (pi,branch,norm1,norm2,stability,kind)");
    };
    auto* swct = app.add_subcommand("sweep-ct", "equilibrium branches over a pi grid");
    add_sweep(swct, sw_ct);
    auto* swdt = app.add_subcommand("sweep-dt", "fixed points and period-2 cycles over a pi grid");
    add_sweep(swdt, sw_dt);
    swdt->add_option("--eps-step", sw_dt.eps_step, "Euler step")->required()->check(CLI::PositiveNumber);
    swdt->add_option("--iters", sw_dt.opts.simulate.max_iters, "iteration budget per start");

    EnsembleArgs ens;
    auto* ensemble = app.add_subcommand("ensemble", "thresholds, frustration and pi1 bounds over random graphs");
    add_graph_options(ensemble, gsrc);
    ensemble->add_option("--count", ens.count, "number of graphs");
    ensemble->add_option("--seed", ens.seed, "base seed; graph k uses a stream derived from it");
    ensemble->add_flag("--unbalanced-only", ens.unbalanced_only, "redraw balanced graphs");
    ensemble->add_option("--restarts", ens.heuristic.restarts, "heuristic restarts (n > 24)");
    ensemble->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    add_outputs(ensemble, outs, "per-graph CSV");

    std::vector<std::string> args(argv, argv + argc);
    std::vector<std::string> commands;
    for (const auto* sub : app.get_subcommands({})) commands.push_back(sub->get_name());
    args = expand_config(std::move(args), commands);
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    try {
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*gen) return cmd_gen(gsrc, outs);
    if (*analyze) return cmd_analyze(gsrc, eps_step, exact, hopt, outs);
    if (*frus) return cmd_frustration(gsrc, exact, hopt, outs);
    if (*sct) return cmd_simulate_ct(gsrc, psrc, ssrc, ct, outs);
    if (*sdt) return cmd_simulate_dt(gsrc, psrc, ssrc, dt_pi, eps_step, sim, outs);
    if (*swct || *swdt) {
        SweepArgs& a = *swct ? sw_ct : sw_dt;
        a.opts.jobs = jobs;
        return cmd_sweep(static_cast<bool>(*swdt), gsrc, psrc, a, outs);
    }
    ens.jobs = jobs;
    ens.heuristic.seed = ens.seed;
    return cmd_ensemble(gsrc, ens, outs);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "signet: error in " << e.what() << "\n";
        return is_input_error(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "signet: error: " << e.what() << "\n";
        return 3;
    }
}
