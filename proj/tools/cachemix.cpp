#include "cachemix/cachemix.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using namespace cachemix;
using json = nlohmann::json;

namespace {

enum Exit { ok = 0, internal_error = 1, usage = 2, capacity = 3, no_convergence = 4 };

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::too_large: return capacity;
    case ErrorKind::no_convergence: return no_convergence;
    case ErrorKind::internal: return internal_error;
    default: return usage;
    }
}

// Workload flags shared by the analysis commands.
struct DistFlags {
    std::size_t n = 0;
    double alpha = 0.8;
    std::string probs;

    void add(CLI::App* app, bool need_n = true) {
        auto* o = app->add_option("--n", n, "library size");
        if (need_n) o->check(CLI::PositiveNumber);
        app->add_option("--alpha", alpha, "Zipf exponent")->capture_default_str();
        app->add_option("--probs", probs, "explicit comma-separated popularity vector (overrides --alpha)");
    }

    PopularityDist make() const {
        if (!probs.empty()) {
            std::vector<double> p;
            for (const auto& x : detail::split(probs, ',')) p.push_back(detail::parse_double(x, "probability"));
            require(n == 0 || n == p.size(), ErrorKind::invalid_parameter, "--n disagrees with the length of --probs");
            return PopularityDist::from_probs(std::move(p));
        }
        require(n >= 1, ErrorKind::invalid_parameter, "--n is required unless --probs is given");
        return make_zipf(n, alpha);
    }
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) fail(ErrorKind::io_error, "cannot write '" + path + "'");
    return file;
}

json options_of(const CLI::App* sub) {
    json o = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
        std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
        if (opt->count() > 0) {
            auto r = opt->results();
            if (opt->get_type_size() == 0 && r.empty()) {
                o[name] = true;
            } else if (r.size() == 1) {
                o[name] = r.front();
            } else {
                o[name] = r;
            }
        } else if (!opt->get_default_str().empty()) {
            o[name] = opt->get_default_str();
        }
    }
    return o;
}

struct Manifest {
    std::string path;
    std::string primary;

    void write(const CLI::App* sub, const std::vector<std::string>& argv, const json& extra) const {
        std::string target = path;
        if (target.empty()) {
            if (primary.empty() || primary == "-") return;
            target = primary + ".manifest.json";
        }
        json m;
        m["tool"] = "cachemix";
        m["version"] = version;
        m["command"] = sub->get_name();
        m["argv"] = argv;
        m["options"] = options_of(sub);
        m["outputs"] = primary.empty() || primary == "-" ? json::array() : json::array({primary});
        for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
        std::ofstream f(target, std::ios::binary);
        if (!f) fail(ErrorKind::io_error, "cannot write manifest '" + target + "'");
        f << m.dump(2) << '\n';
    }
};

std::vector<PolicyConfig> parse_policies(const std::vector<std::string>& specs, std::size_t m) {
    require(!specs.empty(), ErrorKind::invalid_parameter, "at least one --policy is required");
    std::vector<PolicyConfig> out;
    for (const auto& s : specs) out.push_back(policy_for_cache_size(s, m));
    return out;
}

std::string mc_hint(const std::string& policy, std::size_t n, std::size_t m, const DistFlags& d) {
    std::ostringstream os;
    os << "cachemix sim --policy " << policy << " --m " << m << " --n " << n << " --alpha " << d.alpha
       << " --count 10000000 --burnin 1000000";
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);

    std::function<int(std::vector<std::string>)> run_cli;
    run_cli = [&](std::vector<std::string> a) -> int {
        CLI::App app{"Cache eviction policies as exact Markov chains: simulation, stationary analysis, mixing and learning error"};
        app.require_subcommand(1);
        app.set_version_flag("--version", std::string(version));
        Manifest manifest;
        std::string out_path;

        // gen
        auto* gen = app.add_subcommand("gen", "generate a synthetic request trace");
        DistFlags gdist;
        std::size_t gcount = 0;
        std::uint64_t gseed = 1;
        double gmod = 0.0;
        std::string gmode = "full", gformat = "lines";
        gen->add_option("--n", gdist.n, "library size")->required()->check(CLI::PositiveNumber);
        gen->add_option("--alpha", gdist.alpha, "Zipf exponent")->required();
        gen->add_option("--count", gcount, "number of requests")->required()->check(CLI::PositiveNumber);
        gen->add_option("--seed", gseed, "random seed")->capture_default_str();
        gen->add_option("--modulate", gmod, "per-request re-ranking probability (0 = stationary IRM)");
        gen->add_option("--mode", gmode, "re-ranking mode")->check(CLI::IsMember({"full", "top"}))->capture_default_str();
        gen->add_option("--format", gformat, "trace format")->check(CLI::IsMember({"lines", "csv"}))->capture_default_str();
        gen->add_option("-o,--output", out_path, "output file")->required();
        gen->add_option("--manifest", manifest.path, "manifest path (default <output>.manifest.json)");

        // sim
        auto* sim = app.add_subcommand("sim", "simulate policies on a synthetic or recorded request stream");
        DistFlags sdist;
        std::vector<std::string> spolicies;
        std::size_t sm = 0, scount = 1'000'000, sburn = 0, swindow = 10'000, sreps = 1, sthreads = 1;
        std::uint64_t sseed = 1;
        std::string strace, sformat = "lines", smode = "full", sexp = "sim";
        double smod = 0.0;
        bool sjson = false, sstationary = false;
        sim->add_option("--policy", spolicies, "policy spec, repeatable")->required();
        sim->add_option("--m", sm, "cache size")->required()->check(CLI::PositiveNumber);
        sdist.add(sim, false);
        sim->add_option("--trace", strace, "replay this trace instead of generating requests");
        sim->add_option("--format", sformat, "trace format")->check(CLI::IsMember({"lines", "csv"}))->capture_default_str();
        sim->add_option("--count", scount, "requests per replication")->capture_default_str();
        sim->add_option("--burnin", sburn, "requests excluded from the statistics")->capture_default_str();
        sim->add_option("--window", swindow, "window length for the hit-rate series")->capture_default_str();
        sim->add_option("--reps", sreps, "replications")->capture_default_str();
        sim->add_option("--seed", sseed, "base seed")->capture_default_str();
        sim->add_option("--threads", sthreads, "worker threads (results do not depend on it)")->capture_default_str();
        sim->add_option("--modulate", smod, "per-request re-ranking probability");
        sim->add_option("--mode", smode, "re-ranking mode")->check(CLI::IsMember({"full", "top"}))->capture_default_str();
        sim->add_option("--experiment", sexp, "experiment label in the CSV")->capture_default_str();
        sim->add_flag("--json", sjson, "write JSON instead of CSV");
        sim->add_flag("--stationary", sstationary, "estimate stationary hit probability with a convergence check");
        sim->add_option("-o,--output", out_path, "output file (default stdout)");
        sim->add_option("--manifest", manifest.path, "manifest path");

        // analyze
        auto* an = app.add_subcommand("analyze", "exact chain analysis: stationary law, hit probability, tau-distance, reversibility");
        DistFlags adist;
        std::string apolicy, aweights = "default", awhat = "hit", amethod = "numeric";
        std::size_t am = 0, acap = default_state_cap;
        bool ajson = false;
        an->add_option("--policy", apolicy, "policy spec")->required();
        an->add_option("--m", am, "cache size")->required()->check(CLI::PositiveNumber);
        adist.add(an);
        an->add_option("--weights", aweights, "rank weights")->check(CLI::IsMember({"default", "unit", "presence"}))->capture_default_str();
        an->add_option("--what", awhat, "quantity")
            ->check(CLI::IsMember({"stationary", "hit", "tau", "reversible", "edges", "all"}))
            ->capture_default_str();
        an->add_option("--method", amethod, "stationary solver")->check(CLI::IsMember({"numeric", "closed"}))->capture_default_str();
        an->add_option("--cap", acap, "state-count cap")->capture_default_str();
        an->add_flag("--json", ajson, "write JSON");
        an->add_option("-o,--output", out_path, "output file (default stdout)");
        an->add_option("--manifest", manifest.path, "manifest path");

        // mix
        auto* mix = app.add_subcommand("mix", "mixing time, spectral quantities and bounds");
        DistFlags mdist;
        std::string mpolicy, mstarts = "all", mbounds = "none", mtraj;
        std::size_t mm = 0;
        double meps = 0.25;
        bool mspectral = false;
        mix->add_option("--policy", mpolicy, "policy spec")->required();
        mix->add_option("--m", mm, "cache size")->required()->check(CLI::PositiveNumber);
        mdist.add(mix, false);
        mix->add_option("--eps", meps, "TV threshold")->capture_default_str();
        mix->add_option("--starts", mstarts, "start states")->check(CLI::IsMember({"all", "adversarial"}))->capture_default_str();
        mix->add_option("--bounds", mbounds, "bounds to evaluate")
            ->check(CLI::IsMember({"none", "lemma1", "zipf-exponent"}))
            ->capture_default_str();
        mix->add_flag("--spectral", mspectral, "also report spectral gap, conductance, congestion and Cheeger check");
        mix->add_option("--trajectory", mtraj, "write the TV trajectory CSV here");
        mix->add_option("-o,--output", out_path, "report file (default stdout)");
        mix->add_option("--manifest", manifest.path, "manifest path");

        // learn-error
        auto* le = app.add_subcommand("learn-error", "learning-error curves e(t) on exact chains");
        DistFlags ldist;
        std::vector<std::string> lpolicies;
        std::size_t lm = 0;
        std::string ltgrid = "log:1..10000", lstarts = "auto", lweights = "default", lgnuplot;
        double lkappa = -1.0;
        le->add_option("--policies", lpolicies, "policy specs")->required();
        le->add_option("--m", lm, "cache size")->required()->check(CLI::PositiveNumber);
        ldist.add(le);
        le->add_option("--tgrid", ltgrid, "time grid: log:a..b[:k], lin:a..b:step or a list")->capture_default_str();
        le->add_option("--starts", lstarts, "start set")->check(CLI::IsMember({"auto", "all", "adversarial"}))->capture_default_str();
        le->add_option("--weights", lweights, "rank weights")->check(CLI::IsMember({"default", "unit", "presence"}))->capture_default_str();
        le->add_option("--kappa", lkappa, "override the common kappa");
        le->add_option("--gnuplot", lgnuplot, "write a gnuplot script for the CSV");
        le->add_option("-o,--output", out_path, "CSV output (default stdout)");
        le->add_option("--manifest", manifest.path, "manifest path");

        // tau-hit
        auto* th = app.add_subcommand("tau-hit", "stationary tau-distance and hit probability per policy and cache size");
        DistFlags tdist;
        std::vector<std::string> tpolicies;
        std::vector<std::size_t> tmgrid;
        std::string tweights = "default";
        std::size_t tmc = 2'000'000, tmcburn = 200'000, tcap = 300'000;
        std::uint64_t tseed = 11;
        th->add_option("--policies", tpolicies, "policy specs (bare lrum / alru use a one-item entry segment)")->required();
        th->add_option("--m-grid", tmgrid, "cache sizes")->required();
        tdist.add(th);
        th->add_option("--weights", tweights, "rank weights")->check(CLI::IsMember({"default", "unit", "presence"}))->capture_default_str();
        th->add_option("--mc-samples", tmc, "simulation length for policies without an exact chain")->capture_default_str();
        th->add_option("--mc-burnin", tmcburn, "simulation burn-in")->capture_default_str();
        th->add_option("--cap", tcap, "state cap for exact multi-level chains")->capture_default_str();
        th->add_option("--seed", tseed, "simulation seed")->capture_default_str();
        th->add_option("-o,--output", out_path, "CSV output (default stdout)");
        th->add_option("--manifest", manifest.path, "manifest path");

        // fit
        auto* fit = app.add_subcommand("fit", "maximum-likelihood Zipf exponent of a trace");
        std::string ftrace, fformat = "lines";
        std::size_t ftop = 10;
        fit->add_option("--trace", ftrace, "trace file")->required();
        fit->add_option("--format", fformat, "trace format")->check(CLI::IsMember({"lines", "csv"}))->capture_default_str();
        fit->add_option("--top", ftop, "rank-frequency rows to print")->capture_default_str();
        fit->add_option("--manifest", manifest.path, "manifest path");

        // run
        auto* run = app.add_subcommand("run", "run a key=value config file");
        std::string cfg_path;
        run->add_option("config", cfg_path, "config file")->required();

        try {
            std::vector<std::string> rev(a.rbegin(), a.rend());
            app.parse(rev);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? ok : usage;
        }

        try {
            if (run->parsed()) {
                std::ifstream f(cfg_path);
                if (!f) fail(ErrorKind::io_error, "cannot read config '" + cfg_path + "'");
                std::string command;
                std::vector<std::string> rest;
                std::string line;
                std::size_t lineno = 0;
                while (std::getline(f, line)) {
                    ++lineno;
                    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
                    auto trim = [](std::string s) {
                        auto b = s.find_first_not_of(" \t\r");
                        auto e = s.find_last_not_of(" \t\r");
                        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
                    };
                    line = trim(line);
                    if (line.empty()) continue;
                    auto eq = line.find('=');
                    if (eq == std::string::npos)
                        fail(ErrorKind::parse_error, cfg_path + ":" + std::to_string(lineno) + ": expected key = value");
                    const std::string key = trim(line.substr(0, eq));
                    const std::string value = trim(line.substr(eq + 1));
                    if (key == "command") {
                        command = value;
                        continue;
                    }
                    if (value == "false") continue;
                    rest.push_back("--" + key);
                    if (value == "true") continue;
                    std::istringstream vs(value);
                    for (std::string tok; vs >> tok;) rest.push_back(tok);
                }
                require(!command.empty() && command != "run", ErrorKind::parse_error, "config needs a command = <subcommand> line");
                rest.insert(rest.begin(), command);
                return run_cli(rest);
            }

            if (gen->parsed()) {
                const auto dist = make_zipf(gdist.n, gdist.alpha);
                RequestStream s;
                std::size_t epochs = 0;
                if (gmod > 0.0) {
                    auto ms = sample_modulated(dist, {gmod, gmode == "top" ? ModulationMode::top_swap : ModulationMode::full_shuffle},
                                               gcount, gseed);
                    s = std::move(ms.stream);
                    epochs = ms.epochs;
                } else {
                    s = sample_irm(dist, gcount, gseed);
                }
                write_trace(s, out_path, parse_trace_format(gformat));
                manifest.primary = out_path;
                manifest.write(gen, a, json{{"seeds", {gseed}}, {"epochs", epochs}});
                return ok;
            }

            if (sim->parsed()) {
                ExperimentSpec spec;
                spec.name = sexp;
                spec.policies = parse_policies(spolicies, sm);
                spec.burn_in = sburn;
                spec.window = swindow;
                spec.reps = sreps;
                spec.seed = sseed;
                spec.threads = sthreads;
                spec.count = scount;
                std::ofstream file;
                std::ostream& os = open_output(out_path, file);
                json seeds = json::array();
                for (std::size_t r = 0; r < sreps; ++r) seeds.push_back(splitmix64(sseed + r));
                if (sstationary) {
                    require(strace.empty() && smod == 0.0, ErrorKind::invalid_parameter,
                            "--stationary needs a stationary IRM source");
                    const auto dist = sdist.make();
                    json out = json::array();
                    if (!sjson) os << "experiment,policy,m,t,metric,value,stderr\n";
                    os.precision(10);
                    for (const auto& p : spec.policies) {
                        auto e = monte_carlo_stationary(p, dist, std::max<std::size_t>(sburn, 1), scount, sseed);
                        if (sjson) {
                            out.push_back({{"policy", p.name()}, {"m", p.m}, {"hit", e.hit}, {"stderr", e.stderr_},
                                           {"converged", e.converged}, {"burn_in", e.burn_in_used}});
                        } else {
                            os << sexp << ',' << p.name() << ',' << p.m << ',' << e.burn_in_used + scount
                               << ",stationary_hit," << e.hit << ',' << e.stderr_ << '\n';
                            os << sexp << ',' << p.name() << ',' << p.m << ',' << e.burn_in_used + scount
                               << ",converged," << (e.converged ? 1 : 0) << ",\n";
                        }
                        if (!e.converged)
                            std::cerr << "warning: " << p.name() << " failed the stationarity check after burn-in "
                                      << e.burn_in_used << '\n';
                    }
                    if (sjson) os << out.dump(2) << '\n';
                } else {
                    if (!strace.empty()) {
                        spec.source = TraceSource{read_trace(strace, parse_trace_format(sformat))};
                    } else if (smod > 0.0) {
                        spec.source = ModulatedSource{
                            sdist.make(), {smod, smode == "top" ? ModulationMode::top_swap : ModulationMode::full_shuffle}};
                    } else {
                        spec.source = IrmSource{sdist.make()};
                    }
                    const auto res = run_simulation(spec);
                    if (sjson) {
                        json out = json::array();
                        for (const auto& r : res)
                            out.push_back({{"experiment", sexp},
                                           {"policy", r.policy.name()},
                                           {"m", r.policy.m},
                                           {"cumulative_hit", r.mean},
                                           {"stderr", r.stderr_},
                                           {"stderr_kind", r.t_based ? "replications" : "binomial"},
                                           {"rep_hit", r.rep_rate},
                                           {"window_end", r.window_end},
                                           {"window_hit", r.window_rate}});
                        os << out.dump(2) << '\n';
                    } else {
                        write_results_csv(os, sexp, res);
                    }
                }
                manifest.primary = out_path;
                manifest.write(sim, a, json{{"seeds", seeds}});
                return ok;
            }

            if (an->parsed()) {
                const auto dist = adist.make();
                const std::size_t n = dist.n();
                const auto cfg = policy_for_cache_size(apolicy, am);
                require(am <= n, ErrorKind::invalid_parameter, "cache size exceeds the library");
                std::shared_ptr<const StateSpace> space;
                try {
                    space = std::make_shared<const StateSpace>(enumerate_states(cfg, n, acap));
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::too_large)
                        std::cerr << "error: " << e.what() << "\nsuggestion: estimate by simulation instead:\n  "
                                  << mc_hint(apolicy, n, am, adist) << '\n';
                    else
                        std::cerr << "error: " << e.what() << '\n';
                    return exit_code(e.kind());
                }
                const auto P = build_transition_matrix(cfg, dist, space);
                StationaryDist pi;
                if (amethod == "closed") {
                    require(cfg.single_level(), ErrorKind::invalid_parameter, "closed forms exist only for lru, fifo, random, climb");
                    pi = closed_form_stationary(cfg.kind, dist, space);
                } else {
                    pi = stationary_numeric(P);
                }
                std::ofstream file;
                std::ostream& os = open_output(out_path, file);
                os.precision(12);
                json out;
                out["policy"] = cfg.name();
                out["n"] = n;
                out["m"] = am;
                out["states"] = space->size();
                const bool all = awhat == "all";
                if (awhat == "edges") {
                    write_edges_csv(os, P);
                } else {
                    if (all || awhat == "stationary") {
                        json st = json::array();
                        for (std::size_t x = 0; x < space->size(); ++x)
                            st.push_back({{"state", format_state(space->states[x])}, {"probability", pi.pi[x]}});
                        out["stationary"] = st;
                        out["residual"] = pi.residual;
                    }
                    if (all || awhat == "hit") out["hit"] = hit_probability(pi, dist);
                    if (all || awhat == "tau") {
                        out["tau"] = tau_distance(pi, parse_weights(aweights, n, am), ideal_vector(dist, am));
                        out["weights"] = aweights;
                    }
                    if (all || awhat == "reversible") {
                        auto rv = is_reversible(P, pi.pi);
                        out["reversible"] = rv.reversible;
                        out["max_violation"] = rv.max_violation;
                        if (!rv.reversible)
                            out["witness"] = {{"from", format_state(space->states[rv.witness->x])},
                                              {"to", format_state(space->states[rv.witness->y])},
                                              {"forward_flow", rv.witness->forward},
                                              {"backward_flow", rv.witness->backward}};
                    }
                    if (ajson) {
                        os << out.dump(2) << '\n';
                    } else {
                        if (out.contains("stationary")) {
                            os << "state,probability\n";
                            for (const auto& e : out["stationary"])
                                os << e["state"].get<std::string>() << ',' << e["probability"].get<double>() << '\n';
                        }
                        if (out.contains("hit")) os << "hit," << out["hit"].get<double>() << '\n';
                        if (out.contains("tau")) os << "tau," << out["tau"].get<double>() << '\n';
                        if (out.contains("reversible")) {
                            os << "reversible," << (out["reversible"].get<bool>() ? "true" : "false") << '\n';
                            os << "max_violation," << out["max_violation"].get<double>() << '\n';
                            if (out.contains("witness"))
                                os << "witness," << out["witness"]["from"].get<std::string>() << " -> "
                                   << out["witness"]["to"].get<std::string>() << ','
                                   << out["witness"]["forward_flow"].get<double>() << ','
                                   << out["witness"]["backward_flow"].get<double>() << '\n';
                        }
                    }
                }
                manifest.primary = out_path;
                manifest.write(an, a, json::object());
                return ok;
            }

            if (mix->parsed()) {
                std::ofstream file;
                std::ostream& os = open_output(out_path, file);
                os.precision(12);
                const auto cfg = parse_policy(mpolicy, mm);
                if (mbounds == "zipf-exponent") {
                    os << "zipf_exponent," << zipf_bound_exponent(cfg, mdist.alpha) << '\n';
                    if (mdist.n == 0 && mdist.probs.empty()) {
                        manifest.primary = out_path;
                        manifest.write(mix, a, json::object());
                        return ok;
                    }
                }
                const auto dist = mdist.make();
                const std::size_t n = dist.n();
                auto space = std::make_shared<const StateSpace>(enumerate_states(cfg, n));
                const auto P = build_transition_matrix(cfg, dist, space);
                const auto pi = cfg.single_level() ? closed_form_stationary(cfg.kind, dist, space) : stationary_numeric(P);
                std::vector<std::size_t> starts;
                StartSet label = StartSet::all;
                if (mstarts == "all") {
                    starts = all_starts(P);
                } else {
                    label = StartSet::adversarial;
                    std::vector<ItemId> rev(mm), head(mm);
                    for (std::size_t j = 0; j < mm; ++j) {
                        rev[j] = static_cast<ItemId>(n - j);
                        head[j] = static_cast<ItemId>(j + 1);
                    }
                    for (const auto& items : {rev, head})
                        if (auto x = space->find(state_from_projection(cfg, items))) starts.push_back(*x);
                    require(!starts.empty(), ErrorKind::invalid_parameter, "adversarial starts are transient for this policy; use --starts all");
                }
                const auto rep = empirical_mixing_time(P, pi.pi, meps, starts, label);
                os << "states," << space->size() << '\n';
                os << "t_mix," << rep.t_mix << '\n';
                os << "epsilon," << meps << '\n';
                os << "start_set," << to_string(label) << (rep.exact_sup() ? ",exact_sup" : ",lower_bound_on_sup") << '\n';
                if (!mtraj.empty()) {
                    std::ofstream tf(mtraj, std::ios::binary);
                    if (!tf) fail(ErrorKind::io_error, "cannot write '" + mtraj + "'");
                    write_mixing_csv(tf, rep);
                }
                if (mbounds == "lemma1") {
                    const bool rev = is_reversible(P, pi.pi).reversible;
                    auto bi = bound_inputs_from_chain(P, pi.pi, meps);
                    bi.reversible = rev;
                    os << "reversible," << (rev ? "true" : "false") << '\n';
                    os << "pi_max," << bi.pi_max << "\npi_min," << bi.pi_min << "\nP_min," << bi.P_min << '\n';
                    os << "lemma1_bound," << mixing_bound(bi) << '\n';
                    os << "lemma1_log_bound," << mixing_bound_log(bi) << '\n';
                }
                if (mspectral) {
                    const auto g = spectral_gap(P, pi.pi);
                    os << "spectral_gap," << g.gap << '\n';
                    if (space->size() <= conductance_cap) {
                        const auto ch = cheeger_check(P, pi.pi);
                        const TransitionMatrix K = additive_reversibilization(P, time_reversal(P, pi.pi));
                        const auto rho = congestion(K, pi.pi);
                        os << "conductance," << ch.phi << "\ncheeger_ok," << (ch.ok ? "true" : "false") << '\n';
                        os << "congestion," << rho.rho << '\n';
                    } else {
                        os << "conductance,skipped (more than " << conductance_cap << " states)\n";
                    }
                }
                manifest.primary = out_path;
                manifest.write(mix, a, json::object());
                return ok;
            }

            if (le->parsed()) {
                const auto dist = ldist.make();
                const std::size_t n = dist.n();
                const auto grid = parse_t_grid(ltgrid);
                const auto w = parse_weights(lweights, n, lm);
                std::optional<double> kappa;
                if (lkappa >= 0.0) {
                    kappa = lkappa;
                } else {
                    bool lower = false;
                    kappa = detail::common_kappa(n, lm, w, lower);
                    if (lower) std::cerr << "note: kappa is a heuristic lower bound\n";
                }
                std::vector<LearningCurve> curves;
                for (const auto& spec : lpolicies) {
                    const auto cfg = policy_for_cache_size(spec, lm);
                    LearningOptions o;
                    o.kappa = kappa;
                    if (lstarts == "all") {
                        o.start_mode = StartSet::all;
                    } else if (lstarts == "adversarial") {
                        o.start_mode = StartSet::adversarial;
                    } else {
                        o.start_mode = cfg.single_level() ? StartSet::all : StartSet::adversarial;
                    }
                    curves.push_back(learning_error_curve(cfg, dist, w, grid, o));
                }
                std::ofstream file;
                std::ostream& os = open_output(out_path, file);
                write_learning_csv(os, curves);
                if (!lgnuplot.empty()) {
                    std::ofstream g(lgnuplot);
                    if (!g) fail(ErrorKind::io_error, "cannot write '" + lgnuplot + "'");
                    g << "set datafile separator ','\n";
                    write_gnuplot(g, curves, out_path.empty() ? "learning.csv" : out_path);
                }
                manifest.primary = out_path;
                manifest.write(le, a, json{{"kappa", *kappa}});
                return ok;
            }

            if (th->parsed()) {
                const auto dist = tdist.make();
                TauHitOptions o;
                o.mc_samples = tmc;
                o.mc_burn_in = tmcburn;
                o.seed = tseed;
                o.state_cap = tcap;
                TauHitTable tab;
                for (std::size_t m : tmgrid) {
                    auto part = tau_vs_hit_table(tpolicies, dist, {m}, o,
                                                 tweights == "default" ? std::nullopt
                                                                       : std::optional(parse_weights(tweights, dist.n(), m)));
                    tab.rows.insert(tab.rows.end(), part.rows.begin(), part.rows.end());
                    tab.spearman_by_m.insert(part.spearman_by_m.begin(), part.spearman_by_m.end());
                }
                std::ofstream file;
                std::ostream& os = open_output(out_path, file);
                write_tau_hit_csv(os, tab);
                for (const auto& [m, rho] : tab.spearman_by_m) std::cerr << "spearman(tau, hit) at m=" << m << ": " << rho << '\n';
                manifest.primary = out_path;
                manifest.write(th, a, json{{"seeds", {tseed}}});
                return ok;
            }

            if (fit->parsed()) {
                const auto s = read_trace(ftrace, parse_trace_format(fformat));
                require(!s.empty(), ErrorKind::invalid_parameter, "trace '" + ftrace + "' is empty");
                const auto r = fit_zipf(s);
                if (!r.warning.empty()) std::cerr << "warning: " << r.warning << '\n';
                std::cout.precision(6);
                std::cout << "alpha," << r.alpha << '\n';
                std::cout << "distinct_items," << r.rank_counts.size() << '\n';
                std::cout << "rank,count\n";
                for (std::size_t k = 0; k < std::min(ftop, r.rank_counts.size()); ++k)
                    std::cout << k + 1 << ',' << r.rank_counts[k] << '\n';
                if (!manifest.path.empty()) manifest.write(fit, a, json{{"alpha", r.alpha}});
                return ok;
            }
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return exit_code(e.kind());
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return internal_error;
        }
        return ok;
    };
    return run_cli(args);
}
