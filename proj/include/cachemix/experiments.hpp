#pragma once

#include "cachemix/chain.hpp"
#include "cachemix/mixing.hpp"
#include "cachemix/model.hpp"
#include "cachemix/policies.hpp"
#include "cachemix/rankmetrics.hpp"
#include "cachemix/workload.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace cachemix {

struct IrmSource {
    PopularityDist dist;
};

struct ModulatedSource {
    PopularityDist dist;
    ModulationSpec modulation;
};

struct TraceSource {
    RequestStream stream;
};

using RequestSource = std::variant<IrmSource, ModulatedSource, TraceSource>;

struct ExperimentSpec {
    std::string name = "sim";
    std::vector<PolicyConfig> policies;
    RequestSource source;
    std::size_t count = 0;  // ignored for traces
    std::size_t burn_in = 0;
    std::size_t window = 10'000;
    std::size_t reps = 1;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

struct ResultSeries {
    PolicyConfig policy;
    std::vector<std::size_t> window_end;  // request index closing each window
    std::vector<double> window_rate;      // averaged over replications
    std::vector<double> rep_rate;         // cumulative post-burn-in hit rate per replication
    double mean = 0.0;
    double stderr_ = 0.0;
    bool t_based = false;  // replication-level error (≥ 5 reps) instead of binomial
    std::size_t counted = 0;
};

namespace detail {

inline RequestStream make_stream(const RequestSource& src, std::size_t count, std::uint64_t seed) {
    if (const auto* irm = std::get_if<IrmSource>(&src)) return sample_irm(irm->dist, count, seed);
    if (const auto* mod = std::get_if<ModulatedSource>(&src))
        return sample_modulated(mod->dist, mod->modulation, count, seed).stream;
    return std::get<TraceSource>(src).stream;
}

struct RepOutcome {
    std::vector<std::size_t> window_hits;
    std::vector<std::size_t> window_len;
    std::size_t hits = 0;
    std::size_t counted = 0;
};

// two-sided 95% Student-t quantile
inline double t_quantile95(std::size_t dof) {
    static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                   2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086};
    if (dof == 0) return std::numeric_limits<double>::infinity();
    if (dof <= 20) return table[dof - 1];
    return 1.96 + 2.4 / static_cast<double>(dof);
}

} // namespace detail

inline std::vector<ResultSeries> run_simulation(const ExperimentSpec& spec) {
    require(!spec.policies.empty(), ErrorKind::invalid_parameter, "no policies to simulate");
    require(spec.window >= 1, ErrorKind::invalid_parameter, "window must be >= 1");
    require(spec.reps >= 1, ErrorKind::invalid_parameter, "need at least one replication");
    const bool trace = std::holds_alternative<TraceSource>(spec.source);
    const std::size_t count = trace ? std::get<TraceSource>(spec.source).stream.size() : spec.count;
    require(count >= 1, ErrorKind::invalid_parameter, "empty request stream");
    require(spec.burn_in < count, ErrorKind::invalid_parameter, "burn-in must be shorter than the stream");
    for (const auto& p : spec.policies) p.validate();

    const std::size_t P = spec.policies.size();
    std::vector<std::vector<detail::RepOutcome>> out(spec.reps, std::vector<detail::RepOutcome>(P));
    auto run_rep = [&](std::size_t r) {
        const RequestStream stream = detail::make_stream(spec.source, count, splitmix64(spec.seed + r));
        for (std::size_t pi = 0; pi < P; ++pi) {
            PolicyConfig cfg = spec.policies[pi];
            cfg.rng_seed = splitmix64(cfg.rng_seed ^ splitmix64(spec.seed + 0x1000 * (r + 1)));
            PolicyInstance inst(cfg);
            auto& o = out[r][pi];
            std::size_t in_window = 0, win_hits = 0;
            for (std::size_t t = 0; t < stream.size(); ++t) {
                const bool hit = inst.request(stream.items[t]);
                if (t < spec.burn_in) continue;
                o.hits += hit;
                ++o.counted;
                win_hits += hit;
                if (++in_window == spec.window || t + 1 == stream.size()) {
                    o.window_hits.push_back(win_hits);
                    o.window_len.push_back(in_window);
                    in_window = win_hits = 0;
                }
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(spec.threads, spec.reps));
    if (threads == 1) {
        for (std::size_t r = 0; r < spec.reps; ++r) run_rep(r);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t r = w; r < spec.reps; r += threads) run_rep(r);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<ResultSeries> res(P);
    for (std::size_t pi = 0; pi < P; ++pi) {
        auto& s = res[pi];
        s.policy = spec.policies[pi];
        const std::size_t W = out[0][pi].window_hits.size();
        s.window_rate.assign(W, 0.0);
        std::size_t end = spec.burn_in;
        for (std::size_t w = 0; w < W; ++w) {
            end += out[0][pi].window_len[w];
            s.window_end.push_back(end);
            for (std::size_t r = 0; r < spec.reps; ++r)
                s.window_rate[w] += static_cast<double>(out[r][pi].window_hits[w]) /
                                    static_cast<double>(out[r][pi].window_len[w]) / static_cast<double>(spec.reps);
        }
        std::size_t hits = 0;
        for (std::size_t r = 0; r < spec.reps; ++r) {
            hits += out[r][pi].hits;
            s.counted += out[r][pi].counted;
            s.rep_rate.push_back(static_cast<double>(out[r][pi].hits) / static_cast<double>(out[r][pi].counted));
        }
        s.mean = static_cast<double>(hits) / static_cast<double>(s.counted);
        if (spec.reps >= 5) {
            double var = 0.0;
            for (double v : s.rep_rate) var += (v - s.mean) * (v - s.mean);
            var /= static_cast<double>(spec.reps - 1);
            s.stderr_ = std::sqrt(var / static_cast<double>(spec.reps));
            s.t_based = true;
        } else {
            s.stderr_ = std::sqrt(s.mean * (1.0 - s.mean) / static_cast<double>(s.counted));
        }
    }
    return res;
}

inline void write_results_header(std::ostream& os) { os << "experiment,policy,m,t,metric,value,stderr\n"; }

inline void write_results_csv(std::ostream& os, const std::string& experiment, const std::vector<ResultSeries>& rs,
                              bool header = true) {
    if (header) write_results_header(os);
    os.precision(10);
    for (const auto& s : rs) {
        const std::string pol = s.policy.name();
        for (std::size_t w = 0; w < s.window_rate.size(); ++w)
            os << experiment << ',' << pol << ',' << s.policy.m << ',' << s.window_end[w] << ",window_hit,"
               << s.window_rate[w] << ",\n";
        const std::size_t last = s.window_end.empty() ? 0 : s.window_end.back();
        os << experiment << ',' << pol << ',' << s.policy.m << ',' << last << ",cumulative_hit," << s.mean << ','
           << s.stderr_ << '\n';
    }
}

struct McEstimate {
    double hit = 0.0;
    double stderr_ = 0.0;
    bool converged = true;
    std::size_t burn_in_used = 0;
    double first_half = 0.0;
    double second_half = 0.0;
};

struct McOptions {
    std::size_t max_doublings = 3;
};

// Post-burn-in hit frequency from a cold start; the burn-in doubles while the two
// halves of the sample window disagree by more than 3σ.
inline McEstimate monte_carlo_stationary(const PolicyConfig& policy, const PopularityDist& dist, std::size_t burn_in,
                                         std::size_t samples, std::uint64_t seed, McOptions opt = {}) {
    require(samples >= 2, ErrorKind::invalid_parameter, "need at least two samples");
    policy.validate();
    McEstimate est;
    for (std::size_t attempt = 0;; ++attempt) {
        PolicyConfig cfg = policy;
        cfg.rng_seed = splitmix64(policy.rng_seed ^ seed);
        PolicyInstance inst(cfg);
        detail::RankSampler sampler(dist);
        Rng rng = make_rng(seed, 0);
        for (std::size_t t = 0; t < burn_in; ++t) inst.request(static_cast<ItemId>(sampler.draw(rng) + 1));
        const std::size_t half = samples / 2;
        std::size_t h1 = 0, h2 = 0;
        for (std::size_t t = 0; t < samples; ++t) {
            const bool hit = inst.request(static_cast<ItemId>(sampler.draw(rng) + 1));
            (t < half ? h1 : h2) += hit;
        }
        const double n1 = static_cast<double>(half), n2 = static_cast<double>(samples - half);
        est.first_half = static_cast<double>(h1) / n1;
        est.second_half = static_cast<double>(h2) / n2;
        est.hit = static_cast<double>(h1 + h2) / static_cast<double>(samples);
        est.stderr_ = std::sqrt(est.hit * (1.0 - est.hit) / static_cast<double>(samples));
        est.burn_in_used = burn_in;
        const double se_diff = std::sqrt(est.first_half * (1 - est.first_half) / n1 + est.second_half * (1 - est.second_half) / n2);
        est.converged = std::abs(est.first_half - est.second_half) <= 3.0 * se_diff;
        if (est.converged || attempt >= opt.max_doublings) break;
        burn_in = std::max<std::size_t>(1, burn_in * 2);
    }
    return est;
}

// Time grids: "log:a..b[:k]" (k points per decade), "lin:a..b:step" or "t1,t2,...".
inline std::vector<std::size_t> parse_t_grid(const std::string& spec) {
    std::vector<std::size_t> g;
    auto range = [&](const std::string& body) {
        auto dots = body.find("..");
        require(dots != std::string::npos, ErrorKind::invalid_parameter, "expected a..b in time grid '" + spec + "'");
        auto rest = body.substr(dots + 2);
        auto colon = rest.find(':');
        long a = detail::parse_long(body.substr(0, dots), "grid start");
        long b = detail::parse_long(rest.substr(0, colon), "grid end");
        long k = colon == std::string::npos ? 0 : detail::parse_long(rest.substr(colon + 1), "grid step");
        require(a >= 0 && b >= a, ErrorKind::invalid_parameter, "bad time grid range in '" + spec + "'");
        return std::tuple<long, long, long>(a, b, k);
    };
    if (spec.rfind("log:", 0) == 0) {
        auto [a, b, k] = range(spec.substr(4));
        if (k == 0) k = 10;
        if (a == 0) {
            g.push_back(0);
            a = 1;
        }
        const double la = std::log10(static_cast<double>(a)), lb = std::log10(static_cast<double>(b));
        const long steps = static_cast<long>(std::ceil((lb - la) * static_cast<double>(k)));
        for (long s = 0; s <= steps; ++s) {
            double v = std::pow(10.0, la + (lb - la) * static_cast<double>(s) / static_cast<double>(std::max(1L, steps)));
            g.push_back(static_cast<std::size_t>(std::llround(v)));
        }
    } else if (spec.rfind("lin:", 0) == 0) {
        auto [a, b, k] = range(spec.substr(4));
        if (k == 0) k = 1;
        for (long t = a; t <= b; t += k) g.push_back(static_cast<std::size_t>(t));
    } else {
        for (const auto& x : detail::split(spec, ',')) {
            long v = detail::parse_long(x, "grid point");
            require(v >= 0, ErrorKind::invalid_parameter, "time grid points must be >= 0");
            g.push_back(static_cast<std::size_t>(v));
        }
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    require(!g.empty(), ErrorKind::invalid_parameter, "empty time grid");
    return g;
}

struct LearningCurve {
    std::string policy;
    std::vector<std::size_t> t;
    std::vector<double> tv;     // worst start
    std::vector<double> tau;    // τ-distance of the stationary law in force at t
    std::vector<double> error;  // τ + κ·TV
    double kappa = 0.0;
    bool kappa_lower_bound = false;
    StartSet starts = StartSet::all;
    std::size_t states = 0;
    double tau_stationary = 0.0;  // τ-distance of the final stationary law
};

struct LearningOptions {
    StartSet start_mode = StartSet::all;
    std::optional<double> kappa;  // common κ across policies; computed over m-arrangements if absent
    PowerOptions power{1e-13, 2'000'000};
    std::size_t state_cap = 2'000'000;
    std::vector<CacheState> custom_starts;
};

namespace detail {

inline std::vector<ItemId> ideal_items(std::size_t m) {
    std::vector<ItemId> v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = static_cast<ItemId>(j + 1);
    return v;
}

inline std::vector<ItemId> reverse_items(std::size_t n, std::size_t m) {
    std::vector<ItemId> v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = static_cast<ItemId>(n - j);
    return v;
}

inline double common_kappa(std::size_t n, std::size_t m, const RankWeights& w, bool& lower) {
    try {
        lower = false;
        return kappa_arrangements(n, m, w, KappaMode::exact).value;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::too_large) throw;
        lower = true;
        StateSpace sp = enumerate_states(PolicyConfig::lru(m), n);
        return kappa_diameter(sp, w, KappaMode::heuristic).value;
    }
}

// Evolves every start through per-step kernels; kernel(t) is applied at step t (1-based).
template <class KernelAt, class TargetAt>
void scan_tv(const std::vector<std::size_t>& starts, std::size_t N, const std::vector<std::size_t>& grid,
             KernelAt&& kernel, TargetAt&& target, std::vector<double>& sup_tv) {
    std::vector<std::vector<double>> dist(starts.size(), std::vector<double>(N, 0.0));
    for (std::size_t s = 0; s < starts.size(); ++s) dist[s][starts[s]] = 1.0;
    std::vector<double> tmp;
    sup_tv.assign(grid.size(), 0.0);
    std::size_t g = 0, t = 0;
    bool frozen = false;
    while (g < grid.size()) {
        if (grid[g] == t || frozen) {
            const auto& pi = target(grid[g]);
            double sup = 0.0;
            for (const auto& d : dist) sup = std::max(sup, tv_distance(d, pi));
            sup_tv[g++] = sup;
            continue;
        }
        ++t;
        const TransitionMatrix& P = kernel(t);
        double change = 0.0;
        for (auto& d : dist) {
            P.left_multiply(d, tmp);
            for (std::size_t x = 0; x < N; ++x) change = std::max(change, std::abs(tmp[x] - d[x]));
            d.swap(tmp);
        }
        // every start has reached a numerical fixed point of a kernel that no longer changes
        frozen = change < 1e-15 && kernel.stationary_after(t);
    }
}

struct FixedKernel {
    const TransitionMatrix* P;
    const TransitionMatrix& operator()(std::size_t) const { return *P; }
    bool stationary_after(std::size_t) const { return true; }
};

} // namespace detail

// e(t) = τ(π*) + κ · max over starts TV(δ_x P^t, π*) on an exact chain.
inline LearningCurve learning_error_curve(const PolicyConfig& policy, const PopularityDist& dist, const RankWeights& w,
                                          const std::vector<std::size_t>& grid, LearningOptions opt = {}) {
    policy.validate();
    const std::size_t n = dist.n(), m = policy.m;
    LearningCurve lc;
    lc.policy = policy.name();
    lc.starts = opt.start_mode;
    bool lower = false;
    lc.kappa = opt.kappa ? *opt.kappa : detail::common_kappa(n, m, w, lower);
    lc.kappa_lower_bound = opt.kappa ? false : lower;
    const CacheState cstar = ideal_vector(dist, m);

    std::vector<CacheState> seeds;
    if (opt.start_mode == StartSet::adversarial) {
        seeds = {state_from_projection(policy, detail::reverse_items(n, m)),
                 state_from_projection(policy, detail::ideal_items(m))};
    } else if (opt.start_mode == StartSet::custom) {
        seeds = opt.custom_starts;
    }

    if (policy.kind == PolicyKind::alru && policy.schedule) {
        require(opt.start_mode != StartSet::all, ErrorKind::invalid_parameter,
                "dynamic A-LRU needs explicit start states (adversarial or custom)");
        const auto& sc = *policy.schedule;
        const std::size_t tmax = grid.back();
        // distinct partitions met along the schedule, plus the limiting one
        std::vector<AlruPartition> regimes;
        std::vector<std::size_t> regime_at(tmax + 2, 0);
        auto regime_of = [&](const AlruPartition& p) {
            for (std::size_t r = 0; r < regimes.size(); ++r)
                if (regimes[r] == p) return r;
            regimes.push_back(p);
            return regimes.size() - 1;
        };
        for (std::size_t t = 1; t <= tmax + 1; ++t)
            regime_at[t] = regime_of(alru_partition(alru_beta(static_cast<long>(t), m, sc.T, sc.c), m));
        regime_at[0] = regime_at[1];
        auto succ = [&](const CacheState& x, auto&& emit) {
            for (const auto& part : regimes)
                for (ItemId i = 1; i <= n; ++i) {
                    CacheState y = x;
                    alru_rebalance(y, part);
                    step_alru(y, i, part);
                    emit(i, y, 1.0);
                }
        };
        auto space = std::make_shared<const StateSpace>(
            closure_with(policy, n, seeds, succ, ClosureOptions{opt.state_cap, false}));
        lc.states = space->size();
        std::vector<TransitionMatrix> kernels;
        std::vector<std::vector<double>> pis;
        std::vector<double> taus;
        const auto costs = state_costs(*space, w, cstar);
        for (const auto& part : regimes) {
            kernels.push_back(build_matrix(space, dist, [&](const CacheState& x, auto&& emit) {
                for (ItemId i = 1; i <= n; ++i) {
                    CacheState y = x;
                    alru_rebalance(y, part);
                    step_alru(y, i, part);
                    emit(i, y, 1.0);
                }
            }));
            pis.push_back(stationary_numeric(kernels.back(), opt.power).pi);
            taus.push_back(tau_distance(pis.back(), costs));
        }
        std::vector<std::size_t> starts;
        for (const auto& s : seeds) starts.push_back(space->at(s));
        std::size_t last_switch = 0;
        for (std::size_t u = 1; u < regime_at.size(); ++u)
            if (regime_at[u] != regime_at[u - 1]) last_switch = u;
        struct DynKernel {
            const std::vector<TransitionMatrix>* k;
            const std::vector<std::size_t>* at;
            std::size_t last_switch;
            const TransitionMatrix& operator()(std::size_t t) const { return (*k)[(*at)[t]]; }
            bool stationary_after(std::size_t t) const { return t >= last_switch; }
        } kernel{&kernels, &regime_at, last_switch};
        detail::scan_tv(
            starts, space->size(), grid, kernel, [&](std::size_t t) -> const std::vector<double>& { return pis[regime_at[t]]; },
            lc.tv);
        lc.t = grid;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            lc.tau.push_back(taus[regime_at[grid[g]]]);
            lc.error.push_back(learning_error(lc.tau.back(), lc.kappa, lc.tv[g]));
        }
        lc.tau_stationary = taus[regime_at[tmax + 1]];
        return lc;
    }

    std::shared_ptr<const StateSpace> space;
    std::vector<std::size_t> starts;
    if (opt.start_mode == StartSet::all || policy.single_level() || policy.kind == PolicyKind::lrum) {
        space = std::make_shared<const StateSpace>(enumerate_states(policy, n, opt.state_cap));
        if (opt.start_mode == StartSet::all) {
            starts.resize(space->size());
            for (std::size_t x = 0; x < starts.size(); ++x) starts[x] = x;
        }
    }
    if (opt.start_mode != StartSet::all) {
        bool inside = space != nullptr;
        if (inside)
            for (const auto& s : seeds) inside = inside && space->find(s).has_value();
        if (!inside) {
            // starts may be transient: evolve on the closure of the starts and the recurrent class
            std::vector<CacheState> all_seeds = seeds;
            all_seeds.push_back(detail::warm_seed(policy, n));
            space = std::make_shared<const StateSpace>(closure_space(policy, n, all_seeds, ClosureOptions{opt.state_cap, false}));
        }
        for (const auto& s : seeds) starts.push_back(space->at(s));
    }
    lc.states = space->size();
    const TransitionMatrix P = build_transition_matrix(policy, dist, space);
    const auto pi = stationary_numeric(P, opt.power).pi;
    const auto costs = state_costs(*space, w, cstar);
    lc.tau_stationary = tau_distance(pi, costs);
    detail::scan_tv(starts, space->size(), grid, detail::FixedKernel{&P},
                    [&](std::size_t) -> const std::vector<double>& { return pi; }, lc.tv);
    lc.t = grid;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        lc.tau.push_back(lc.tau_stationary);
        lc.error.push_back(learning_error(lc.tau_stationary, lc.kappa, lc.tv[g]));
    }
    return lc;
}

inline void write_learning_csv(std::ostream& os, const std::vector<LearningCurve>& curves) {
    os << "policy,t,error,tv,tau,kappa,starts\n";
    os.precision(12);
    for (const auto& c : curves)
        for (std::size_t g = 0; g < c.t.size(); ++g)
            os << c.policy << ',' << c.t[g] << ',' << c.error[g] << ',' << c.tv[g] << ',' << c.tau[g] << ','
               << c.kappa << ',' << to_string(c.starts) << '\n';
}

// gnuplot data blocks: one block per policy, columns t and e(t)
inline void write_gnuplot(std::ostream& os, const std::vector<LearningCurve>& curves, const std::string& data_file) {
    os << "set logscale x\nset xlabel 'requests'\nset ylabel 'learning error'\nplot ";
    for (std::size_t c = 0; c < curves.size(); ++c)
        os << (c ? ", " : "") << "'" << data_file << "' using 2:(strcol(1) eq '" << curves[c].policy
           << "' ? $3 : 1/0) with lines title '" << curves[c].policy << "'";
    os << '\n';
}

// Bare "lrum" and "alru" use the layout where the entry real segment holds one
// item: LRU(1, m-1), and A-LRU with beta = 1/m. Anything else goes through parse_policy.
inline PolicyConfig policy_for_cache_size(const std::string& spec, std::size_t m) {
    if (spec == "lrum") {
        require(m >= 2, ErrorKind::invalid_parameter, "lrum with a unit entry level needs m >= 2");
        return PolicyConfig::lrum({1, m - 1});
    }
    if (spec == "alru") return PolicyConfig::alru(1.0 / static_cast<double>(m), m);
    return parse_policy(spec, m);
}

struct TauHitRow {
    std::string policy;
    std::size_t m = 0;
    double tau = 0.0;
    double hit = 0.0;
    bool exact = true;  // false: Monte Carlo estimate
};

struct TauHitTable {
    std::vector<TauHitRow> rows;
    std::map<std::size_t, double> spearman_by_m;  // Spearman(τ, hit) across policies at each m
};

struct TauHitOptions {
    std::size_t mc_burn_in = 200'000;
    std::size_t mc_samples = 2'000'000;
    std::uint64_t seed = 11;
    std::size_t state_cap = 300'000;
};

// Exact chains where they exist, otherwise time averages along one simulated path.
inline TauHitTable tau_vs_hit_table(const std::vector<std::string>& policies, const PopularityDist& dist,
                                    const std::vector<std::size_t>& m_grid, TauHitOptions opt = {},
                                    std::optional<RankWeights> weights = std::nullopt) {
    TauHitTable tab;
    const std::size_t n = dist.n();
    for (std::size_t m : m_grid) {
        const RankWeights w = weights ? *weights : RankWeights::standard(n, m);
        const CacheState cstar = ideal_vector(dist, m);
        const auto target = position_map(cstar.levels[0].slots, n);
        std::vector<double> taus, hits;
        for (const auto& spec : policies) {
            const PolicyConfig cfg = policy_for_cache_size(spec, m);
            TauHitRow row{cfg.name(), m, 0.0, 0.0, true};
            auto simulate = [&] {
                row.exact = false;
                PolicyConfig c2 = cfg;
                c2.rng_seed = opt.seed;
                PolicyInstance inst(c2);
                detail::RankSampler sampler(dist);
                Rng rng = make_rng(opt.seed, 0);
                for (std::size_t t = 0; t < opt.mc_burn_in; ++t) inst.request(static_cast<ItemId>(sampler.draw(rng) + 1));
                std::size_t h = 0;
                double tau_sum = 0.0;
                std::map<std::vector<ItemId>, double> memo;
                for (std::size_t t = 0; t < opt.mc_samples; ++t) {
                    h += inst.request(static_cast<ItemId>(sampler.draw(rng) + 1));
                    auto proj = inst.real_items();
                    auto it = memo.find(proj);
                    if (it == memo.end())
                        it = memo.emplace(proj, kendall_generalized(position_map(proj, n), target, w)).first;
                    tau_sum += it->second;
                }
                row.hit = static_cast<double>(h) / static_cast<double>(opt.mc_samples);
                row.tau = tau_sum / static_cast<double>(opt.mc_samples);
            };
            if (cfg.kind == PolicyKind::arc || (cfg.kind == PolicyKind::alru && cfg.schedule)) {
                simulate();
            } else {
                std::optional<StateSpace> sp;
                try {
                    sp = enumerate_states(cfg, n, cfg.single_level() ? default_state_cap : opt.state_cap);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::too_large) throw;
                }
                if (sp) {
                    auto space = std::make_shared<const StateSpace>(std::move(*sp));
                    const auto pi = cfg.single_level() ? closed_form_stationary(cfg.kind, dist, space)
                                                       : stationary_numeric(build_transition_matrix(cfg, dist, space));
                    row.hit = hit_probability(pi, dist);
                    row.tau = tau_distance(pi, w, cstar);
                } else {
                    simulate();
                }
            }
            taus.push_back(row.tau);
            hits.push_back(row.hit);
            tab.rows.push_back(row);
        }
        if (taus.size() >= 2) tab.spearman_by_m[m] = spearman(taus, hits);
    }
    return tab;
}

inline void write_tau_hit_csv(std::ostream& os, const TauHitTable& t) {
    os << "policy,m,tau,hit,method\n";
    os.precision(12);
    for (const auto& r : t.rows) os << r.policy << ',' << r.m << ',' << r.tau << ',' << r.hit << ',' << (r.exact ? "exact" : "mc") << '\n';
}

} // namespace cachemix
