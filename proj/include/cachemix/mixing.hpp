#pragma once

#include "cachemix/chain.hpp"
#include "cachemix/model.hpp"
#include "cachemix/random.hpp"
#include "cachemix/rankmetrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace cachemix {

inline std::vector<double> evolve(const TransitionMatrix& P, std::size_t start, std::size_t t) {
    require(start < P.size(), ErrorKind::invalid_input, "start state out of range");
    std::vector<double> x(P.size(), 0.0), y;
    x[start] = 1.0;
    for (std::size_t s = 0; s < t; ++s) {
        P.left_multiply(x, y);
        x.swap(y);
    }
    return x;
}

enum class StartSet { all, adversarial, custom };

inline const char* to_string(StartSet s) {
    switch (s) {
    case StartSet::all: return "all";
    case StartSet::adversarial: return "adversarial";
    case StartSet::custom: return "custom";
    }
    return "?";
}

struct MixingReport {
    double epsilon = 0.0;
    std::size_t t_mix = 0;
    StartSet start_set = StartSet::custom;
    std::vector<std::size_t> starts;
    std::vector<std::vector<double>> tv;  // tv[s][t] for t = 0..t_mix
    std::vector<double> sup_tv;           // sup over starts, t = 0..t_mix

    // "exact sup" only when every state was a start
    bool exact_sup() const { return start_set == StartSet::all; }
};

struct MixingOptions {
    std::size_t t_max = 10'000'000;
    bool record = true;
    std::size_t cell_cap = 200'000'000;
};

inline std::vector<std::size_t> all_starts(const TransitionMatrix& P) {
    std::vector<std::size_t> s(P.size());
    std::iota(s.begin(), s.end(), std::size_t{0});
    return s;
}

// Smallest t with max over starts of TV(δ_x P^t, π) ≤ ε, by stepping every start forward.
inline MixingReport empirical_mixing_time(const TransitionMatrix& P, const std::vector<double>& pi, double epsilon,
                                          const std::vector<std::size_t>& starts, StartSet label,
                                          MixingOptions opt = {}) {
    require(pi.size() == P.size(), ErrorKind::invalid_input, "stationary vector size differs from the matrix");
    require(!starts.empty(), ErrorKind::invalid_input, "no start states");
    require(epsilon >= 0.0, ErrorKind::invalid_parameter, "epsilon must be >= 0");
    require(starts.size() <= opt.cell_cap / std::max<std::size_t>(P.size(), 1), ErrorKind::too_large,
            std::to_string(starts.size()) + " start distributions over " + std::to_string(P.size()) +
                " states exceed the working-set cap; use adversarial starts or a smaller library");
    MixingReport rep;
    rep.epsilon = epsilon;
    rep.start_set = label;
    rep.starts = starts;
    rep.tv.assign(starts.size(), {});
    std::vector<std::vector<double>> dist(starts.size(), std::vector<double>(P.size(), 0.0));
    for (std::size_t s = 0; s < starts.size(); ++s) {
        require(starts[s] < P.size(), ErrorKind::invalid_input, "start state out of range");
        dist[s][starts[s]] = 1.0;
    }
    std::vector<double> tmp;
    for (std::size_t t = 0;; ++t) {
        double sup = 0.0;
        for (std::size_t s = 0; s < starts.size(); ++s) {
            const double d = tv_distance(dist[s], pi);
            sup = std::max(sup, d);
            if (opt.record) rep.tv[s].push_back(d);
        }
        if (label == StartSet::all && !rep.sup_tv.empty() && sup > rep.sup_tv.back() + 1e-12)
            fail(ErrorKind::internal, "worst-start TV increased at t=" + std::to_string(t));
        rep.sup_tv.push_back(sup);
        if (sup <= epsilon) {
            rep.t_mix = t;
            break;
        }
        if (t >= opt.t_max)
            fail(ErrorKind::no_convergence, "TV still " + std::to_string(sup) + " after " + std::to_string(t) + " steps");
        for (auto& d : dist) {
            P.left_multiply(d, tmp);
            d.swap(tmp);
        }
    }
    if (!opt.record) rep.sup_tv = {rep.sup_tv.back()};
    return rep;
}

inline MixingReport empirical_mixing_time(const TransitionMatrix& P, const std::vector<double>& pi, double epsilon) {
    return empirical_mixing_time(P, pi, epsilon, all_starts(P), StartSet::all);
}

inline void write_mixing_csv(std::ostream& os, const MixingReport& r) {
    os << "t,start_id,tv,sup_tv\n";
    os.precision(12);
    for (std::size_t t = 0; t < r.sup_tv.size(); ++t)
        for (std::size_t s = 0; s < r.starts.size(); ++s)
            if (t < r.tv[s].size()) os << t << ',' << r.starts[s] << ',' << r.tv[s][t] << ',' << r.sup_tv[t] << '\n';
}

struct SpectralOptions {
    double tol = 1e-10;
    std::size_t max_iter = 2'000'000;
    std::uint64_t seed = 7;
};

struct SpectralGap {
    double gap = 1.0;
    double lambda2 = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
};

// 1 − λ₂ of K = (P + P*)/2. Power iteration on (K + I)/2 over functions orthogonal
// to constants in the π inner product; λ₂ is signed, so laziness halves the gap.
inline SpectralGap spectral_gap(const TransitionMatrix& P, const std::vector<double>& pi, SpectralOptions opt = {}) {
    const std::size_t N = P.size();
    require(pi.size() == N, ErrorKind::invalid_input, "stationary vector size differs from the matrix");
    SpectralGap g;
    if (N < 2) return g;
    const TransitionMatrix K = additive_reversibilization(P, time_reversal(P, pi));
    auto apply = [&](const std::vector<double>& f, std::vector<double>& out) {
        out.assign(N, 0.0);
        for (std::size_t x = 0; x < N; ++x) {
            double s = 0.0;
            for (std::size_t k = K.row_ptr[x]; k < K.row_ptr[x + 1]; ++k) s += K.val[k] * f[K.col[k]];
            out[x] = 0.5 * (s + f[x]);
        }
    };
    auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t x = 0; x < N; ++x) s += pi[x] * a[x] * b[x];
        return s;
    };
    auto deflate_normalise = [&](std::vector<double>& f) {
        double mean = 0.0;
        for (std::size_t x = 0; x < N; ++x) mean += pi[x] * f[x];
        for (double& v : f) v -= mean;
        const double nrm = std::sqrt(dot(f, f));
        if (nrm > 0.0)
            for (double& v : f) v /= nrm;
        return nrm;
    };
    Rng rng = make_rng(opt.seed, 4);
    std::vector<double> f(N), Lf;
    for (double& v : f) v = uniform01(rng) - 0.5;
    deflate_normalise(f);
    double mu = 0.0;
    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
        apply(f, Lf);
        mu = dot(f, Lf);
        double r2 = 0.0;
        for (std::size_t x = 0; x < N; ++x) r2 += pi[x] * (Lf[x] - mu * f[x]) * (Lf[x] - mu * f[x]);
        g.residual = std::sqrt(r2);
        g.iterations = it;
        if (g.residual < opt.tol) break;
        f.swap(Lf);
        if (deflate_normalise(f) == 0.0) {
            // (K+I)/2 annihilated the complement: every other eigenvalue of K is -1
            mu = 0.0;
            g.residual = 0.0;
            break;
        }
        if (it == opt.max_iter)
            fail(ErrorKind::no_convergence, "second eigenvalue not resolved; residual " + std::to_string(g.residual));
    }
    g.lambda2 = 2.0 * mu - 1.0;
    g.gap = 1.0 - g.lambda2;
    return g;
}

struct ConductanceResult {
    double phi = 0.0;
    std::vector<std::size_t> argmin;  // the minimising set S
};

inline constexpr std::size_t conductance_cap = 24;

// min over S with π(S) ≤ 1/2 of Q(S, S̄)/π(S), scanning subsets in Gray-code order.
inline ConductanceResult conductance_exact(const TransitionMatrix& P, const std::vector<double>& pi,
                                           std::size_t cap = conductance_cap) {
    const std::size_t N = P.size();
    require(pi.size() == N, ErrorKind::invalid_input, "stationary vector size differs from the matrix");
    if (N > cap || N > 62)
        fail(ErrorKind::too_large, "exact conductance scans 2^" + std::to_string(N) + " subsets, above the cap");
    require(N >= 2, ErrorKind::invalid_input, "conductance needs at least two states");
    std::vector<std::vector<std::pair<std::size_t, double>>> out(N), in(N);
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t k = P.row_ptr[x]; k < P.row_ptr[x + 1]; ++k) {
            const std::size_t y = P.col[k];
            if (y == x) continue;
            out[x].emplace_back(y, pi[x] * P.val[k]);
            in[y].emplace_back(x, pi[x] * P.val[k]);
        }
    std::vector<char> in_s(N, 0);
    double mass = 0.0, flow = 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t mask = 0, best_mask = 0;
    const std::uint64_t total = std::uint64_t{1} << N;
    for (std::uint64_t g = 1; g < total; ++g) {
        const auto v = static_cast<std::size_t>(std::countr_zero(g));
        if (!in_s[v]) {
            in_s[v] = 1;
            mass += pi[v];
            for (const auto& [y, q] : out[v])
                if (!in_s[y]) flow += q;
            for (const auto& [x, q] : in[v])
                if (in_s[x]) flow -= q;
        } else {
            in_s[v] = 0;
            mass -= pi[v];
            for (const auto& [y, q] : out[v])
                if (!in_s[y]) flow -= q;
            for (const auto& [x, q] : in[v])
                if (in_s[x]) flow += q;
        }
        mask ^= std::uint64_t{1} << v;
        if (mass > 0.0 && mass <= 0.5 + 1e-12) {
            const double phi = flow / mass;
            if (phi < best) {
                best = phi;
                best_mask = mask;
            }
        }
    }
    // recompute the winner from scratch to shed accumulated rounding
    ConductanceResult r;
    double m2 = 0.0, f2 = 0.0;
    for (std::size_t x = 0; x < N; ++x) {
        if (!(best_mask >> x & 1)) continue;
        r.argmin.push_back(x);
        m2 += pi[x];
        for (const auto& [y, q] : out[x])
            if (!(best_mask >> y & 1)) f2 += q;
    }
    r.phi = m2 > 0.0 ? std::max(0.0, f2 / m2) : 0.0;
    return r;
}

struct CongestionResult {
    double rho = 0.0;
    std::size_t from = 0, to = 0;  // the most loaded edge
};

// Canonical paths are BFS shortest paths, ties broken towards the smaller state index.
inline CongestionResult congestion(const TransitionMatrix& P, const std::vector<double>& pi) {
    const std::size_t N = P.size();
    require(pi.size() == N, ErrorKind::invalid_input, "stationary vector size differs from the matrix");
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<double> load(P.nnz(), 0.0);
    std::vector<std::size_t> parent(N), parent_edge(N), order;
    std::vector<double> sub(N);
    order.reserve(N);
    for (std::size_t x = 0; x < N; ++x) {
        std::fill(parent.begin(), parent.end(), unset);
        order.clear();
        parent[x] = x;
        order.push_back(x);
        for (std::size_t h = 0; h < order.size(); ++h) {
            const std::size_t u = order[h];
            for (std::size_t k = P.row_ptr[u]; k < P.row_ptr[u + 1]; ++k) {
                const std::size_t v = P.col[k];
                if (parent[v] != unset || P.val[k] <= 0.0) continue;
                parent[v] = u;
                parent_edge[v] = k;
                order.push_back(v);
            }
        }
        if (order.size() != N)
            fail(ErrorKind::invalid_paths, "state " + std::to_string(x) + " cannot reach every other state");
        // an edge into v carries every path whose target lies in v's subtree
        for (std::size_t h = order.size(); h-- > 1;) sub[order[h]] = pi[order[h]];
        for (std::size_t h = order.size(); h-- > 1;) {
            const std::size_t v = order[h];
            load[parent_edge[v]] += pi[x] * sub[v];
            if (parent[v] != x) sub[parent[v]] += sub[v];
        }
    }
    CongestionResult r;
    for (std::size_t u = 0; u < N; ++u)
        for (std::size_t k = P.row_ptr[u]; k < P.row_ptr[u + 1]; ++k) {
            if (load[k] == 0.0) continue;
            const double c = load[k] / (pi[u] * P.val[k]);
            if (c > r.rho) r = {c, u, P.col[k]};
        }
    return r;
}

// Same with a caller-supplied path family; path(x, y) lists states x, ..., y.
inline CongestionResult congestion(const TransitionMatrix& P, const std::vector<double>& pi,
                                   const std::function<std::vector<std::size_t>(std::size_t, std::size_t)>& path) {
    const std::size_t N = P.size();
    std::vector<double> load(P.nnz(), 0.0);
    auto edge_index = [&](std::size_t u, std::size_t v) -> std::size_t {
        for (std::size_t k = P.row_ptr[u]; k < P.row_ptr[u + 1]; ++k)
            if (P.col[k] == v && P.val[k] > 0.0) return k;
        fail(ErrorKind::invalid_paths, "path uses a missing edge " + std::to_string(u) + "->" + std::to_string(v));
    };
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t y = 0; y < N; ++y) {
            if (x == y) continue;
            auto p = path(x, y);
            if (p.size() < 2 || p.front() != x || p.back() != y)
                fail(ErrorKind::invalid_paths, "no path from " + std::to_string(x) + " to " + std::to_string(y));
            for (std::size_t h = 0; h + 1 < p.size(); ++h) load[edge_index(p[h], p[h + 1])] += pi[x] * pi[y];
        }
    CongestionResult r;
    for (std::size_t u = 0; u < N; ++u)
        for (std::size_t k = P.row_ptr[u]; k < P.row_ptr[u + 1]; ++k) {
            if (load[k] == 0.0) continue;
            const double c = load[k] / (pi[u] * P.val[k]);
            if (c > r.rho) r = {c, u, P.col[k]};
        }
    return r;
}

struct CheegerResult {
    double phi = 0.0;
    double gamma = 0.0;
    bool ok = false;
};

inline CheegerResult cheeger_check(const TransitionMatrix& P, const std::vector<double>& pi) {
    const TransitionMatrix K = additive_reversibilization(P, time_reversal(P, pi));
    CheegerResult r;
    r.phi = conductance_exact(K, pi).phi;
    r.gamma = spectral_gap(P, pi).gap;
    const double slack = 1e-9;
    r.ok = r.phi * r.phi / 2.0 <= r.gamma + slack && r.gamma <= 2.0 * r.phi + slack;
    return r;
}

struct BoundInputs {
    double pi_max = 1.0;
    double pi_min = 1.0;
    double P_min = 1.0;
    double Gamma = 2.0;
    double epsilon = 0.25;
    bool reversible = true;

    void validate() const {
        require(pi_min > 0.0 && pi_min <= pi_max && pi_max <= 1.0, ErrorKind::invalid_parameter,
                "need 0 < pi_min <= pi_max <= 1");
        require(P_min > 0.0 && P_min <= 1.0, ErrorKind::invalid_parameter, "need 0 < P_min <= 1");
        require(Gamma >= 2.0, ErrorKind::invalid_parameter, "need Gamma >= 2");
        require(epsilon > 0.0, ErrorKind::invalid_parameter, "need epsilon > 0");
    }
};

// 8 π_max⁴ Γ⁴ / (π_min P_min)² · (ln 1/π_min + ln 1/ε), P_min halved for non-reversible chains
inline double mixing_bound_log(const BoundInputs& b) {
    b.validate();
    const double pm = b.reversible ? b.P_min : b.P_min / 2.0;
    const double log_terms = std::log(1.0 / b.pi_min) + std::log(1.0 / b.epsilon);
    return std::log(8.0) + 4.0 * std::log(b.pi_max) + 4.0 * std::log(b.Gamma) - 2.0 * std::log(b.pi_min * pm) +
           std::log(log_terms);
}

inline double mixing_bound(const BoundInputs& b) {
    b.validate();
    const double pm = b.reversible ? b.P_min : b.P_min / 2.0;
    const double g2 = b.Gamma * b.Gamma;
    const double lead = 8.0 * std::pow(b.pi_max, 4) * g2 * g2 / ((b.pi_min * pm) * (b.pi_min * pm));
    return lead * (std::log(1.0 / b.pi_min) + std::log(1.0 / b.epsilon));
}

// P_min is the smallest positive off-diagonal transition probability.
inline BoundInputs bound_inputs_from_chain(const TransitionMatrix& P, const std::vector<double>& pi, double epsilon) {
    BoundInputs b;
    b.pi_max = *std::max_element(pi.begin(), pi.end());
    b.pi_min = *std::min_element(pi.begin(), pi.end());
    b.P_min = 1.0;
    for (std::size_t x = 0; x < P.size(); ++x)
        for (std::size_t k = P.row_ptr[x]; k < P.row_ptr[x + 1]; ++k)
            if (P.col[k] != x && P.val[k] > 0.0) b.P_min = std::min(b.P_min, P.val[k]);
    b.Gamma = static_cast<double>(P.size());
    b.epsilon = epsilon;
    b.reversible = is_reversible(P, pi).reversible;
    return b;
}

namespace detail {

inline double prod(std::span<const double> p, std::size_t from, std::size_t to, double expo = 1.0) {
    double r = 1.0;
    for (std::size_t i = from; i <= to; ++i) r *= std::pow(p[i - 1], expo);
    return r;
}

inline void check_bound_args(const PopularityDist& d, std::size_t m) {
    require(m >= 1 && m <= d.n(), ErrorKind::invalid_parameter, "need 1 <= m <= n");
}

} // namespace detail

// π_min / π_max / P_min characterisations for the single-level policies.
inline BoundInputs bound_inputs_lru(const PopularityDist& d, std::size_t m, double epsilon) {
    detail::check_bound_args(d, m);
    const auto p = d.probs();
    const std::size_t n = d.n();
    double den_min = 1.0, den_max = 1.0, acc_tail = 0.0, acc_head = 0.0;
    for (std::size_t j = 1; j + 1 <= m; ++j) {
        acc_tail += p[n - j];
        acc_head += p[j - 1];
        den_min *= 1.0 - acc_tail;
        den_max *= 1.0 - acc_head;
    }
    BoundInputs b;
    b.pi_min = detail::prod(p, n - m + 1, n) / den_min;
    b.pi_max = detail::prod(p, 1, m) / den_max;
    b.P_min = p[n - 1];
    b.Gamma = detail::falling_factorial(n, m);
    b.epsilon = epsilon;
    b.reversible = false;
    return b;
}

inline BoundInputs bound_inputs_random(const PopularityDist& d, std::size_t m, double epsilon) {
    detail::check_bound_args(d, m);
    const auto p = d.probs();
    const std::size_t n = d.n();
    const double G = detail::falling_factorial(n, m);
    const double H = detail::prod(p, 1, m), T = detail::prod(p, n - m + 1, n);
    BoundInputs b;
    b.pi_min = T / (G * H);
    b.pi_max = std::min(1.0, H / (G * T));
    b.P_min = p[n - 1];
    b.Gamma = G;
    b.epsilon = epsilon;
    b.reversible = true;
    return b;
}

inline BoundInputs bound_inputs_climb(const PopularityDist& d, std::size_t m, double epsilon) {
    detail::check_bound_args(d, m);
    const auto p = d.probs();
    const std::size_t n = d.n();
    const double G = detail::falling_factorial(n, m);
    double H = 1.0, T = 1.0;
    for (std::size_t i = 1; i <= m; ++i) H *= std::pow(p[i - 1], static_cast<double>(m - i + 1));
    for (std::size_t i = n - m + 1; i <= n; ++i) T *= std::pow(p[i - 1], static_cast<double>(i + m - n));
    BoundInputs b;
    b.pi_min = T / (G * H);
    b.pi_max = std::min(1.0, H / (G * T));
    b.P_min = p[n - 1];
    b.Gamma = G;
    b.epsilon = epsilon;
    b.reversible = true;
    return b;
}

// Natural logarithms of the policy-specific mixing-time bound expressions.
inline double policy_bound_lru_log(const PopularityDist& d, std::size_t m) {
    detail::check_bound_args(d, m);
    const auto p = d.probs();
    const std::size_t n = d.n();
    const double ln_n = std::log(static_cast<double>(n));
    double log_head = 0.0, log_tail = 0.0, log_den_tail = 0.0, log_den_head = 0.0;
    for (std::size_t i = 1; i <= m; ++i) log_head += std::log(p[i - 1]);
    for (std::size_t i = n - m + 1; i <= n; ++i) log_tail += std::log(p[i - 1]);
    double acc_t = 0.0, acc_h = 0.0;
    for (std::size_t j = 1; j + 1 <= m; ++j) {
        acc_t += p[n - j];
        acc_h += p[j - 1];
        log_den_tail += std::log(1.0 - acc_t);
        log_den_head += std::log(1.0 - acc_h);
    }
    const double lead = 4.0 * static_cast<double>(m) * ln_n + 4.0 * log_head + 2.0 * log_den_tail -
                        2.0 * std::log(p[n - 1]) - 4.0 * log_den_head - 2.0 * log_tail;
    return lead + std::log(log_den_tail - log_tail);
}

inline double policy_bound_random_log(const PopularityDist& d, std::size_t m) {
    detail::check_bound_args(d, m);
    const auto p = d.probs();
    const std::size_t n = d.n();
    const double ln_n = std::log(static_cast<double>(n));
    double lh = 0.0, lt = 0.0;
    for (std::size_t i = 1; i <= m; ++i) lh += std::log(p[i - 1]);
    for (std::size_t i = n - m + 1; i <= n; ++i) lt += std::log(p[i - 1]);
    const double lead = 2.0 * static_cast<double>(m) * ln_n + 6.0 * lh - 2.0 * std::log(p[n - 1]) - 6.0 * lt;
    return lead + std::log(static_cast<double>(m) * ln_n + lh - lt);
}

inline double policy_bound_climb_log(const PopularityDist& d, std::size_t m) {
    detail::check_bound_args(d, m);
    const auto p = d.probs();
    const std::size_t n = d.n();
    const double ln_n = std::log(static_cast<double>(n));
    double lh = 0.0, lt = 0.0;
    for (std::size_t i = 1; i <= m; ++i) lh += static_cast<double>(m - i + 1) * std::log(p[i - 1]);
    for (std::size_t i = n - m + 1; i <= n; ++i) lt += static_cast<double>(i + m - n) * std::log(p[i - 1]);
    const double lead = 2.0 * static_cast<double>(m) * ln_n + 6.0 * lh - 2.0 * std::log(p[n - 1]) - 6.0 * lt;
    return lead + std::log(static_cast<double>(m) * ln_n + lh - lt);
}

// Σ_{i<m} p_i bounds the largest probability mass any m-1 cached items can hold.
inline double chi_bound(const PopularityDist& d, std::size_t m) {
    double s = 0.0;
    for (std::size_t i = 1; i + 1 <= m; ++i) s += d.probs()[i - 1];
    return s;
}

inline double policy_bound_klru_log(const PopularityDist& d, std::size_t m, std::size_t k) {
    detail::check_bound_args(d, m);
    require(k >= 1 && k * m <= d.n(), ErrorKind::invalid_parameter, "the k-LRU bound needs k*m <= n");
    const auto p = d.probs();
    const std::size_t n = d.n();
    const double K = static_cast<double>(k), M = static_cast<double>(m);
    const double ln_n = std::log(static_cast<double>(n));
    const double expo = K * (K + 1.0) * M / 2.0 - 1.0;
    double low = 0.0;  // ln Π_i (Π_{l in block i} p_{n-l+1})^{k-i+1}
    for (std::size_t i = 1; i <= k; ++i) {
        double blk = 0.0;
        for (std::size_t l = 1 + (i - 1) * m; l <= i * m; ++l) blk += std::log(p[n - l]);
        low += static_cast<double>(k - i + 1) * blk;
    }
    double lh = 0.0;
    for (std::size_t j = 1; j <= m; ++j) lh += std::log(p[j - 1]);
    const double l_chi = -std::log(1.0 - chi_bound(d, m));
    const double lead = (4.0 * K * M + 4.0 * (M - 1.0) * expo) * ln_n - 2.0 * low - 2.0 * std::log(p[n - 1]) +
                        4.0 * (K * lh + expo * l_chi);
    return lead + std::log(-low);
}

inline double policy_bound_lrum_log(const PopularityDist& d, const std::vector<std::size_t>& caps) {
    std::size_t m = 0, weighted = 0;
    for (std::size_t j = 0; j < caps.size(); ++j) {
        m += caps[j];
        weighted += (j + 1) * caps[j];
    }
    detail::check_bound_args(d, m);
    const auto p = d.probs();
    const std::size_t n = d.n(), h = caps.size();
    const double ln_n = std::log(static_cast<double>(n));
    const double M = static_cast<double>(m), W = static_cast<double>(weighted);
    double low = 0.0;  // ln Π_i (Π_{k in block i} p_{n+k-m})^i
    std::size_t start = 0;
    for (std::size_t i = 1; i <= h; ++i) {
        double blk = 0.0;
        for (std::size_t kk = start + 1; kk <= start + caps[i - 1]; ++kk) blk += std::log(p[n + kk - m - 1]);
        low += static_cast<double>(i) * blk;
        start += caps[i - 1];
    }
    double high = 0.0;  // ln Π_i (Π_{k in reversed block i} p_k)^{h-i+1}
    start = 0;
    for (std::size_t i = 1; i <= h; ++i) {
        const std::size_t sz = caps[h - i];
        double blk = 0.0;
        for (std::size_t kk = start + 1; kk <= start + sz; ++kk) blk += std::log(p[kk - 1]);
        high += static_cast<double>(h - i + 1) * blk;
        start += sz;
    }
    const double l_chi = -std::log(1.0 - chi_bound(d, m));
    const double lead = (4.0 * M + 4.0 * (M - 1.0) * (W - 1.0)) * ln_n - 2.0 * low - 2.0 * std::log(p[n - 1]) +
                        4.0 * high + 4.0 * (W - 1.0) * l_chi;
    return lead + std::log(-low);
}

struct ExponentParams {
    std::size_t k = 1;
    std::vector<std::size_t> m_vec;
};

// Exponent e of n in the O(n^e ln n) mixing bound under Zipf(alpha) popularity.
inline double zipf_bound_exponent(PolicyKind kind, double alpha, std::size_t m, const ExponentParams& params = {}) {
    const double a = alpha, M = static_cast<double>(m);
    switch (kind) {
    case PolicyKind::lru: return (4.0 * a + 2.0) * M + 2.0;
    case PolicyKind::fifo:
    case PolicyKind::random: return (6.0 * a + 2.0) * M + 2.0;
    case PolicyKind::climb: return 3.0 * a * M * (M + 1.0) + 2.0 * M + 2.0;
    case PolicyKind::klru: {
        const double k = static_cast<double>(params.k);
        return (k + 1.0) * k * (2.0 * M - 1.0) * M + 4.0 * (k * a - 1.0) * M + 6.0;
    }
    case PolicyKind::lrum: {
        require(!params.m_vec.empty(), ErrorKind::invalid_parameter, "LRU(m) exponent needs level capacities");
        double w = 0.0, mm = 0.0;
        for (std::size_t j = 0; j < params.m_vec.size(); ++j) {
            w += static_cast<double>(j + 1) * static_cast<double>(params.m_vec[j]);
            mm += static_cast<double>(params.m_vec[j]);
        }
        return (4.0 * mm + 4.0 * a - 6.0) * w + 6.0;
    }
    default:
        break;
    }
    fail(ErrorKind::invalid_parameter, "no Zipf bound exponent for this policy");
}

inline double zipf_bound_exponent(const PolicyConfig& c, double alpha) {
    return zipf_bound_exponent(c.kind, alpha, c.m, ExponentParams{c.k, c.m_vec});
}

inline double learning_error(double tau_dist, double kappa, double tv_at_t) {
    require(tau_dist >= 0.0 && kappa >= 0.0 && tv_at_t >= 0.0, ErrorKind::invalid_parameter,
            "learning error inputs must be non-negative");
    return tau_dist + kappa * tv_at_t;
}

} // namespace cachemix
