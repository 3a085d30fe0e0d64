#pragma once

#include "cachemix/model.hpp"
#include "cachemix/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cachemix {

inline constexpr std::size_t default_state_cap = 5'000'000;

struct StateSpace {
    PolicyConfig config;
    std::size_t n = 0;
    std::vector<CacheState> states;
    std::unordered_map<std::string, std::size_t> index;

    std::size_t size() const { return states.size(); }

    std::optional<std::size_t> find(const CacheState& s) const {
        auto it = index.find(state_key(s));
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    std::size_t at(const CacheState& s) const {
        auto f = find(s);
        if (!f) fail(ErrorKind::invalid_input, "state " + format_state(s) + " is not in the state space");
        return *f;
    }

    // returns (index, inserted)
    std::pair<std::size_t, bool> add(CacheState s) {
        auto [it, inserted] = index.emplace(state_key(s), states.size());
        if (inserted) states.push_back(std::move(s));
        return {it->second, inserted};
    }
};

using SpacePtr = std::shared_ptr<const StateSpace>;

// Row-stochastic kernel in compressed sparse rows; columns sorted within each row.
struct TransitionMatrix {
    SpacePtr space;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::uint32_t> col;
    std::vector<double> val;

    std::size_t size() const { return row_ptr.size() - 1; }
    std::size_t nnz() const { return val.size(); }

    double at(std::size_t r, std::size_t c) const {
        auto b = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
        auto e = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
        auto it = std::lower_bound(b, e, static_cast<std::uint32_t>(c));
        if (it == e || *it != c) return 0.0;
        return val[static_cast<std::size_t>(it - col.begin())];
    }

    // appends a row from unsorted (col, prob) pairs, merging duplicates
    void push_row(std::vector<std::pair<std::uint32_t, double>>& entries) {
        std::sort(entries.begin(), entries.end());
        for (std::size_t j = 0; j < entries.size(); ++j) {
            if (entries[j].second == 0.0) continue;
            if (!col.empty() && row_ptr.back() < col.size() && col.back() == entries[j].first) {
                val.back() += entries[j].second;
            } else {
                col.push_back(entries[j].first);
                val.push_back(entries[j].second);
            }
        }
        row_ptr.push_back(col.size());
    }

    static TransitionMatrix from_dense(const std::vector<std::vector<double>>& d) {
        TransitionMatrix P;
        for (const auto& row : d) {
            std::vector<std::pair<std::uint32_t, double>> e;
            for (std::size_t c = 0; c < row.size(); ++c)
                if (row[c] != 0.0) e.emplace_back(static_cast<std::uint32_t>(c), row[c]);
            P.push_row(e);
        }
        return P;
    }

    std::vector<std::vector<double>> to_dense() const {
        std::vector<std::vector<double>> d(size(), std::vector<double>(size(), 0.0));
        for (std::size_t r = 0; r < size(); ++r)
            for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) d[r][col[k]] = val[k];
        return d;
    }

    double max_row_error() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < size(); ++r) {
            double s = 0.0;
            for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k];
            worst = std::max(worst, std::abs(s - 1.0));
        }
        return worst;
    }

    // x ← x P
    void left_multiply(const std::vector<double>& x, std::vector<double>& out) const {
        out.assign(size(), 0.0);
        for (std::size_t r = 0; r < size(); ++r) {
            const double xr = x[r];
            if (xr == 0.0) continue;
            for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) out[col[k]] += xr * val[k];
        }
    }
};

struct StationaryDist {
    SpacePtr space;
    std::vector<double> pi;
    double residual = 0.0;
    std::size_t iterations = 0;

    std::size_t size() const { return pi.size(); }
};

namespace detail {

inline double falling_factorial(std::size_t n, std::size_t m) {
    double r = 1.0;
    for (std::size_t j = 0; j < m; ++j) r *= static_cast<double>(n - j);
    return r;
}

// Calls f(arrangement) for every ordered m-arrangement of 1..n, lexicographically.
template <class F>
void for_each_arrangement(std::size_t n, std::size_t m, F&& f) {
    std::vector<ItemId> cur;
    std::vector<char> used(n + 1, 0);
    cur.reserve(m);
    std::function<void()> rec = [&]() {
        if (cur.size() == m) {
            f(static_cast<const std::vector<ItemId>&>(cur));
            return;
        }
        for (ItemId i = 1; i <= n; ++i) {
            if (used[i]) continue;
            used[i] = 1;
            cur.push_back(i);
            rec();
            cur.pop_back();
            used[i] = 0;
        }
    };
    rec();
}

// emit(item, next_state, weight within the item's probability)
template <class Emit>
void for_each_successor(const PolicyConfig& c, const CacheState& x, std::size_t n, const AlruPartition* part,
                        Emit&& emit) {
    for (ItemId i = 1; i <= n; ++i) {
        if (c.kind == PolicyKind::random) {
            if (x.levels[0].contains(i) || x.levels[0].slots.size() < c.m) {
                CacheState y = x;
                step_random_at(y, i, c.m, 0);
                emit(i, y, 1.0);
            } else {
                for (std::size_t s = 0; s < c.m; ++s) {
                    CacheState y = x;
                    step_random_at(y, i, c.m, s);
                    emit(i, y, 1.0 / static_cast<double>(c.m));
                }
            }
        } else {
            CacheState y = x;
            step_state(c, y, i, part);
            emit(i, y, 1.0);
        }
    }
}

// Strongly connected components with no outgoing edges (iterative Tarjan).
inline std::vector<std::vector<std::size_t>> sink_components(const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t N = adj.size();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> idx(N, unset), low(N, 0), comp(N, unset);
    std::vector<char> on_stack(N, 0);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call;
    std::size_t counter = 0, ncomp = 0;
    for (std::size_t root = 0; root < N; ++root) {
        if (idx[root] != unset) continue;
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, e] = call.back();
            if (e == 0 && idx[v] == unset) {
                idx[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            if (e < adj[v].size()) {
                std::size_t w = adj[v][e++];
                if (idx[w] == unset) {
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], idx[w]);
                }
                continue;
            }
            if (low[v] == idx[v]) {
                while (true) {
                    std::size_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = ncomp;
                    if (w == v) break;
                }
                ++ncomp;
            }
            std::size_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    std::vector<char> has_exit(ncomp, 0);
    for (std::size_t v = 0; v < N; ++v)
        for (std::size_t w : adj[v])
            if (comp[w] != comp[v]) has_exit[comp[v]] = 1;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(ncomp, unset);
    for (std::size_t v = 0; v < N; ++v) {
        if (has_exit[comp[v]]) continue;
        if (slot[comp[v]] == unset) {
            slot[comp[v]] = out.size();
            out.emplace_back();
        }
        out[slot[comp[v]]].push_back(v);
    }
    return out;
}

inline double closure_bound(const PolicyConfig& c, std::size_t n) {
    const double arr = falling_factorial(n, c.m);
    if (c.kind == PolicyKind::klru) return std::pow(arr, static_cast<double>(c.k));
    double meta = 0.0;
    for (std::size_t j = 0; j <= c.m && j <= n; ++j) meta += falling_factorial(n, j) * static_cast<double>(j + 1);
    return arr * meta;
}

inline CacheState warm_seed(const PolicyConfig& c, std::size_t n) {
    CacheState s = empty_state(c);
    const std::size_t rounds = (c.kind == PolicyKind::klru ? c.k : 2) + 1;
    for (std::size_t r = 0; r < rounds; ++r)
        for (std::size_t j = std::min(n, c.m); j >= 1; --j) step_state(c, s, static_cast<ItemId>(j));
    return s;
}

} // namespace detail

struct ClosureOptions {
    std::size_t cap = default_state_cap;
    bool restrict_to_sink = true;
};

// States reachable from `seeds` through `succ(state, emit)`; optionally cut down
// to the unique closed class.
template <class Succ>
StateSpace closure_with(const PolicyConfig& c, std::size_t n, const std::vector<CacheState>& seeds, Succ&& succ,
                        ClosureOptions opt = {}) {
    StateSpace sp;
    sp.config = c;
    sp.n = n;
    std::vector<std::vector<std::size_t>> adj;
    std::deque<std::size_t> queue;
    for (const auto& s : seeds) {
        auto [id, ins] = sp.add(s);
        if (ins) {
            queue.push_back(id);
            adj.emplace_back();
        }
    }
    while (!queue.empty()) {
        std::size_t x = queue.front();
        queue.pop_front();
        CacheState cur = sp.states[x];
        succ(cur, [&](ItemId, const CacheState& y, double) {
            auto [id, ins] = sp.add(y);
            if (ins) {
                if (sp.size() > opt.cap)
                    fail(ErrorKind::too_large, "state space of " + c.name() + " exceeds the cap of " +
                                                   std::to_string(opt.cap) + " states");
                queue.push_back(id);
                adj.emplace_back();
            }
            adj[x].push_back(id);
        });
    }
    if (!opt.restrict_to_sink) return sp;
    auto sinks = detail::sink_components(adj);
    if (sinks.size() != 1)
        fail(ErrorKind::internal, "expected one closed class, found " + std::to_string(sinks.size()));
    auto& keep = sinks[0];
    std::sort(keep.begin(), keep.end());
    StateSpace out;
    out.config = c;
    out.n = n;
    for (std::size_t v : keep) out.add(std::move(sp.states[v]));
    return out;
}

inline StateSpace closure_space(const PolicyConfig& c, std::size_t n, const std::vector<CacheState>& seeds,
                                ClosureOptions opt = {}) {
    return closure_with(
        c, n, seeds, [&](const CacheState& x, auto&& emit) { detail::for_each_successor(c, x, n, nullptr, emit); },
        opt);
}

// Full recurrent states of the policy chain. Single-level policies and LRU(m)
// enumerate every ordered m-arrangement directly (lexicographic order).
inline StateSpace enumerate_states(const PolicyConfig& c, std::size_t n, std::size_t cap = default_state_cap) {
    c.validate();
    require(c.m <= n, ErrorKind::invalid_parameter, "cache size m must not exceed n");
    require(n < 0xffff, ErrorKind::invalid_parameter, "exact analysis supports n < 65535");
    require(c.kind != PolicyKind::arc, ErrorKind::invalid_parameter,
            "ARC carries a real-valued adaptation target; use Monte Carlo (sim) instead");
    require(!(c.kind == PolicyKind::alru && c.schedule), ErrorKind::invalid_parameter,
            "dynamic A-LRU is time-inhomogeneous; use experiments::learning_error_curve");
    const double arr = detail::falling_factorial(n, c.m);
    if (c.single_level() || c.kind == PolicyKind::lrum) {
        if (arr > static_cast<double>(cap))
            fail(ErrorKind::too_large, "Gamma = " + std::to_string(arr) + " exceeds the cap of " + std::to_string(cap));
        StateSpace sp;
        sp.config = c;
        sp.n = n;
        sp.states.reserve(static_cast<std::size_t>(arr));
        detail::for_each_arrangement(n, c.m, [&](const std::vector<ItemId>& a) {
            if (c.kind == PolicyKind::lrum) {
                CacheState s = empty_state(c);
                std::size_t pos = 0;
                for (std::size_t l = 0; l < c.m_vec.size(); ++l)
                    for (std::size_t j = 0; j < c.m_vec[l]; ++j) s.levels[l].slots.push_back(a[pos++]);
                sp.add(std::move(s));
            } else {
                sp.add(CacheState::single(a));
            }
        });
        return sp;
    }
    const double bound = detail::closure_bound(c, n);
    if (bound > static_cast<double>(cap))
        fail(ErrorKind::too_large, "state space of " + c.name() + " may reach " + std::to_string(bound) +
                                       " states, above the cap of " + std::to_string(cap));
    return closure_space(c, n, {detail::warm_seed(c, n)}, ClosureOptions{cap, true});
}

// Builds a kernel over `space` from a successor generator; targets outside the space are an error.
template <class Succ>
TransitionMatrix build_matrix(SpacePtr space, const PopularityDist& dist, Succ&& succ) {
    TransitionMatrix P;
    P.space = space;
    P.row_ptr.reserve(space->size() + 1);
    std::vector<std::pair<std::uint32_t, double>> row;
    for (std::size_t x = 0; x < space->size(); ++x) {
        row.clear();
        succ(space->states[x], [&](ItemId i, const CacheState& y, double w) {
            auto id = space->find(y);
            if (!id)
                fail(ErrorKind::internal, "transition from " + format_state(space->states[x]) + " leaves the space at " +
                                              format_state(y));
            row.emplace_back(static_cast<std::uint32_t>(*id), dist.p(i) * w);
        });
        P.push_row(row);
    }
    return P;
}

inline TransitionMatrix build_transition_matrix(const PolicyConfig& c, const PopularityDist& dist, SpacePtr space) {
    require(dist.n() == space->n, ErrorKind::invalid_parameter, "distribution size differs from the state space's n");
    return build_matrix(space, dist, [&](const CacheState& x, auto&& emit) {
        detail::for_each_successor(c, x, dist.n(), nullptr, emit);
    });
}

inline TransitionMatrix build_transition_matrix(const PolicyConfig& c, const PopularityDist& dist,
                                                const StateSpace& space) {
    return build_transition_matrix(c, dist, std::make_shared<const StateSpace>(space));
}

struct PowerOptions {
    double tol = 1e-12;
    std::size_t max_iter = 1'000'000;
};

inline StationaryDist stationary_numeric(const TransitionMatrix& P, PowerOptions opt = {}) {
    const std::size_t N = P.size();
    require(N > 0, ErrorKind::invalid_input, "empty transition matrix");
    std::vector<double> x(N, 1.0 / static_cast<double>(N)), y;
    double change = 0.0;
    std::size_t it = 0;
    for (; it < opt.max_iter; ++it) {
        P.left_multiply(x, y);
        double s = 0.0;
        for (double v : y) s += v;
        change = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            y[j] /= s;
            change += std::abs(y[j] - x[j]);
        }
        x.swap(y);
        if (change < opt.tol) break;
    }
    P.left_multiply(x, y);
    double residual = 0.0;
    for (std::size_t j = 0; j < N; ++j) residual += std::abs(y[j] - x[j]);
    if (it == opt.max_iter)
        fail(ErrorKind::no_convergence, "power iteration stopped after " + std::to_string(it) +
                                            " iterations with residual " + std::to_string(residual));
    return StationaryDist{P.space, std::move(x), residual, it + 1};
}

// Product-form stationary laws for the single-level policies. RANDOM is reported on
// ordered states (same law as FIFO); set_probability gives the unordered-set law.
class ClosedForm {
public:
    ClosedForm(PolicyKind kind, const PopularityDist& dist, std::size_t m, std::size_t cap = default_state_cap)
        : kind_(kind), dist_(dist), m_(m) {
        require(kind == PolicyKind::lru || kind == PolicyKind::fifo || kind == PolicyKind::random ||
                    kind == PolicyKind::climb,
                ErrorKind::invalid_parameter, "closed forms exist only for LRU, FIFO, RANDOM and CLIMB");
        require(m >= 1 && m <= dist.n(), ErrorKind::invalid_parameter, "need 1 <= m <= n");
        // elementary symmetric polynomial e_m(p)
        std::vector<double> e(m + 1, 0.0);
        e[0] = 1.0;
        for (double p : dist.probs())
            for (std::size_t j = m; j >= 1; --j) e[j] += e[j - 1] * p;
        e_m_ = e[m];
        double mf = 1.0;
        for (std::size_t j = 2; j <= m; ++j) mf *= static_cast<double>(j);
        ordered_norm_ = mf * e_m_;
        if (kind == PolicyKind::climb) {
            require(detail::falling_factorial(dist.n(), m) <= static_cast<double>(cap), ErrorKind::too_large,
                    "CLIMB normaliser needs n!/(n-m)! terms, above the cap");
            climb_norm_ = 0.0;
            detail::for_each_arrangement(dist.n(), m,
                                         [&](const std::vector<ItemId>& a) { climb_norm_ += climb_weight(a); });
        }
    }

    double operator()(std::span<const ItemId> x) const {
        require(x.size() == m_, ErrorKind::invalid_input, "closed forms are defined on full states");
        switch (kind_) {
        case PolicyKind::lru: {
            double num = 1.0, den = 1.0, acc = 0.0;
            for (std::size_t j = 0; j < m_; ++j) {
                num *= dist_.p(x[j]);
                if (j + 1 < m_) {
                    acc += dist_.p(x[j]);
                    den *= 1.0 - acc;
                }
            }
            return num / den;
        }
        case PolicyKind::fifo:
        case PolicyKind::random: {
            double num = 1.0;
            for (ItemId i : x) num *= dist_.p(i);
            return num / ordered_norm_;
        }
        case PolicyKind::climb:
            return climb_weight(x) / climb_norm_;
        default:
            break;
        }
        return 0.0;
    }

    double operator()(const CacheState& s) const { return (*this)(std::span<const ItemId>(s.levels.at(0).slots)); }

    double set_probability(std::span<const ItemId> x) const {
        double num = 1.0;
        for (ItemId i : x) num *= dist_.p(i);
        return num / e_m_;
    }

private:
    double climb_weight(std::span<const ItemId> x) const {
        double w = 1.0;
        for (std::size_t j = 0; j < x.size(); ++j) w *= std::pow(dist_.p(x[j]), static_cast<double>(m_ - j));
        return w;
    }

    PolicyKind kind_;
    PopularityDist dist_;
    std::size_t m_;
    double e_m_ = 0.0;
    double ordered_norm_ = 0.0;
    double climb_norm_ = 0.0;
};

inline double stationary_closed_form(PolicyKind kind, const PopularityDist& dist, const CacheState& state) {
    require(state.levels.size() == 1, ErrorKind::invalid_input, "closed forms apply to single-level states");
    return ClosedForm(kind, dist, state.levels[0].slots.size())(state);
}

inline StationaryDist closed_form_stationary(PolicyKind kind, const PopularityDist& dist, SpacePtr space) {
    ClosedForm f(kind, dist, space->config.m);
    StationaryDist d;
    d.space = space;
    d.pi.reserve(space->size());
    for (const auto& s : space->states) d.pi.push_back(f(s));
    return d;
}

inline double real_mass(const CacheState& s, const PopularityDist& dist) {
    double mass = 0.0;
    for (const auto& l : s.levels)
        if (l.kind == LevelKind::real)
            for (ItemId i : l.slots) mass += dist.p(i);
    return mass;
}

inline double hit_probability(const StationaryDist& pi, const PopularityDist& dist) {
    require(pi.space != nullptr, ErrorKind::invalid_input, "stationary distribution has no state space");
    double miss = 0.0;
    for (std::size_t x = 0; x < pi.size(); ++x) miss += (1.0 - real_mass(pi.space->states[x], dist)) * pi.pi[x];
    return 1.0 - miss;
}

// Hit probability straight from the product forms by enumeration: ordered states for
// LRU/FIFO/CLIMB, unordered sets for RANDOM.
inline double hit_probability_closed_form(PolicyKind kind, const PopularityDist& dist, std::size_t m,
                                          std::size_t cap = default_state_cap) {
    require(detail::falling_factorial(dist.n(), m) <= static_cast<double>(cap), ErrorKind::too_large,
            "enumeration above the cap");
    ClosedForm f(kind, dist, m, cap);
    double hit = 0.0;
    if (kind == PolicyKind::random) {
        std::vector<ItemId> cur;
        std::function<void(ItemId)> rec = [&](ItemId from) {
            if (cur.size() == m) {
                double mass = 0.0;
                for (ItemId i : cur) mass += dist.p(i);
                hit += mass * f.set_probability(cur);
                return;
            }
            for (ItemId i = from; i <= dist.n(); ++i) {
                cur.push_back(i);
                rec(i + 1);
                cur.pop_back();
            }
        };
        rec(1);
        return hit;
    }
    detail::for_each_arrangement(dist.n(), m, [&](const std::vector<ItemId>& a) {
        double mass = 0.0;
        for (ItemId i : a) mass += dist.p(i);
        hit += mass * f(a);
    });
    return hit;
}

inline TransitionMatrix time_reversal(const TransitionMatrix& P, const std::vector<double>& pi) {
    require(pi.size() == P.size(), ErrorKind::invalid_input, "stationary vector size differs from the matrix");
    for (double v : pi) require(v > 0.0, ErrorKind::invalid_input, "time reversal needs strictly positive stationary mass");
    const std::size_t N = P.size();
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(N);
    for (std::size_t y = 0; y < N; ++y)
        for (std::size_t k = P.row_ptr[y]; k < P.row_ptr[y + 1]; ++k) {
            const std::size_t x = P.col[k];
            rows[x].emplace_back(static_cast<std::uint32_t>(y), pi[y] * P.val[k] / pi[x]);
        }
    TransitionMatrix R;
    R.space = P.space;
    for (auto& r : rows) R.push_row(r);
    return R;
}

inline TransitionMatrix additive_reversibilization(const TransitionMatrix& P, const TransitionMatrix& Pstar) {
    require(P.size() == Pstar.size(), ErrorKind::invalid_input, "matrices live on different spaces");
    TransitionMatrix R;
    R.space = P.space;
    std::vector<std::pair<std::uint32_t, double>> row;
    for (std::size_t x = 0; x < P.size(); ++x) {
        row.clear();
        for (std::size_t k = P.row_ptr[x]; k < P.row_ptr[x + 1]; ++k) row.emplace_back(P.col[k], 0.5 * P.val[k]);
        for (std::size_t k = Pstar.row_ptr[x]; k < Pstar.row_ptr[x + 1]; ++k)
            row.emplace_back(Pstar.col[k], 0.5 * Pstar.val[k]);
        R.push_row(row);
    }
    return R;
}

struct BalanceWitness {
    std::size_t x = 0, y = 0;
    double forward = 0.0;   // π(x)P(x,y)
    double backward = 0.0;  // π(y)P(y,x)
};

struct ReversibilityResult {
    bool reversible = true;
    double max_violation = 0.0;
    std::optional<BalanceWitness> witness;  // worst violating edge
};

inline ReversibilityResult is_reversible(const TransitionMatrix& P, const std::vector<double>& pi, double tol = 1e-10) {
    ReversibilityResult r;
    for (std::size_t x = 0; x < P.size(); ++x)
        for (std::size_t k = P.row_ptr[x]; k < P.row_ptr[x + 1]; ++k) {
            const std::size_t y = P.col[k];
            if (y == x) continue;
            const double f = pi[x] * P.val[k];
            const double b = pi[y] * P.at(y, x);
            const double d = std::abs(f - b);
            if (d > r.max_violation) {
                r.max_violation = d;
                if (d > tol) r.witness = BalanceWitness{x, y, f, b};
            }
        }
    r.reversible = r.max_violation <= tol;
    if (r.reversible) r.witness.reset();
    return r;
}

// Orderings of the multiset holding h(y) copies of each cached item y (h = highest
// level containing y) that drive an empty k-LRU cache exactly to `state`.
inline std::vector<std::vector<ItemId>> enumerate_arrangements(const CacheState& state, const PolicyConfig& c,
                                                               std::size_t cap = 12) {
    require(c.kind == PolicyKind::klru || c.kind == PolicyKind::lru, ErrorKind::invalid_parameter,
            "arrangements are defined for k-LRU states");
    PolicyConfig cfg = c;
    if (c.kind == PolicyKind::lru) cfg = PolicyConfig::klru(1, c.m);
    require(state.levels.size() == cfg.k, ErrorKind::invalid_input, "state level count differs from k");
    std::unordered_map<ItemId, std::size_t> height;
    for (std::size_t l = 0; l < state.levels.size(); ++l)
        for (ItemId i : state.levels[l].slots) height[i] = l + 1;
    std::vector<ItemId> multiset;
    for (const auto& [i, h] : height) multiset.insert(multiset.end(), h, i);
    if (multiset.size() > cap)
        fail(ErrorKind::too_large, "arrangement multiset has " + std::to_string(multiset.size()) +
                                       " requests, above the cap of " + std::to_string(cap));
    std::sort(multiset.begin(), multiset.end());
    std::vector<std::vector<ItemId>> out;
    CacheState target = state;
    for (auto& l : target.levels) l.kind = LevelKind::meta;
    target.levels.back().kind = LevelKind::real;
    do {
        CacheState s = empty_state(cfg);
        for (ItemId i : multiset) step_klru(s, i, cfg.m, cfg.klru_variant);
        if (s == target) out.push_back(multiset);
    } while (std::next_permutation(multiset.begin(), multiset.end()));
    return out;
}

inline void write_edges_csv(std::ostream& os, const TransitionMatrix& P) {
    os << "row,col,prob\n";
    os.precision(17);
    for (std::size_t r = 0; r < P.size(); ++r)
        for (std::size_t k = P.row_ptr[r]; k < P.row_ptr[r + 1]; ++k) os << r << ',' << P.col[k] << ',' << P.val[k] << '\n';
}

} // namespace cachemix
