#pragma once

#include "cachemix/chain.hpp"
#include "cachemix/model.hpp"
#include "cachemix/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace cachemix {

// sigma[i] is the 1-based position of item i, 0 when absent. Index 0 is unused.
struct PositionMap {
    std::vector<std::size_t> sigma;

    std::size_t n() const { return sigma.empty() ? 0 : sigma.size() - 1; }
    std::size_t operator[](ItemId i) const { return sigma[i]; }
};

inline PositionMap position_map(std::span<const ItemId> slots, std::size_t n) {
    PositionMap pm;
    pm.sigma.assign(n + 1, 0);
    for (std::size_t j = 0; j < slots.size(); ++j) {
        require(slots[j] >= 1 && slots[j] <= n, ErrorKind::invalid_input, "item outside the library");
        require(pm.sigma[slots[j]] == 0, ErrorKind::invalid_input, "duplicate item in permutation");
        pm.sigma[slots[j]] = j + 1;
    }
    return pm;
}

namespace detail {

inline std::size_t order_rank(std::size_t pos) { return pos == 0 ? std::numeric_limits<std::size_t>::max() : pos; }

// items present in either map; pairs of items absent from both never count
inline std::vector<ItemId> support(const PositionMap& a, const PositionMap& b) {
    std::vector<ItemId> u;
    for (std::size_t i = 1; i < a.sigma.size(); ++i)
        if (a.sigma[i] || b.sigma[i]) u.push_back(static_cast<ItemId>(i));
    return u;
}

} // namespace detail

// Absent items rank behind every cached item; a pair whose order is undetermined
// (both absent) in either map contributes nothing.
inline long kendall_classic(const PositionMap& s1, const PositionMap& s2) {
    require(s1.n() == s2.n(), ErrorKind::invalid_input, "position maps over different libraries");
    const auto u = detail::support(s1, s2);
    long count = 0;
    for (ItemId i : u)
        for (ItemId j : u) {
            if (i == j) continue;
            if (detail::order_rank(s1[i]) > detail::order_rank(s1[j]) &&
                detail::order_rank(s2[i]) < detail::order_rank(s2[j]))
                ++count;
        }
    return count;
}

inline double kendall_generalized(const PositionMap& s1, const PositionMap& s2, const RankWeights& w) {
    require(s1.n() == s2.n(), ErrorKind::invalid_input, "position maps over different libraries");
    require(w.n() >= s1.n(), ErrorKind::invalid_input, "rank weights cover fewer items than the library");
    const auto u = detail::support(s1, s2);
    auto qbar = [&](ItemId i) {
        const std::size_t a = s1[i], b = s2[i];
        if (a == b) return 1.0;
        require(a < w.q.size() && b < w.q.size(), ErrorKind::invalid_input, "position beyond the rank weights' m");
        return (w.q[a] - w.q[b]) / (static_cast<double>(a) - static_cast<double>(b));
    };
    double total = 0.0;
    for (ItemId i : u)
        for (ItemId j : u) {
            if (i == j) continue;
            if (detail::order_rank(s1[i]) < detail::order_rank(s1[j]) &&
                detail::order_rank(s2[i]) > detail::order_rank(s2[j]))
                total += w.w[i - 1] * w.w[j - 1] * qbar(i) * qbar(j);
        }
    return total;
}

inline double kendall_generalized(std::span<const ItemId> a, std::span<const ItemId> b, const RankWeights& w,
                                  std::size_t n) {
    return kendall_generalized(position_map(a, n), position_map(b, n), w);
}

// K(x_real, c*) for each state of the space
inline std::vector<double> state_costs(const StateSpace& space, const RankWeights& w, const CacheState& cstar) {
    require(cstar.levels.size() == 1, ErrorKind::invalid_input, "c* is a single-level state");
    const auto target = position_map(cstar.levels[0].slots, space.n);
    std::vector<double> out;
    out.reserve(space.size());
    for (const auto& s : space.states)
        out.push_back(kendall_generalized(position_map(real_projection(s, space.config), space.n), target, w));
    return out;
}

inline double tau_distance(const std::vector<double>& pi, const std::vector<double>& costs) {
    require(pi.size() == costs.size(), ErrorKind::invalid_input, "distribution and cost vector differ in size");
    double t = 0.0;
    for (std::size_t x = 0; x < pi.size(); ++x) t += pi[x] * costs[x];
    return t;
}

inline double tau_distance(const StationaryDist& pi, const RankWeights& w, const CacheState& cstar) {
    require(pi.space != nullptr, ErrorKind::invalid_input, "stationary distribution has no state space");
    return tau_distance(pi.pi, state_costs(*pi.space, w, cstar));
}

inline double tv_distance(std::span<const double> mu, std::span<const double> nu) {
    require(mu.size() == nu.size(), ErrorKind::invalid_input, "distributions differ in length");
    double s = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) s += std::abs(mu[j] - nu[j]);
    return 0.5 * s;
}

enum class KappaMode { exact, heuristic };

struct KappaOptions {
    std::size_t pair_cap = 100'000'000;
    std::size_t samples = 2000;
    std::uint64_t seed = 0;
};

struct KappaResult {
    double value = 0.0;
    KappaMode mode = KappaMode::exact;
    bool lower_bound = false;
    std::size_t distinct_projections = 0;
};

inline KappaResult kappa_diameter(const StateSpace& space, const RankWeights& w, KappaMode mode, KappaOptions opt = {}) {
    // distances depend on states only through their real projection
    std::set<std::vector<ItemId>> uniq;
    for (const auto& s : space.states) uniq.insert(real_projection(s, space.config));
    std::vector<PositionMap> maps;
    for (const auto& p : uniq) maps.push_back(position_map(p, space.n));
    KappaResult r;
    r.mode = mode;
    r.distinct_projections = maps.size();
    const double pairs = static_cast<double>(maps.size()) * static_cast<double>(maps.size());
    if (mode == KappaMode::exact) {
        if (pairs > static_cast<double>(opt.pair_cap))
            fail(ErrorKind::too_large, "exact diameter needs " + std::to_string(pairs) + " pair evaluations");
        for (std::size_t a = 0; a < maps.size(); ++a)
            for (std::size_t b = a + 1; b < maps.size(); ++b)
                r.value = std::max(r.value, kendall_generalized(maps[a], maps[b], w));
        return r;
    }
    r.lower_bound = true;
    // extreme popularity orderings that occur in the space, then random pairs
    const std::size_t n = space.n, m = space.config.m;
    std::vector<std::vector<ItemId>> cand;
    std::vector<ItemId> head(m), tail(m);
    for (std::size_t j = 0; j < m; ++j) {
        head[j] = static_cast<ItemId>(j + 1);
        tail[j] = static_cast<ItemId>(n - j);
    }
    cand.push_back(head);
    cand.push_back(tail);
    cand.emplace_back(head.rbegin(), head.rend());
    cand.emplace_back(tail.rbegin(), tail.rend());
    std::vector<PositionMap> cmaps;
    for (const auto& c : cand)
        if (uniq.count(c)) cmaps.push_back(position_map(c, n));
    for (std::size_t a = 0; a < cmaps.size(); ++a)
        for (std::size_t b = a + 1; b < cmaps.size(); ++b) r.value = std::max(r.value, kendall_generalized(cmaps[a], cmaps[b], w));
    if (maps.size() >= 2) {
        Rng rng = make_rng(opt.seed, 3);
        for (std::size_t s = 0; s < opt.samples; ++s) {
            auto a = static_cast<std::size_t>(uniform_index(rng, maps.size()));
            auto b = static_cast<std::size_t>(uniform_index(rng, maps.size()));
            r.value = std::max(r.value, kendall_generalized(maps[a], maps[b], w));
        }
        for (const auto& cm : cmaps)
            for (std::size_t s = 0; s < std::min<std::size_t>(opt.samples, maps.size()); ++s) {
                auto b = static_cast<std::size_t>(uniform_index(rng, maps.size()));
                r.value = std::max(r.value, kendall_generalized(cm, maps[b], w));
            }
    }
    return r;
}

// Diameter of the set of all ordered m-arrangements of 1..n.
inline KappaResult kappa_arrangements(std::size_t n, std::size_t m, const RankWeights& w, KappaMode mode,
                                      KappaOptions opt = {}) {
    StateSpace sp = enumerate_states(PolicyConfig::lru(m), n);
    return kappa_diameter(sp, w, mode, opt);
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size() && a.size() >= 2, ErrorKind::invalid_input, "spearman needs two equal series");
    auto ranks = [](std::span<const double> v) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
        std::vector<double> r(v.size());
        for (std::size_t j = 0; j < idx.size();) {
            std::size_t k = j;
            while (k + 1 < idx.size() && v[idx[k + 1]] == v[idx[j]]) ++k;
            const double avg = 0.5 * static_cast<double>(j + k) + 1.0;
            for (std::size_t t = j; t <= k; ++t) r[idx[t]] = avg;
            j = k + 1;
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t j = 0; j < ra.size(); ++j) {
        ma += ra[j] / n;
        mb += rb[j] / n;
    }
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t j = 0; j < ra.size(); ++j) {
        sab += (ra[j] - ma) * (rb[j] - mb);
        saa += (ra[j] - ma) * (ra[j] - ma);
        sbb += (rb[j] - mb) * (rb[j] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

} // namespace cachemix
