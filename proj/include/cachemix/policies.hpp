#pragma once

#include "cachemix/model.hpp"
#include "cachemix/random.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace cachemix {

namespace list {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

inline std::size_t find(const std::vector<ItemId>& v, ItemId i) {
    for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] == i) return j;
    return npos;
}

inline void move_to_front(std::vector<ItemId>& v, std::size_t pos) {
    std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(pos),
                v.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
}

// Inserts at the front; returns the item pushed out of the back when over capacity.
inline std::optional<ItemId> push_front(std::vector<ItemId>& v, ItemId i, std::size_t cap) {
    if (cap == 0) return i;
    v.insert(v.begin(), i);
    if (v.size() > cap) {
        ItemId out = v.back();
        v.pop_back();
        return out;
    }
    return std::nullopt;
}

inline void erase_at(std::vector<ItemId>& v, std::size_t pos) { v.erase(v.begin() + static_cast<std::ptrdiff_t>(pos)); }

inline bool erase(std::vector<ItemId>& v, ItemId i) {
    auto pos = find(v, i);
    if (pos == npos) return false;
    erase_at(v, pos);
    return true;
}

inline ItemId pop_back(std::vector<ItemId>& v) {
    ItemId x = v.back();
    v.pop_back();
    return x;
}

} // namespace list

inline bool step_lru(CacheState& s, ItemId i, std::size_t m) {
    auto& v = s.levels[0].slots;
    auto pos = list::find(v, i);
    if (pos != list::npos) {
        list::move_to_front(v, pos);
        return true;
    }
    list::push_front(v, i, m);
    return false;
}

inline bool step_fifo(CacheState& s, ItemId i, std::size_t m) {
    auto& v = s.levels[0].slots;
    if (list::find(v, i) != list::npos) return true;
    list::push_front(v, i, m);
    return false;
}

// Miss replaces `slot` (0-based) once the cache is full; before that the item fills the next free slot.
inline bool step_random_at(CacheState& s, ItemId i, std::size_t m, std::size_t slot) {
    auto& v = s.levels[0].slots;
    if (list::find(v, i) != list::npos) return true;
    if (v.size() < m) {
        v.push_back(i);
    } else {
        v[slot] = i;
    }
    return false;
}

inline bool step_random(CacheState& s, ItemId i, std::size_t m, Rng& rng) {
    const auto& v = s.levels[0].slots;
    if (list::find(v, i) != list::npos) return true;
    std::size_t slot = v.size() < m ? 0 : static_cast<std::size_t>(uniform_index(rng, m));
    return step_random_at(s, i, m, slot);
}

inline bool step_climb(CacheState& s, ItemId i, std::size_t m) {
    auto& v = s.levels[0].slots;
    auto pos = list::find(v, i);
    if (pos != list::npos) {
        if (pos > 0) std::swap(v[pos], v[pos - 1]);
        return true;
    }
    if (v.size() < m) {
        v.push_back(i);
    } else {
        v.back() = i;
    }
    return false;
}

inline bool step_klru(CacheState& s, ItemId i, std::size_t m, KlruVariant variant = KlruVariant::shared) {
    const std::size_t k = s.levels.size();
    if (variant == KlruVariant::shared) {
        // membership is read before any level changes
        std::vector<bool> before(k);
        for (std::size_t l = 0; l < k; ++l) before[l] = s.levels[l].contains(i);
        for (std::size_t l = 0; l < k; ++l) {
            auto& v = s.levels[l].slots;
            if (before[l]) {
                list::move_to_front(v, list::find(v, i));
            } else if (l == 0 || before[l - 1]) {
                list::push_front(v, i, m);
            }
        }
        return before[k - 1];
    }
    std::size_t where = k;
    for (std::size_t l = 0; l < k && where == k; ++l)
        if (s.levels[l].contains(i)) where = l;
    if (where == k) {
        list::push_front(s.levels[0].slots, i, m);
        return false;
    }
    if (where == k - 1) {
        auto& v = s.levels[k - 1].slots;
        list::move_to_front(v, list::find(v, i));
        return true;
    }
    list::erase(s.levels[where].slots, i);
    list::push_front(s.levels[where + 1].slots, i, m);
    return false;
}

inline bool step_lrum(CacheState& s, ItemId i, const std::vector<std::size_t>& caps) {
    const std::size_t h = s.levels.size();
    for (std::size_t l = 0; l < h; ++l) {
        auto& v = s.levels[l].slots;
        auto pos = list::find(v, i);
        if (pos == list::npos) continue;
        if (l + 1 == h) {
            list::move_to_front(v, pos);
            return true;
        }
        list::erase_at(v, pos);
        auto demoted = list::push_front(s.levels[l + 1].slots, i, caps[l + 1]);
        if (demoted) v.insert(v.begin(), *demoted);
        return true;
    }
    list::push_front(s.levels[0].slots, i, caps[0]);
    return false;
}

// ARC over levels (T1, T2, B1, B2) with target size p for T1.
inline bool step_arc(CacheState& s, ItemId i, std::size_t m, double& p) {
    auto& t1 = s.levels[0].slots;
    auto& t2 = s.levels[1].slots;
    auto& b1 = s.levels[2].slots;
    auto& b2 = s.levels[3].slots;
    const double c = static_cast<double>(m);

    auto replace = [&](bool in_b2) {
        const double n1 = static_cast<double>(t1.size());
        if (!t1.empty() && (n1 > p || (in_b2 && n1 == p) || t2.empty())) {
            b1.insert(b1.begin(), list::pop_back(t1));
        } else if (!t2.empty()) {
            b2.insert(b2.begin(), list::pop_back(t2));
        }
    };

    if (auto pos = list::find(t1, i); pos != list::npos) {
        list::erase_at(t1, pos);
        t2.insert(t2.begin(), i);
        return true;
    }
    if (auto pos = list::find(t2, i); pos != list::npos) {
        list::move_to_front(t2, pos);
        return true;
    }
    if (auto pos = list::find(b1, i); pos != list::npos) {
        const double d = b1.size() >= b2.size() ? 1.0 : static_cast<double>(b2.size()) / static_cast<double>(b1.size());
        p = std::min(c, p + d);
        replace(false);
        list::erase(b1, i);
        t2.insert(t2.begin(), i);
        return false;
    }
    if (auto pos = list::find(b2, i); pos != list::npos) {
        const double d = b2.size() >= b1.size() ? 1.0 : static_cast<double>(b1.size()) / static_cast<double>(b2.size());
        p = std::max(0.0, p - d);
        replace(true);
        list::erase(b2, i);
        t2.insert(t2.begin(), i);
        return false;
    }
    const std::size_t l1 = t1.size() + b1.size();
    const std::size_t l2 = t2.size() + b2.size();
    if (l1 == m) {
        if (t1.size() < m) {
            b1.pop_back();
            replace(false);
        } else {
            t1.pop_back();
        }
    } else if (l1 + l2 >= m) {
        if (l1 + l2 == 2 * m) b2.pop_back();
        replace(false);
    }
    t1.insert(t1.begin(), i);
    return false;
}

namespace detail {

// places a meta entry at the front of M1, keeping meta ids unique
inline void alru_meta_back(CacheState& s, ItemId x, const AlruPartition& p) {
    auto& m2 = s.levels[2].slots;
    auto& m1 = s.levels[3].slots;
    list::erase(m2, x);
    if (p.meta_back == 0) {
        list::erase(m1, x);
        return;
    }
    auto pos = list::find(m1, x);
    if (pos != list::npos) {
        list::move_to_front(m1, pos);
        return;
    }
    list::push_front(m1, x, p.meta_back);
}

inline void alru_meta_front(CacheState& s, ItemId x, const AlruPartition& p) {
    auto& m2 = s.levels[2].slots;
    if (p.meta_front == 0) return;
    list::erase(s.levels[3].slots, x);
    list::erase(m2, x);
    if (auto out = list::push_front(m2, x, p.meta_front)) alru_meta_back(s, *out, p);
}

} // namespace detail

// A-LRU over levels (C2, C1, M2, M1): C2/M2 sit at the front positions of the
// real and meta caches, C1/M1 at the back. Zero-capacity segments are skipped.
inline bool step_alru(CacheState& s, ItemId i, const AlruPartition& p) {
    auto& c2 = s.levels[0].slots;
    auto& c1 = s.levels[1].slots;
    const auto in_c2 = list::find(c2, i);
    const auto in_c1 = list::find(c1, i);
    bool hit = false;
    bool refresh = false;

    if (in_c2 != list::npos) {
        list::move_to_front(c2, in_c2);
        hit = refresh = true;
    } else if (in_c1 != list::npos) {
        hit = true;
        if (p.real_front > 0) {
            list::erase_at(c1, in_c1);
            if (auto out = list::push_front(c2, i, p.real_front)) c1.insert(c1.begin(), *out);
            refresh = true;
        } else {
            list::move_to_front(c1, in_c1);
        }
    } else {
        const bool in_m1 = s.levels[3].contains(i);
        const bool in_m2 = s.levels[2].contains(i);
        if ((in_m1 || in_m2) && p.real_front > 0) {
            list::erase(s.levels[2].slots, i);
            if (auto out = list::push_front(c2, i, p.real_front)) detail::alru_meta_front(s, *out, p);
            refresh = true;
        } else if (p.real_back > 0) {
            if (auto out = list::push_front(c1, i, p.real_back)) detail::alru_meta_back(s, *out, p);
        } else {
            refresh = true;
        }
    }
    if (refresh) detail::alru_meta_back(s, i, p);
    return hit;
}

// Moves content across segment boundaries after a partition change, keeping
// the concatenated order of the real and of the meta cache.
inline void alru_rebalance(CacheState& s, const AlruPartition& p) {
    auto shift = [](std::vector<ItemId>& front, std::vector<ItemId>& back, std::size_t cap_front,
                    std::size_t cap_back) {
        while (front.size() > cap_front) back.insert(back.begin(), list::pop_back(front));
        while (back.size() > cap_back && front.size() < cap_front) {
            front.push_back(back.front());
            back.erase(back.begin());
        }
        while (back.size() > cap_back) back.pop_back();
    };
    shift(s.levels[0].slots, s.levels[1].slots, p.real_front, p.real_back);
    shift(s.levels[2].slots, s.levels[3].slots, p.meta_front, p.meta_back);
}

class PolicyInstance {
public:
    explicit PolicyInstance(PolicyConfig config) : PolicyInstance(config, empty_state(config)) {}

    PolicyInstance(PolicyConfig config, CacheState initial)
        : config_(std::move(config)), state_(std::move(initial)), rng_(make_rng(config_.rng_seed, 1)) {
        config_.validate();
        require(state_.levels.size() == level_shapes(config_).size(), ErrorKind::invalid_input,
                "initial state has the wrong number of levels");
        if (config_.kind == PolicyKind::alru) {
            partition_ = alru_partition(config_.beta ? *config_.beta : 1.0, config_.m);
            if (config_.schedule) beta_ = 1.0;
        }
    }

    // Processes the next request; returns whether it was a hit.
    bool request(ItemId i) {
        ++t_;
        switch (config_.kind) {
        case PolicyKind::lru: return step_lru(state_, i, config_.m);
        case PolicyKind::fifo: return step_fifo(state_, i, config_.m);
        case PolicyKind::random: return step_random(state_, i, config_.m, rng_);
        case PolicyKind::climb: return step_climb(state_, i, config_.m);
        case PolicyKind::klru: return step_klru(state_, i, config_.m, config_.klru_variant);
        case PolicyKind::lrum: return step_lrum(state_, i, config_.m_vec);
        case PolicyKind::arc: return step_arc(state_, i, config_.m, arc_p_);
        case PolicyKind::alru:
            if (config_.schedule) {
                double b = alru_beta(t_, config_.m, config_.schedule->T, config_.schedule->c);
                if (b != beta_) {
                    beta_ = b;
                    auto np = alru_partition(b, config_.m);
                    if (!(np == partition_)) {
                        partition_ = np;
                        alru_rebalance(state_, partition_);
                    }
                }
            }
            return step_alru(state_, i, partition_);
        }
        return false;
    }

    const PolicyConfig& config() const { return config_; }
    const CacheState& state() const { return state_; }
    long requests() const { return t_; }
    double arc_target() const { return arc_p_; }
    double current_beta() const { return beta_; }
    std::vector<ItemId> real_items() const { return real_projection(state_, config_); }

private:
    PolicyConfig config_;
    CacheState state_;
    Rng rng_;
    double arc_p_ = 0.0;
    long t_ = 0;
    double beta_ = 1.0;
    AlruPartition partition_{};
};

// Deterministic successor for policies without internal randomness or auxiliary state.
inline bool step_state(const PolicyConfig& c, CacheState& s, ItemId i, const AlruPartition* part = nullptr) {
    switch (c.kind) {
    case PolicyKind::lru: return step_lru(s, i, c.m);
    case PolicyKind::fifo: return step_fifo(s, i, c.m);
    case PolicyKind::climb: return step_climb(s, i, c.m);
    case PolicyKind::klru: return step_klru(s, i, c.m, c.klru_variant);
    case PolicyKind::lrum: return step_lrum(s, i, c.m_vec);
    case PolicyKind::alru: {
        if (part) return step_alru(s, i, *part);
        return step_alru(s, i, alru_partition(c.beta ? *c.beta : 1.0, c.m));
    }
    case PolicyKind::random:
    case PolicyKind::arc:
        break;
    }
    fail(ErrorKind::invalid_parameter, "policy " + c.name() + " has no deterministic successor");
}

} // namespace cachemix
