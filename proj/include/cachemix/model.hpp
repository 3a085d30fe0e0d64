#pragma once

#include "cachemix/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace cachemix {

// Items are dense ranks 1..n, 1 being the most popular.
using ItemId = std::uint32_t;

class PopularityDist {
public:
    PopularityDist() = default;

    // Probabilities must be strictly positive and non-increasing. A sum within 1e-9
    // of one is accepted and renormalised so that the stored vector sums to 1.
    static PopularityDist from_probs(std::vector<double> probs) {
        require(!probs.empty(), ErrorKind::invalid_parameter, "empty probability vector");
        double sum = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            require(std::isfinite(probs[i]) && probs[i] > 0.0, ErrorKind::invalid_parameter,
                    "probabilities must be strictly positive");
            require(i == 0 || probs[i] <= probs[i - 1], ErrorKind::invalid_parameter,
                    "probabilities must be non-increasing in item rank");
            sum += probs[i];
        }
        require(std::abs(sum - 1.0) <= 1e-9, ErrorKind::invalid_parameter, "probabilities must sum to 1");
        for (double& p : probs) p /= sum;
        PopularityDist d;
        d.probs_ = std::move(probs);
        return d;
    }

    std::size_t n() const { return probs_.size(); }
    double p(ItemId i) const { return probs_[i - 1]; }
    std::span<const double> probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

inline PopularityDist make_zipf(std::size_t n, double alpha) {
    require(n >= 1, ErrorKind::invalid_parameter, "make_zipf needs n >= 1");
    require(std::isfinite(alpha) && alpha >= 0.0, ErrorKind::invalid_parameter, "zipf alpha must be >= 0");
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(static_cast<double>(i + 1), -alpha);
    // summing smallest terms first keeps the normaliser accurate for large n
    double sum = 0.0;
    for (std::size_t i = n; i-- > 0;) sum += w[i];
    for (double& x : w) x /= sum;
    // exact ties can only come from alpha == 0; make sure rounding never breaks monotonicity
    for (std::size_t i = 1; i < n; ++i) w[i] = std::min(w[i], w[i - 1]);
    return PopularityDist::from_probs(std::move(w));
}

enum class LevelKind { real, meta };

struct Level {
    LevelKind kind = LevelKind::real;
    std::vector<ItemId> slots;

    bool contains(ItemId i) const { return std::find(slots.begin(), slots.end(), i) != slots.end(); }
    friend bool operator==(const Level&, const Level&) = default;
};

struct CacheState {
    std::vector<Level> levels;

    friend bool operator==(const CacheState&, const CacheState&) = default;

    static CacheState single(std::vector<ItemId> slots) { return CacheState{{Level{LevelKind::real, std::move(slots)}}}; }
};

// Compact byte key used for hashing states; n must stay below 65535.
inline std::string state_key(const CacheState& s) {
    std::string key;
    std::size_t total = 0;
    for (const auto& l : s.levels) total += l.slots.size() + 1;
    key.reserve(2 * total);
    for (const auto& l : s.levels) {
        for (ItemId i : l.slots) {
            key.push_back(static_cast<char>(i & 0xff));
            key.push_back(static_cast<char>(i >> 8));
        }
        key.push_back('\xff');
        key.push_back('\xff');
    }
    return key;
}

inline std::string format_state(const CacheState& s) {
    std::ostringstream os;
    for (std::size_t l = 0; l < s.levels.size(); ++l) {
        if (l) os << ' ';
        os << (s.levels[l].kind == LevelKind::meta ? "m(" : "(");
        for (std::size_t j = 0; j < s.levels[l].slots.size(); ++j) {
            if (j) os << ' ';
            os << s.levels[l].slots[j];
        }
        os << ')';
    }
    return os.str();
}

inline CacheState ideal_vector(const PopularityDist& dist, std::size_t m) {
    require(m >= 1 && m <= dist.n(), ErrorKind::invalid_parameter, "ideal_vector needs 1 <= m <= n");
    std::vector<ItemId> slots(m);
    for (std::size_t j = 0; j < m; ++j) slots[j] = static_cast<ItemId>(j + 1);
    return CacheState::single(std::move(slots));
}

enum class PolicyKind { lru, fifo, random, climb, klru, lrum, arc, alru };

// shared: every level sees every request (level 1 always updated), items may sit in several levels.
// exclusive: an item lives in one level at a time and moves up one level per hit.
enum class KlruVariant { shared, exclusive };

struct AlruSchedule {
    long T = 0;
    double c = 1.0;
};

struct PolicyConfig {
    PolicyKind kind = PolicyKind::lru;
    std::size_t m = 1;
    std::size_t k = 1;
    std::vector<std::size_t> m_vec;
    std::optional<double> beta;
    std::optional<AlruSchedule> schedule;
    std::uint64_t rng_seed = 0;
    KlruVariant klru_variant = KlruVariant::shared;

    static PolicyConfig lru(std::size_t m) { return simple(PolicyKind::lru, m); }
    static PolicyConfig fifo(std::size_t m) { return simple(PolicyKind::fifo, m); }
    static PolicyConfig random(std::size_t m, std::uint64_t seed = 0) {
        auto c = simple(PolicyKind::random, m);
        c.rng_seed = seed;
        return c;
    }
    static PolicyConfig climb(std::size_t m) { return simple(PolicyKind::climb, m); }
    static PolicyConfig arc(std::size_t m) { return simple(PolicyKind::arc, m); }
    static PolicyConfig klru(std::size_t k, std::size_t m, KlruVariant v = KlruVariant::shared) {
        auto c = simple(PolicyKind::klru, m);
        c.k = k;
        c.klru_variant = v;
        return c;
    }
    static PolicyConfig lrum(std::vector<std::size_t> caps) {
        PolicyConfig c;
        c.kind = PolicyKind::lrum;
        c.m = 0;
        for (auto x : caps) c.m += x;
        c.m_vec = std::move(caps);
        return c;
    }
    static PolicyConfig alru(double beta, std::size_t m) {
        auto c = simple(PolicyKind::alru, m);
        c.beta = beta;
        return c;
    }
    static PolicyConfig alru_dynamic(long T, double cc, std::size_t m) {
        auto c = simple(PolicyKind::alru, m);
        c.schedule = AlruSchedule{T, cc};
        return c;
    }

    bool single_level() const {
        return kind == PolicyKind::lru || kind == PolicyKind::fifo || kind == PolicyKind::random ||
               kind == PolicyKind::climb;
    }

    void validate() const {
        require(m >= 1, ErrorKind::invalid_parameter, "cache size m must be >= 1");
        switch (kind) {
        case PolicyKind::klru:
            require(k >= 1, ErrorKind::invalid_parameter, "k-LRU needs k >= 1");
            break;
        case PolicyKind::lrum: {
            require(!m_vec.empty(), ErrorKind::invalid_parameter, "LRU(m) needs at least one level");
            std::size_t s = 0;
            for (auto x : m_vec) {
                require(x >= 1, ErrorKind::invalid_parameter, "LRU(m) level capacities must be >= 1");
                s += x;
            }
            require(s == m, ErrorKind::invalid_parameter, "LRU(m) capacities must sum to m");
            break;
        }
        case PolicyKind::alru:
            require(beta.has_value() != schedule.has_value(), ErrorKind::invalid_parameter,
                    "A-LRU needs exactly one of beta or schedule");
            if (beta) require(*beta >= 0.0 && *beta <= 1.0, ErrorKind::invalid_parameter, "beta must lie in [0,1]");
            if (schedule) {
                require(schedule->c > 0.0, ErrorKind::invalid_parameter, "schedule c must be > 0");
                require(schedule->T >= 0, ErrorKind::invalid_parameter, "schedule T must be >= 0");
            }
            break;
        default:
            break;
        }
    }

    std::string name() const {
        std::ostringstream os;
        switch (kind) {
        case PolicyKind::lru: return "lru";
        case PolicyKind::fifo: return "fifo";
        case PolicyKind::random: return "random";
        case PolicyKind::climb: return "climb";
        case PolicyKind::arc: return "arc";
        case PolicyKind::klru:
            os << "klru:" << k;
            if (klru_variant == KlruVariant::exclusive) os << ":exclusive";
            return os.str();
        case PolicyKind::lrum:
            os << "lrum:";
            for (std::size_t i = 0; i < m_vec.size(); ++i) os << (i ? "," : "") << m_vec[i];
            return os.str();
        case PolicyKind::alru:
            if (schedule) {
                os << "alru:dyn:" << schedule->T << ',' << schedule->c;
            } else {
                os << "alru:" << *beta;
            }
            return os.str();
        }
        return "?";
    }

private:
    static PolicyConfig simple(PolicyKind kind, std::size_t m) {
        PolicyConfig c;
        c.kind = kind;
        c.m = m;
        return c;
    }
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::invalid_parameter, "bad number for " + what + ": '" + s + "'");
    }
    require(used == s.size(), ErrorKind::invalid_parameter, "bad number for " + what + ": '" + s + "'");
    return v;
}

inline long parse_long(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::invalid_parameter, "bad integer for " + what + ": '" + s + "'");
    }
    require(used == s.size(), ErrorKind::invalid_parameter, "bad integer for " + what + ": '" + s + "'");
    return v;
}

} // namespace detail

// Policy syntax: lru | fifo | random | climb | arc | klru:k[:exclusive] | lrum:m1,m2,... |
// alru:beta | alru:dyn:T,c. For lrum the capacities define m.
inline PolicyConfig parse_policy(std::string_view spec, std::size_t m) {
    auto parts = detail::split(spec, ':');
    const std::string& head = parts[0];
    PolicyConfig c;
    if (head == "lru" || head == "fifo" || head == "random" || head == "climb" || head == "arc") {
        require(parts.size() == 1, ErrorKind::invalid_parameter, "policy '" + head + "' takes no arguments");
        if (head == "lru") c = PolicyConfig::lru(m);
        if (head == "fifo") c = PolicyConfig::fifo(m);
        if (head == "random") c = PolicyConfig::random(m);
        if (head == "climb") c = PolicyConfig::climb(m);
        if (head == "arc") c = PolicyConfig::arc(m);
    } else if (head == "klru") {
        require(parts.size() == 2 || parts.size() == 3, ErrorKind::invalid_parameter, "expected klru:k[:exclusive]");
        long k = detail::parse_long(parts[1], "k");
        require(k >= 1, ErrorKind::invalid_parameter, "k must be >= 1");
        KlruVariant v = KlruVariant::shared;
        if (parts.size() == 3) {
            require(parts[2] == "exclusive" || parts[2] == "shared", ErrorKind::invalid_parameter,
                    "k-LRU variant must be shared or exclusive");
            if (parts[2] == "exclusive") v = KlruVariant::exclusive;
        }
        c = PolicyConfig::klru(static_cast<std::size_t>(k), m, v);
    } else if (head == "lrum") {
        require(parts.size() == 2, ErrorKind::invalid_parameter, "expected lrum:m1,m2,...");
        std::vector<std::size_t> caps;
        for (const auto& x : detail::split(parts[1], ',')) {
            long v = detail::parse_long(x, "level capacity");
            require(v >= 1, ErrorKind::invalid_parameter, "level capacities must be >= 1");
            caps.push_back(static_cast<std::size_t>(v));
        }
        c = PolicyConfig::lrum(std::move(caps));
        require(m == 0 || c.m == m, ErrorKind::invalid_parameter, "lrum capacities must sum to --m");
    } else if (head == "alru") {
        require(parts.size() >= 2, ErrorKind::invalid_parameter, "expected alru:beta or alru:dyn:T,c");
        if (parts[1] == "dyn") {
            require(parts.size() == 3, ErrorKind::invalid_parameter, "expected alru:dyn:T,c");
            auto tc = detail::split(parts[2], ',');
            require(tc.size() == 2, ErrorKind::invalid_parameter, "expected alru:dyn:T,c");
            c = PolicyConfig::alru_dynamic(detail::parse_long(tc[0], "T"), detail::parse_double(tc[1], "c"), m);
        } else {
            require(parts.size() == 2, ErrorKind::invalid_parameter, "expected alru:beta");
            c = PolicyConfig::alru(detail::parse_double(parts[1], "beta"), m);
        }
    } else {
        fail(ErrorKind::invalid_parameter, "unknown policy '" + std::string(spec) + "'");
    }
    c.validate();
    return c;
}

// A-LRU segment boundaries. Ranges with lo > hi are empty.
struct AlruPartition {
    std::size_t c1, c2, c3, c4;
    std::size_t m1, m2, m3, m4;
    std::size_t real_front;  // capacity of C2 (positions c1..c2)
    std::size_t real_back;   // capacity of C1 (positions c3..c4)
    std::size_t meta_front;  // capacity of M2
    std::size_t meta_back;   // capacity of M1

    friend bool operator==(const AlruPartition&, const AlruPartition&) = default;
};

inline std::size_t floor_guarded(double x) {
    // products like (1-0.7)*10 land just below the integer
    return static_cast<std::size_t>(std::floor(x + 1e-9));
}

inline AlruPartition alru_partition(double beta, std::size_t m) {
    require(beta >= 0.0 && beta <= 1.0, ErrorKind::invalid_parameter, "beta must lie in [0,1]");
    require(m >= 1, ErrorKind::invalid_parameter, "m must be >= 1");
    const std::size_t a = std::min(m, floor_guarded((1.0 - beta) * static_cast<double>(m)));
    const std::size_t b = std::min(m, floor_guarded(beta * static_cast<double>(m)));
    AlruPartition p{};
    p.c1 = a >= 1 ? 1 : 0;
    p.c2 = a;
    p.c3 = a + 1;
    p.c4 = std::max(m, a + 1);
    p.m1 = b >= 1 ? 1 : 0;
    p.m2 = b;
    p.m3 = b + 1;
    p.m4 = std::max(m, b + 1);
    p.real_front = a;
    p.real_back = m - a;
    p.meta_front = b;
    p.meta_back = m - b;
    return p;
}

inline double alru_beta(long t, std::size_t m, long T, double c) {
    require(c > 0.0, ErrorKind::invalid_parameter, "schedule c must be > 0");
    require(T >= 0, ErrorKind::invalid_parameter, "schedule T must be >= 0");
    const double md = static_cast<double>(m);
    const double excess = static_cast<double>(std::max(0L, t - T));
    return md / (md + excess / c);
}

// Kinds and capacities of the levels of a policy's state. A-LRU uses the
// partition for `beta`; ARC reports the directory bounds of T1, T2, B1, B2.
struct LevelShape {
    LevelKind kind;
    std::size_t capacity;
};

inline std::vector<LevelShape> level_shapes(const PolicyConfig& c, std::optional<double> beta = std::nullopt) {
    std::vector<LevelShape> out;
    switch (c.kind) {
    case PolicyKind::lru:
    case PolicyKind::fifo:
    case PolicyKind::random:
    case PolicyKind::climb:
        out.push_back({LevelKind::real, c.m});
        break;
    case PolicyKind::klru:
        for (std::size_t l = 0; l + 1 < c.k; ++l) out.push_back({LevelKind::meta, c.m});
        out.push_back({LevelKind::real, c.m});
        break;
    case PolicyKind::lrum:
        for (auto x : c.m_vec) out.push_back({LevelKind::real, x});
        break;
    case PolicyKind::arc:
        out = {{LevelKind::real, c.m}, {LevelKind::real, c.m}, {LevelKind::meta, c.m}, {LevelKind::meta, c.m}};
        break;
    case PolicyKind::alru: {
        double b = beta ? *beta : (c.beta ? *c.beta : 1.0);
        auto p = alru_partition(b, c.m);
        out = {{LevelKind::real, p.real_front},
               {LevelKind::real, p.real_back},
               {LevelKind::meta, p.meta_front},
               {LevelKind::meta, p.meta_back}};
        break;
    }
    }
    return out;
}

inline CacheState empty_state(const PolicyConfig& c, std::optional<double> beta = std::nullopt) {
    CacheState s;
    for (const auto& sh : level_shapes(c, beta)) s.levels.push_back(Level{sh.kind, {}});
    return s;
}

enum class Violation {
    duplicate_in_level,
    duplicate_across_levels,
    level_count_mismatch,
    level_kind_mismatch,
    over_capacity,
    under_capacity,
    item_out_of_range,
    arc_directory_bound
};

inline const char* to_string(Violation v) {
    switch (v) {
    case Violation::duplicate_in_level: return "duplicate-in-level";
    case Violation::duplicate_across_levels: return "duplicate-across-levels";
    case Violation::level_count_mismatch: return "level-count-mismatch";
    case Violation::level_kind_mismatch: return "level-kind-mismatch";
    case Violation::over_capacity: return "over-capacity";
    case Violation::under_capacity: return "under-capacity";
    case Violation::item_out_of_range: return "item-out-of-range";
    case Violation::arc_directory_bound: return "arc-directory-bound";
    }
    return "?";
}

struct ValidateOptions {
    std::size_t n = 0;          // 0 skips the item range check
    bool require_full = false;  // partial levels are legal during cold start
};

inline std::vector<Violation> validate_state(const CacheState& s, const PolicyConfig& c, ValidateOptions opt = {}) {
    std::vector<Violation> out;
    auto add = [&](Violation v) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    const bool dynamic_alru = c.kind == PolicyKind::alru && c.schedule.has_value();
    auto shapes = level_shapes(c, dynamic_alru ? std::optional<double>(1.0) : std::nullopt);
    if (s.levels.size() != shapes.size()) {
        add(Violation::level_count_mismatch);
        return out;
    }
    for (std::size_t l = 0; l < s.levels.size(); ++l) {
        const auto& lv = s.levels[l];
        if (lv.kind != shapes[l].kind) add(Violation::level_kind_mismatch);
        for (std::size_t a = 0; a < lv.slots.size(); ++a) {
            if (lv.slots[a] < 1 || (opt.n && lv.slots[a] > opt.n)) add(Violation::item_out_of_range);
            for (std::size_t b = a + 1; b < lv.slots.size(); ++b)
                if (lv.slots[a] == lv.slots[b]) add(Violation::duplicate_in_level);
        }
        if (!dynamic_alru && c.kind != PolicyKind::arc) {
            if (lv.slots.size() > shapes[l].capacity) add(Violation::over_capacity);
            if (opt.require_full && lv.slots.size() < shapes[l].capacity) add(Violation::under_capacity);
        }
    }
    auto disjoint = [&](std::size_t a, std::size_t b) {
        for (ItemId i : s.levels[a].slots)
            if (s.levels[b].contains(i)) add(Violation::duplicate_across_levels);
    };
    if (c.kind == PolicyKind::lrum) {
        for (std::size_t a = 0; a < s.levels.size(); ++a)
            for (std::size_t b = a + 1; b < s.levels.size(); ++b) disjoint(a, b);
    }
    if (c.kind == PolicyKind::alru || c.kind == PolicyKind::arc) {
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = a + 1; b < 4; ++b)
                if (c.kind == PolicyKind::arc || (a < 2) == (b < 2)) disjoint(a, b);
        const auto sz = [&](std::size_t l) { return s.levels[l].slots.size(); };
        if (dynamic_alru) {
            if (sz(0) + sz(1) > c.m || sz(2) + sz(3) > c.m) add(Violation::over_capacity);
        }
        if (c.kind == PolicyKind::arc) {
            if (sz(0) + sz(1) > c.m || sz(0) + sz(2) > c.m || sz(0) + sz(1) + sz(2) + sz(3) > 2 * c.m)
                add(Violation::arc_directory_bound);
            if (opt.require_full && sz(0) + sz(1) < c.m) add(Violation::under_capacity);
        }
    }
    return out;
}

// Real content in rank-priority order, used as the permutation compared with c*.
// LRU(m) lists the top level first; ARC lists T2 before T1.
inline std::vector<ItemId> real_projection(const CacheState& s, const PolicyConfig& c) {
    std::vector<ItemId> out;
    auto append = [&](const Level& l) { out.insert(out.end(), l.slots.begin(), l.slots.end()); };
    if (c.kind == PolicyKind::lrum) {
        for (std::size_t l = s.levels.size(); l-- > 0;) append(s.levels[l]);
    } else if (c.kind == PolicyKind::arc) {
        append(s.levels[1]);
        append(s.levels[0]);
    } else {
        for (const auto& l : s.levels)
            if (l.kind == LevelKind::real) append(l);
    }
    return out;
}

// Builds a state of the policy's layout whose real projection is `items`
// (priority order). Meta levels are filled with the same items where they fit.
inline CacheState state_from_projection(const PolicyConfig& c, const std::vector<ItemId>& items) {
    require(items.size() == c.m, ErrorKind::invalid_parameter, "projection must list m items");
    CacheState s = empty_state(c);
    switch (c.kind) {
    case PolicyKind::lrum: {
        std::size_t pos = 0;
        for (std::size_t l = s.levels.size(); l-- > 0;) {
            for (std::size_t j = 0; j < c.m_vec[l]; ++j) s.levels[l].slots.push_back(items[pos++]);
        }
        break;
    }
    case PolicyKind::arc:
        s.levels[1].slots = items;
        break;
    case PolicyKind::alru: {
        auto shapes = level_shapes(c);
        std::size_t a = shapes[0].capacity;
        s.levels[0].slots.assign(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(a));
        s.levels[1].slots.assign(items.begin() + static_cast<std::ptrdiff_t>(a), items.end());
        s.levels[3].slots.assign(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(shapes[3].capacity));
        break;
    }
    default:
        for (auto& l : s.levels) l.slots = items;
        break;
    }
    return s;
}

struct RankWeights {
    std::vector<double> w;     // w[i-1] for item i
    std::vector<double> zeta;  // zeta[j-1] for position j; zeta[0] is ζ_1
    std::vector<double> q;     // q[0..m]

    static RankWeights make(std::vector<double> w, std::vector<double> zeta) {
        RankWeights r;
        for (double x : w) require(x > 0.0, ErrorKind::invalid_parameter, "rank weights w must be > 0");
        for (double x : zeta) require(x >= 0.0, ErrorKind::invalid_parameter, "swap costs zeta must be >= 0");
        r.w = std::move(w);
        r.zeta = std::move(zeta);
        const std::size_t m = r.zeta.size();
        r.q.assign(m + 1, 0.0);
        if (m >= 1) r.q[1] = 1.0;
        for (std::size_t j = 2; j <= m; ++j) r.q[j] = r.q[j - 1] + r.zeta[j - 1];
        return r;
    }

    // w_i = n-i+1, ζ_1 = 0.1, ζ_j = ln j
    static RankWeights standard(std::size_t n, std::size_t m) {
        std::vector<double> w(n), z(m);
        for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<double>(n - i);
        for (std::size_t j = 0; j < m; ++j) z[j] = j == 0 ? 0.1 : std::log(static_cast<double>(j + 1));
        return make(std::move(w), std::move(z));
    }

    static RankWeights unit(std::size_t n, std::size_t m) {
        return make(std::vector<double>(n, 1.0), std::vector<double>(m, 1.0));
    }

    // hit/miss only: all cached positions cost the same
    static RankWeights presence(std::size_t n, std::size_t m) {
        std::vector<double> z(m, 0.0);
        return make(std::vector<double>(n, 1.0), std::move(z));
    }

    std::size_t n() const { return w.size(); }
    std::size_t m() const { return zeta.size(); }
};

inline RankWeights parse_weights(std::string_view name, std::size_t n, std::size_t m) {
    if (name == "default") return RankWeights::standard(n, m);
    if (name == "unit") return RankWeights::unit(n, m);
    if (name == "presence") return RankWeights::presence(n, m);
    fail(ErrorKind::invalid_parameter, "unknown weights preset '" + std::string(name) + "'");
}

} // namespace cachemix
