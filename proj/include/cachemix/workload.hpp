#pragma once

#include "cachemix/model.hpp"
#include "cachemix/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace cachemix {

// Request t (1-based) is items[t-1].
struct RequestStream {
    std::vector<ItemId> items;
    std::vector<long long> timestamps;  // empty unless read from a timestamped trace
    std::vector<std::string> keys;      // keys[id-1] when ids were densified from a trace

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
    std::size_t max_item() const {
        ItemId m = 0;
        for (ItemId i : items) m = std::max(m, i);
        return m;
    }
};

namespace detail {

class RankSampler {
public:
    explicit RankSampler(const PopularityDist& d) : cdf_(d.n()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d.n(); ++i) {
            acc += d.probs()[i];
            cdf_[i] = acc;
        }
        cdf_.back() = 1.0;
    }

    // 0-based rank
    std::size_t draw(Rng& rng) const {
        const double u = uniform01(rng);
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    }

private:
    std::vector<double> cdf_;
};

} // namespace detail

inline RequestStream sample_irm(const PopularityDist& dist, std::size_t count, std::uint64_t seed) {
    require(count >= 1, ErrorKind::invalid_parameter, "count must be >= 1");
    detail::RankSampler sampler(dist);
    Rng rng = make_rng(seed, 0);
    RequestStream s;
    s.items.resize(count);
    for (auto& x : s.items) x = static_cast<ItemId>(sampler.draw(rng) + 1);
    return s;
}

enum class ModulationMode { full_shuffle, top_swap };

struct ModulationSpec {
    double shuffle_rate = 1e-3;
    ModulationMode mode = ModulationMode::full_shuffle;
};

struct ModulatedStream {
    RequestStream stream;
    std::size_t epochs = 0;
};

// Before each request, with probability shuffle_rate, the assignment of items to
// popularity ranks is re-permuted: fully, or (top_swap) within a random prefix of
// length L uniform in [2, n].
inline ModulatedStream sample_modulated(const PopularityDist& dist, ModulationSpec spec, std::size_t count,
                                        std::uint64_t seed) {
    require(count >= 1, ErrorKind::invalid_parameter, "count must be >= 1");
    require(spec.shuffle_rate > 0.0 && spec.shuffle_rate <= 1.0, ErrorKind::invalid_parameter,
            "shuffle rate must lie in (0, 1]");
    const std::size_t n = dist.n();
    detail::RankSampler sampler(dist);
    Rng rng = make_rng(seed, 0);
    Rng perm_rng = make_rng(seed, 2);
    std::vector<ItemId> owner(n);
    std::iota(owner.begin(), owner.end(), ItemId{1});
    auto shuffle_prefix = [&](std::size_t len) {
        for (std::size_t j = len; j-- > 1;) {
            auto r = static_cast<std::size_t>(uniform_index(perm_rng, j + 1));
            std::swap(owner[j], owner[r]);
        }
    };
    ModulatedStream out;
    out.stream.items.resize(count);
    for (auto& x : out.stream.items) {
        if (bernoulli(rng, spec.shuffle_rate)) {
            ++out.epochs;
            if (n >= 2) {
                std::size_t len = n;
                if (spec.mode == ModulationMode::top_swap) len = 2 + static_cast<std::size_t>(uniform_index(perm_rng, n - 1));
                shuffle_prefix(len);
            }
        }
        x = owner[sampler.draw(rng)];
    }
    return out;
}

enum class TraceFormat { lines, csv };

// numeric: keys are taken as item ids verbatim (used for traces written by `gen`)
enum class KeyMode { densify, numeric };

inline TraceFormat parse_trace_format(std::string_view s) {
    if (s == "lines") return TraceFormat::lines;
    if (s == "csv") return TraceFormat::csv;
    fail(ErrorKind::invalid_parameter, "unknown trace format '" + std::string(s) + "'");
}

inline RequestStream parse_trace(std::istream& in, TraceFormat format, KeyMode mode = KeyMode::densify) {
    RequestStream s;
    std::unordered_map<std::string, ItemId> ids;
    std::string line;
    std::size_t lineno = 0;
    auto intern = [&](const std::string& key) -> ItemId {
        if (mode == KeyMode::numeric) {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(key, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != key.size() || v < 1 || v > 0xfffffffeLL)
                fail(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": key '" + key + "' is not an item id");
            return static_cast<ItemId>(v);
        }
        auto [it, inserted] = ids.emplace(key, static_cast<ItemId>(ids.size() + 1));
        if (inserted) s.keys.push_back(key);
        return it->second;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (format == TraceFormat::lines) {
            s.items.push_back(intern(line));
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos)
            fail(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": expected 'timestamp,key'");
        const std::string ts = line.substr(0, comma);
        const std::string key = line.substr(comma + 1);
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(ts, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (ts.empty() || used != ts.size())
            fail(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": bad timestamp '" + ts + "'");
        if (key.empty()) fail(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": empty key");
        s.timestamps.push_back(v);
        s.items.push_back(intern(key));
    }
    return s;
}

inline RequestStream read_trace(const std::string& path, TraceFormat format, KeyMode mode = KeyMode::densify) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io_error, "cannot read trace '" + path + "'");
    return parse_trace(in, format, mode);
}

inline void write_trace(const RequestStream& s, std::ostream& out, TraceFormat format) {
    for (std::size_t t = 0; t < s.items.size(); ++t) {
        const ItemId i = s.items[t];
        if (format == TraceFormat::csv)
            out << (s.timestamps.empty() ? static_cast<long long>(t + 1) : s.timestamps[t]) << ',';
        if (!s.keys.empty() && i <= s.keys.size()) {
            out << s.keys[i - 1];
        } else {
            out << i;
        }
        out << '\n';
    }
}

inline void write_trace(const RequestStream& s, const std::string& path, TraceFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io_error, "cannot write trace '" + path + "'");
    write_trace(s, out, format);
    if (!out) fail(ErrorKind::io_error, "write failed for '" + path + "'");
}

struct ZipfFit {
    double alpha = 0.0;
    bool degenerate = false;
    std::string warning;
    std::vector<std::size_t> rank_counts;  // descending request counts per distinct item
};

// Maximum-likelihood Zipf exponent on the empirical rank-frequency data.
inline ZipfFit fit_zipf(const RequestStream& s) {
    require(!s.empty(), ErrorKind::invalid_parameter, "cannot fit an empty stream");
    std::unordered_map<ItemId, std::size_t> counts;
    for (ItemId i : s.items) ++counts[i];
    ZipfFit fit;
    for (const auto& kv : counts) fit.rank_counts.push_back(kv.second);
    std::sort(fit.rank_counts.begin(), fit.rank_counts.end(), std::greater<>());
    constexpr double lo0 = 0.0, hi0 = 5.0;
    if (fit.rank_counts.size() == 1) {
        fit.alpha = hi0;
        fit.degenerate = true;
        fit.warning = "only one distinct item; the likelihood is flat, returning the search bound";
        return fit;
    }
    const std::size_t n = fit.rank_counts.size();
    double total = 0.0, weighted_log_rank = 0.0;
    std::vector<double> log_rank(n);
    for (std::size_t r = 0; r < n; ++r) {
        log_rank[r] = std::log(static_cast<double>(r + 1));
        total += static_cast<double>(fit.rank_counts[r]);
        weighted_log_rank += static_cast<double>(fit.rank_counts[r]) * log_rank[r];
    }
    auto loglik = [&](double a) {
        double h = 0.0;
        for (std::size_t r = n; r-- > 0;) h += std::exp(-a * log_rank[r]);
        return -a * weighted_log_rank - total * std::log(h);
    };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = lo0, hi = hi0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = loglik(x1), f2 = loglik(x2);
    while (hi - lo > 1e-4) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = loglik(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = loglik(x1);
        }
    }
    fit.alpha = 0.5 * (lo + hi);
    return fit;
}

} // namespace cachemix
