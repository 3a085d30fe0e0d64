#include <cachemix/cachemix.hpp>
#include <gtest/gtest.h>

#include "oracle.hpp"

#include <algorithm>

using namespace cachemix;

namespace {

using V = std::vector<ItemId>;

PositionMap pm(const V& v, std::size_t n) { return position_map(v, n); }

} // namespace

TEST(KendallClassic, Examples) {
    EXPECT_EQ(kendall_classic(pm({1, 2, 3}, 3), pm({1, 2, 3}, 3)), 0);
    EXPECT_EQ(kendall_classic(pm({1, 2, 3}, 3), pm({3, 2, 1}, 3)), 3);
    EXPECT_EQ(kendall_classic(pm({1, 2, 3, 4}, 4), pm({1, 3, 2, 4}, 4)), 1);
}

TEST(KendallClassic, MissingOrderCostsNothing) {
    // 4 and 5 are both absent from the first map, so their mutual order is unknown
    EXPECT_EQ(kendall_classic(pm({1, 2}, 5), pm({5, 4}, 5)), 4);
}

TEST(KendallGeneralized, UnitWeightsReduceToClassic) {
    const auto w = RankWeights::unit(4, 4);
    V a{1, 2, 3, 4};
    std::vector<V> perms;
    do perms.push_back(a);
    while (std::next_permutation(a.begin(), a.end()));
    for (const auto& x : perms)
        for (const auto& y : perms)
            ASSERT_DOUBLE_EQ(kendall_generalized(pm(x, 4), pm(y, 4), w),
                             static_cast<double>(kendall_classic(pm(x, 4), pm(y, 4))));
}

TEST(KendallGeneralized, MatchesDefinitionOnPartialRankings) {
    const std::size_t n = 6, m = 3;
    const auto w = RankWeights::standard(n, m);
    auto arr = oracle::arrangements(n, m);
    for (std::size_t a = 0; a < arr.size(); a += 7)
        for (std::size_t b = 0; b < arr.size(); b += 5)
            ASSERT_NEAR(kendall_generalized(pm(arr[a], n), pm(arr[b], n), w),
                        oracle::kendall(arr[a], arr[b], n, oracle::standard_w(n), oracle::standard_zeta(m)), 1e-12);
}

TEST(KendallGeneralized, AdjacentSwapCostFollowsPositionWeights) {
    const std::size_t n = 6, m = 4;
    const auto w = RankWeights::standard(n, m);
    // items 1 and 2 swapped at slots (1,2) and at slots (3,4); only q differs
    const double top = kendall_generalized(pm({2, 1, 3, 4}, n), pm({1, 2, 3, 4}, n), w);
    const double bottom = kendall_generalized(pm({3, 4, 2, 1}, n), pm({3, 4, 1, 2}, n), w);
    EXPECT_NEAR(top, 6.0 * 5.0 * std::log(2.0) * std::log(2.0), 1e-12);
    EXPECT_NEAR(bottom, 6.0 * 5.0 * std::log(4.0) * std::log(4.0), 1e-12);
    // with zeta_j = ln j the deeper swap is the dearer one
    EXPECT_GT(bottom, top);
    EXPECT_DOUBLE_EQ(kendall_generalized(pm({1, 2, 3, 4}, n), pm({1, 2, 3, 4}, n), w), 0.0);
}

TEST(KendallGeneralized, DecreasingSwapCostsFavourTheTop) {
    const std::size_t n = 6;
    const auto w = RankWeights::make(std::vector<double>(n, 1.0), {1.0, 3.0, 2.0, 1.0});
    const double top = kendall_generalized(pm({2, 1, 3, 4}, n), pm({1, 2, 3, 4}, n), w);
    const double bottom = kendall_generalized(pm({3, 4, 2, 1}, n), pm({3, 4, 1, 2}, n), w);
    EXPECT_NEAR(top, 9.0, 1e-12);
    EXPECT_NEAR(bottom, 1.0, 1e-12);
}

TEST(PositionMap, RejectsDuplicates) {
    EXPECT_THROW(pm({1, 1}, 3), Error);
    EXPECT_THROW(pm({4}, 3), Error);
    EXPECT_EQ(pm({3, 1}, 4)[3], 1u);
    EXPECT_EQ(pm({3, 1}, 4)[2], 0u);
}

TEST(TauDistance, PointMasses) {
    const std::size_t n = 5, m = 2;
    auto d = make_zipf(n, 0.8);
    auto sp = std::make_shared<const StateSpace>(enumerate_states(PolicyConfig::lru(m), n));
    const auto w = RankWeights::standard(n, m);
    const auto cstar = ideal_vector(d, m);
    StationaryDist st{sp, std::vector<double>(sp->size(), 0.0), 0.0, 0};
    st.pi[sp->at(cstar)] = 1.0;
    EXPECT_DOUBLE_EQ(tau_distance(st, w, cstar), 0.0);
    std::fill(st.pi.begin(), st.pi.end(), 0.0);
    const auto x = CacheState::single({4, 1});
    st.pi[sp->at(x)] = 1.0;
    EXPECT_DOUBLE_EQ(tau_distance(st, w, cstar), kendall_generalized(V{4, 1}, V{1, 2}, w, n));
}

TEST(TauDistance, LruSevenThreeBruteForce) {
    const std::size_t n = 7, m = 3;
    auto d = make_zipf(n, 0.8);
    auto p = oracle::zipf(n, 0.8);
    auto sp = std::make_shared<const StateSpace>(enumerate_states(PolicyConfig::lru(m), n));
    auto st = closed_form_stationary(PolicyKind::lru, d, sp);
    const double got = tau_distance(st, RankWeights::standard(n, m), ideal_vector(d, m));

    auto arr = oracle::arrangements(n, m);
    double z = 0.0, acc = 0.0;
    for (const auto& x : arr) z += oracle::lru_weight(p, x);
    for (const auto& x : arr)
        acc += oracle::lru_weight(p, x) / z * oracle::kendall(x, {1, 2, 3}, n, oracle::standard_w(n), oracle::standard_zeta(m));
    EXPECT_EQ(arr.size(), 210u);
    EXPECT_NEAR(got, acc, 1e-12);
}

TEST(TvDistance, Examples) {
    std::vector<double> a{0.7, 0.3}, b{0.5, 0.5};
    EXPECT_DOUBLE_EQ(tv_distance(a, a), 0.0);
    EXPECT_DOUBLE_EQ(tv_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
    EXPECT_NEAR(tv_distance(a, b), 0.2, 1e-15);
    EXPECT_THROW(tv_distance(a, std::vector<double>{1.0}), Error);
}

TEST(Kappa, ClassicDiameterOfS3) {
    auto sp = enumerate_states(PolicyConfig::lru(3), 3);
    auto r = kappa_diameter(sp, RankWeights::unit(3, 3), KappaMode::exact);
    EXPECT_DOUBLE_EQ(r.value, 3.0);
    EXPECT_FALSE(r.lower_bound);
}

TEST(Kappa, SingleStateSpace) {
    auto sp = enumerate_states(PolicyConfig::lru(1), 1);
    EXPECT_DOUBLE_EQ(kappa_diameter(sp, RankWeights::unit(1, 1), KappaMode::exact).value, 0.0);
}

TEST(Kappa, HeuristicNeverExceedsExact) {
    for (auto [n, m] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 2}, {5, 3}, {6, 2}, {7, 3}}) {
        auto sp = enumerate_states(PolicyConfig::lru(m), n);
        const auto w = RankWeights::standard(n, m);
        auto ex = kappa_diameter(sp, w, KappaMode::exact);
        auto he = kappa_diameter(sp, w, KappaMode::heuristic, {100'000'000, 500, 1});
        EXPECT_LE(he.value, ex.value + 1e-12);
        EXPECT_TRUE(he.lower_bound);
    }
}

TEST(Kappa, ExactMatchesBruteForce) {
    const std::size_t n = 5, m = 2;
    auto arr = oracle::arrangements(n, m);
    double best = 0.0;
    for (const auto& a : arr)
        for (const auto& b : arr)
            best = std::max(best, oracle::kendall(a, b, n, oracle::standard_w(n), oracle::standard_zeta(m)));
    EXPECT_NEAR(kappa_arrangements(n, m, RankWeights::standard(n, m), KappaMode::exact).value, best, 1e-12);
}

TEST(Kappa, PairCap) {
    auto sp = enumerate_states(PolicyConfig::lru(3), 7);
    EXPECT_THROW(kappa_diameter(sp, RankWeights::unit(7, 3), KappaMode::exact, {100, 10, 0}), Error);
}

TEST(Spearman, AgainstOracleWithTies) {
    std::vector<double> a{1, 2, 2, 5, 3, 9}, b{6, 5, 4, 4, 2, 1};
    EXPECT_NEAR(spearman(a, b), oracle::spearman(a, b), 1e-14);
    EXPECT_NEAR(spearman(a, a), 1.0, 1e-14);
}
