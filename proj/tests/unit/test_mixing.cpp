#include <cachemix/cachemix.hpp>
#include <gtest/gtest.h>

#include "oracle.hpp"

using namespace cachemix;

namespace {

struct Chain {
    SpacePtr space;
    TransitionMatrix P;
    std::vector<double> pi;
};

Chain make_chain(const PolicyConfig& c, const PopularityDist& d) {
    Chain ch;
    ch.space = std::make_shared<const StateSpace>(enumerate_states(c, d.n()));
    ch.P = build_transition_matrix(c, d, ch.space);
    ch.pi = stationary_numeric(ch.P, {1e-15, 2'000'000}).pi;
    return ch;
}

TransitionMatrix two_state() { return TransitionMatrix::from_dense({{0.7, 0.3}, {0.7, 0.3}}); }

} // namespace

TEST(Evolve, StartAndOneStep) {
    auto d = PopularityDist::from_probs({0.7, 0.3});
    auto ch = make_chain(PolicyConfig::lru(1), d);
    for (std::size_t s = 0; s < 2; ++s) {
        auto v0 = evolve(ch.P, s, 0);
        EXPECT_DOUBLE_EQ(v0[s], 1.0);
        EXPECT_DOUBLE_EQ(v0[1 - s], 0.0);
        auto v1 = evolve(ch.P, s, 1);
        EXPECT_DOUBLE_EQ(v1[ch.space->at(CacheState::single({1}))], 0.7);
        EXPECT_DOUBLE_EQ(v1[ch.space->at(CacheState::single({2}))], 0.3);
    }
}

TEST(Evolve, StaysNormalised) {
    auto ch = make_chain(PolicyConfig::climb(2), make_zipf(5, 0.8));
    for (std::size_t t : {1u, 5u, 40u}) {
        auto v = evolve(ch.P, 3, t);
        double s = 0.0;
        for (double x : v) s += x;
        EXPECT_NEAR(s, 1.0, 1e-13);
    }
}

TEST(MixingTime, TwoStateExamples) {
    auto d = PopularityDist::from_probs({0.7, 0.3});
    auto ch = make_chain(PolicyConfig::lru(1), d);
    auto r = empirical_mixing_time(ch.P, ch.pi, 0.25);
    EXPECT_EQ(r.t_mix, 1u);
    EXPECT_TRUE(r.exact_sup());
    EXPECT_EQ(empirical_mixing_time(ch.P, ch.pi, 1.0).t_mix, 0u);
}

TEST(MixingTime, MatchesDenseMatrixPowers) {
    auto ch = make_chain(PolicyConfig::fifo(2), make_zipf(5, 0.8));
    auto D = ch.P.to_dense();
    const std::size_t N = D.size();
    Eigen::MatrixXd M(N, N), Pt = Eigen::MatrixXd::Identity(N, N);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) M(r, c) = D[r][c];
    auto pi = oracle::stationary(D);
    std::size_t t = 0;
    for (;; ++t) {
        double sup = 0.0;
        for (std::size_t x = 0; x < N; ++x) {
            double s = 0.0;
            for (std::size_t y = 0; y < N; ++y) s += std::abs(Pt(x, y) - pi[y]);
            sup = std::max(sup, s / 2);
        }
        if (sup <= 0.1) break;
        Pt = Pt * M;
    }
    auto r = empirical_mixing_time(ch.P, ch.pi, 0.1);
    EXPECT_EQ(r.t_mix, t);
    ASSERT_EQ(r.sup_tv.size(), t + 1);
    for (std::size_t k = 1; k < r.sup_tv.size(); ++k) EXPECT_LE(r.sup_tv[k], r.sup_tv[k - 1] + 1e-15);
}

TEST(MixingTime, AdversarialStartsLowerBoundExactSup) {
    auto ch = make_chain(PolicyConfig::lru(2), make_zipf(5, 0.8));
    auto all = empirical_mixing_time(ch.P, ch.pi, 0.05);
    auto some = empirical_mixing_time(ch.P, ch.pi, 0.05, {0, 7}, StartSet::adversarial);
    EXPECT_LE(some.t_mix, all.t_mix);
    EXPECT_FALSE(some.exact_sup());
}

TEST(SpectralGap, TwoStateAndLazy) {
    auto P = two_state();
    std::vector<double> pi{0.7, 0.3};
    EXPECT_NEAR(spectral_gap(P, pi).gap, 1.0, 1e-9);
    auto lazy = TransitionMatrix::from_dense({{0.85, 0.15}, {0.35, 0.65}});
    EXPECT_NEAR(spectral_gap(lazy, pi).gap, 0.5, 1e-9);
}

TEST(SpectralGap, AgainstEigenOracle) {
    auto d = make_zipf(5, 0.8);
    for (auto c : {PolicyConfig::lru(2), PolicyConfig::climb(2), PolicyConfig::random(2), PolicyConfig::lrum({1, 1})}) {
        auto ch = make_chain(c, d);
        auto D = ch.P.to_dense();
        const double want = 1.0 - oracle::lambda2_reversibilized(D, oracle::stationary(D));
        auto g = spectral_gap(ch.P, ch.pi);
        EXPECT_NEAR(g.gap, want, 1e-6) << c.name();
        EXPECT_GT(g.gap, 0.0);
        EXPECT_LE(g.gap, 1.0 + 1e-12);
    }
}

TEST(Conductance, Examples) {
    EXPECT_NEAR(conductance_exact(two_state(), {0.7, 0.3}).phi, 0.7, 1e-12);
    auto disc = TransitionMatrix::from_dense({{1.0, 0.0}, {0.0, 1.0}});
    EXPECT_DOUBLE_EQ(conductance_exact(disc, {0.5, 0.5}).phi, 0.0);
    auto half = TransitionMatrix::from_dense({{0.5, 0.5}, {0.5, 0.5}});
    EXPECT_NEAR(conductance_exact(half, {0.5, 0.5}).phi, 0.5, 1e-12);
}

TEST(Conductance, AgainstBruteForce) {
    auto d = make_zipf(4, 0.8);
    for (auto c : {PolicyConfig::lru(2), PolicyConfig::fifo(2), PolicyConfig::climb(2)}) {
        auto ch = make_chain(c, d);
        auto D = ch.P.to_dense();
        EXPECT_NEAR(conductance_exact(ch.P, ch.pi).phi, oracle::conductance(D, ch.pi), 1e-12) << c.name();
    }
}

TEST(Conductance, Cap) {
    auto ch = make_chain(PolicyConfig::lru(2), make_zipf(6, 0.8));
    EXPECT_THROW(conductance_exact(ch.P, ch.pi), Error);
}

TEST(Congestion, TwoStateIsOne) {
    auto r = congestion(two_state(), {0.7, 0.3});
    EXPECT_NEAR(r.rho, 1.0, 1e-12);
}

TEST(Congestion, CustomPathsAndMissingEdge) {
    auto P = two_state();
    auto r = congestion(P, {0.7, 0.3}, [](std::size_t x, std::size_t y) { return std::vector<std::size_t>{x, y}; });
    EXPECT_NEAR(r.rho, 1.0, 1e-12);
    auto cut = TransitionMatrix::from_dense({{1.0, 0.0}, {0.5, 0.5}});
    try {
        congestion(cut, {0.5, 0.5});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_paths);
    }
}

TEST(Congestion, BoundsConductance) {
    auto d = make_zipf(4, 0.8);
    for (auto c : {PolicyConfig::lru(2), PolicyConfig::fifo(2), PolicyConfig::random(2), PolicyConfig::climb(2)}) {
        auto ch = make_chain(c, d);
        const double phi = conductance_exact(ch.P, ch.pi).phi;
        EXPECT_GE(phi, 1.0 / (2.0 * congestion(ch.P, ch.pi).rho) - 1e-12) << c.name();
    }
}

TEST(Cheeger, Examples) {
    auto r = cheeger_check(two_state(), {0.7, 0.3});
    EXPECT_NEAR(r.phi, 0.7, 1e-12);
    EXPECT_NEAR(r.gamma, 1.0, 1e-9);
    EXPECT_TRUE(r.ok);
    auto ch = make_chain(PolicyConfig::fifo(2), make_zipf(4, 0.8));
    EXPECT_TRUE(cheeger_check(ch.P, ch.pi).ok);
}

TEST(MixingBound, WorkedExample) {
    BoundInputs b{0.7, 0.3, 0.3, 2.0, 0.5, true};
    const double want = 8.0 * 0.2401 * 16.0 / 0.0081 * std::log(1.0 / 0.15);
    EXPECT_NEAR(mixing_bound(b), want, 1e-9 * want);
    EXPECT_NEAR(mixing_bound(b), 7198.0, 72.0);
    EXPECT_NEAR(std::exp(mixing_bound_log(b)), want, 1e-9 * want);
    auto nr = b;
    nr.reversible = false;
    EXPECT_NEAR(mixing_bound(nr), 4.0 * want, 1e-9 * want);
    auto loose = b;
    loose.epsilon = 0.1;
    EXPECT_GT(mixing_bound(loose), mixing_bound(b));
    auto bad = b;
    bad.Gamma = 1.0;
    EXPECT_THROW(mixing_bound(bad), Error);
}

TEST(MixingBound, DominatesEmpiricalMixing) {
    auto d = make_zipf(4, 0.8);
    for (auto c : {PolicyConfig::lru(2), PolicyConfig::fifo(2), PolicyConfig::climb(2), PolicyConfig::klru(2, 2)}) {
        auto ch = make_chain(c, d);
        auto b = bound_inputs_from_chain(ch.P, ch.pi, 0.5);
        EXPECT_GE(mixing_bound(b), static_cast<double>(empirical_mixing_time(ch.P, ch.pi, 0.5).t_mix)) << c.name();
    }
}

TEST(MixingBound, SingleLevelCharacterisationsBracketTheChain) {
    const std::size_t n = 5, m = 2;
    auto d = make_zipf(n, 0.8);
    auto check = [&](const PolicyConfig& c, const BoundInputs& b) {
        auto ch = make_chain(c, d);
        const auto [lo, hi] = std::minmax_element(ch.pi.begin(), ch.pi.end());
        EXPECT_LE(b.pi_min, *lo * (1 + 1e-9)) << c.name();
        EXPECT_GE(b.pi_max, *hi * (1 - 1e-9)) << c.name();
    };
    check(PolicyConfig::lru(m), bound_inputs_lru(d, m, 0.25));
    check(PolicyConfig::random(m), bound_inputs_random(d, m, 0.25));
    check(PolicyConfig::climb(m), bound_inputs_climb(d, m, 0.25));
}

TEST(ZipfExponent, HandComputed) {
    const double a = 0.8;
    EXPECT_NEAR(zipf_bound_exponent(PolicyKind::lru, a, 4), (4 * a + 2) * 4 + 2, 1e-12);
    EXPECT_NEAR(zipf_bound_exponent(PolicyKind::lru, a, 4), 22.8, 1e-12);
    EXPECT_NEAR(zipf_bound_exponent(PolicyKind::fifo, a, 4), 29.2, 1e-12);
    EXPECT_NEAR(zipf_bound_exponent(PolicyKind::random, a, 4), 29.2, 1e-12);
    EXPECT_NEAR(zipf_bound_exponent(PolicyKind::climb, a, 4), 58.0, 1e-12);
    EXPECT_NEAR(zipf_bound_exponent(PolicyConfig::klru(2, 4), a), 183.6, 1e-12);
    EXPECT_NEAR(zipf_bound_exponent(PolicyConfig::lrum({1, 3}), a), 98.4, 1e-12);
    EXPECT_THROW(zipf_bound_exponent(PolicyKind::arc, a, 4), Error);
}

TEST(PolicyBounds, LogFormsAreFinite) {
    auto d = make_zipf(20, 0.8);
    for (double v : {policy_bound_lru_log(d, 4), policy_bound_random_log(d, 4), policy_bound_climb_log(d, 4),
                     policy_bound_klru_log(d, 4, 2), policy_bound_lrum_log(d, {1, 3})})
        EXPECT_TRUE(std::isfinite(v));
    EXPECT_THROW(policy_bound_klru_log(make_zipf(6, 0.8), 4, 2), Error);
}

TEST(LearningError, Examples) {
    EXPECT_DOUBLE_EQ(learning_error(3.5, 10.0, 0.0), 3.5);
    EXPECT_DOUBLE_EQ(learning_error(0.0, 10.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(learning_error(1.0, 10.0, 0.25), 3.5);
    EXPECT_THROW(learning_error(-1.0, 1.0, 0.0), Error);
}

TEST(MixingTime, WorkingSetCap) {
    auto P = TransitionMatrix::from_dense({{0.5, 0.5}, {0.5, 0.5}});
    MixingOptions opt;
    opt.cell_cap = 3;
    try {
        empirical_mixing_time(P, {0.5, 0.5}, 0.1, all_starts(P), StartSet::all, opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::too_large);
    }
    opt.cell_cap = 4;
    EXPECT_EQ(empirical_mixing_time(P, {0.5, 0.5}, 0.1, all_starts(P), StartSet::all, opt).t_mix, 1u);
}
