#include <cachemix/cachemix.hpp>
#include <gtest/gtest.h>

#include "oracle.hpp"

#include <sstream>

using namespace cachemix;

namespace {

ExperimentSpec irm_spec(std::vector<PolicyConfig> pols, const PopularityDist& d, std::size_t count) {
    ExperimentSpec s;
    s.policies = std::move(pols);
    s.source = IrmSource{d};
    s.count = count;
    s.window = 1000;
    return s;
}

} // namespace

TEST(Simulation, PointMassOneCompulsoryMiss) {
    auto spec = irm_spec({PolicyConfig::lru(2)}, PopularityDist::from_probs({1.0}), 5000);
    auto r = run_simulation(spec);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_DOUBLE_EQ(r[0].mean, 4999.0 / 5000.0);
    EXPECT_EQ(r[0].counted, 5000u);
    EXPECT_EQ(r[0].window_end.size(), 5u);
    EXPECT_EQ(r[0].window_end.back(), 5000u);
}

TEST(Simulation, DeterministicAcrossRunsAndThreads) {
    auto spec = irm_spec({PolicyConfig::lru(3), PolicyConfig::random(3, 9), PolicyConfig::arc(3)}, make_zipf(30, 0.8),
                         20000);
    spec.reps = 4;
    auto a = run_simulation(spec);
    spec.threads = 3;
    auto b = run_simulation(spec);
    for (std::size_t p = 0; p < a.size(); ++p) {
        EXPECT_EQ(a[p].rep_rate, b[p].rep_rate);
        EXPECT_EQ(a[p].window_rate, b[p].window_rate);
    }
    spec.seed = 2;
    auto c = run_simulation(spec);
    EXPECT_NE(a[0].rep_rate, c[0].rep_rate);
}

TEST(Simulation, BurnInAndStandardErrors) {
    auto d = make_zipf(20, 0.8);
    auto spec = irm_spec({PolicyConfig::lru(4)}, d, 200000);
    spec.burn_in = 10000;
    auto r = run_simulation(spec)[0];
    EXPECT_EQ(r.counted, 190000u);
    EXPECT_FALSE(r.t_based);
    EXPECT_NEAR(r.stderr_, std::sqrt(r.mean * (1 - r.mean) / 190000.0), 1e-15);
    const double exact = hit_probability_closed_form(PolicyKind::lru, d, 4);
    EXPECT_NEAR(r.mean, exact, 4 * r.stderr_);

    spec.reps = 6;
    auto t = run_simulation(spec)[0];
    EXPECT_TRUE(t.t_based);
    EXPECT_EQ(t.rep_rate.size(), 6u);
    EXPECT_NEAR(t.mean, exact, 5 * t.stderr_ + 1e-3);
}

TEST(Simulation, TraceSourceAndErrors) {
    ExperimentSpec s;
    s.policies = {PolicyConfig::fifo(1)};
    RequestStream st;
    st.items = {1, 1, 2, 2, 1};
    s.source = TraceSource{st};
    s.window = 2;
    auto r = run_simulation(s)[0];
    EXPECT_DOUBLE_EQ(r.mean, 2.0 / 5.0);
    EXPECT_EQ(r.window_end, (std::vector<std::size_t>{2, 4, 5}));
    s.burn_in = 5;
    EXPECT_THROW(run_simulation(s), Error);
    s.burn_in = 0;
    s.policies.clear();
    EXPECT_THROW(run_simulation(s), Error);
}

TEST(Simulation, CsvLayout) {
    auto spec = irm_spec({PolicyConfig::lru(2)}, make_zipf(5, 0.8), 2500);
    std::ostringstream os;
    write_results_csv(os, "demo", run_simulation(spec));
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "experiment,policy,m,t,metric,value,stderr");
    std::size_t rows = 0, cumulative = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find(",cumulative_hit,") != std::string::npos) ++cumulative;
        EXPECT_EQ(line.rfind("demo,lru,2,", 0), 0u);
    }
    EXPECT_EQ(rows, 4u);
    EXPECT_EQ(cumulative, 1u);
}

TEST(MonteCarlo, AgreesWithClosedForm) {
    auto d = make_zipf(20, 0.8);
    auto e = monte_carlo_stationary(PolicyConfig::climb(4), d, 200000, 2'000'000, 5);
    const double exact = hit_probability_closed_form(PolicyKind::climb, d, 4);
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.hit, exact, 4 * e.stderr_ + 1e-3);
    EXPECT_GE(e.burn_in_used, 200000u);
}

TEST(TimeGrid, Forms) {
    EXPECT_EQ(parse_t_grid("5,1,3,3"), (std::vector<std::size_t>{1, 3, 5}));
    EXPECT_EQ(parse_t_grid("lin:0..10:5"), (std::vector<std::size_t>{0, 5, 10}));
    auto g = parse_t_grid("log:1..1000");
    EXPECT_EQ(g.front(), 1u);
    EXPECT_EQ(g.back(), 1000u);
    EXPECT_GE(g.size(), 25u);
    EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
    EXPECT_EQ(parse_t_grid("log:0..100:1"), (std::vector<std::size_t>{0, 1, 10, 100}));
    EXPECT_THROW(parse_t_grid("log:10..1"), Error);
    EXPECT_THROW(parse_t_grid("lin:1"), Error);
    EXPECT_THROW(parse_t_grid("a,b"), Error);
}

TEST(LearningCurve, SingleLevelTailsAndDecay) {
    const std::size_t n = 5, m = 2;
    auto d = make_zipf(n, 0.8);
    auto w = RankWeights::standard(n, m);
    auto grid = parse_t_grid("0,1,2,5,10,50,200,2000");
    LearningOptions opt;
    auto c = learning_error_curve(PolicyConfig::lru(m), d, w, grid, opt);
    ASSERT_EQ(c.error.size(), grid.size());
    EXPECT_EQ(c.states, 20u);
    auto sp = std::make_shared<const StateSpace>(enumerate_states(PolicyConfig::lru(m), n));
    const double tau = tau_distance(closed_form_stationary(PolicyKind::lru, d, sp), w, ideal_vector(d, m));
    EXPECT_NEAR(c.tau_stationary, tau, 1e-9);
    EXPECT_NEAR(c.error.back(), tau, 1e-9);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        EXPECT_NEAR(c.error[k], c.tau[k] + c.kappa * c.tv[k], 1e-12);
        if (k) EXPECT_LE(c.tv[k], c.tv[k - 1] + 1e-15);
    }
    EXPECT_GT(c.tv.front(), 0.5);
    EXPECT_NEAR(c.kappa, kappa_arrangements(n, m, w, KappaMode::exact).value, 1e-12);
}

TEST(LearningCurve, AdversarialStartsNeverExceedAllStarts) {
    const std::size_t n = 5, m = 2;
    auto d = make_zipf(n, 0.8);
    auto w = RankWeights::standard(n, m);
    auto grid = parse_t_grid("0,1,3,10,30");
    LearningOptions all, adv;
    adv.start_mode = StartSet::adversarial;
    auto a = learning_error_curve(PolicyConfig::klru(2, m), d, w, grid, all);
    auto b = learning_error_curve(PolicyConfig::klru(2, m), d, w, grid, adv);
    for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_LE(b.tv[k], a.tv[k] + 1e-12);
    EXPECT_NEAR(a.tau_stationary, b.tau_stationary, 1e-9);
}

TEST(LearningCurve, DynamicAlruNeedsStartSubset) {
    auto d = make_zipf(5, 0.8);
    auto w = RankWeights::standard(5, 2);
    auto grid = parse_t_grid("0,10,100,1000");
    LearningOptions all;
    EXPECT_THROW(learning_error_curve(PolicyConfig::alru_dynamic(10, 5, 2), d, w, grid, all), Error);
    LearningOptions adv;
    adv.start_mode = StartSet::adversarial;
    auto c = learning_error_curve(PolicyConfig::alru_dynamic(10, 5, 2), d, w, grid, adv);
    EXPECT_EQ(c.error.size(), grid.size());
    // at t ≤ T the schedule still runs LRU
    auto lru = learning_error_curve(PolicyConfig::lru(2), d, w, parse_t_grid("0,10"), adv);
    EXPECT_NEAR(c.tv[1], lru.tv[1], 1e-12);
}

TEST(TauHit, SmallTableIsExact) {
    auto d = make_zipf(6, 0.8);
    auto tab = tau_vs_hit_table({"lru", "fifo", "climb", "klru:2", "lrum"}, d, {2, 3});
    ASSERT_EQ(tab.rows.size(), 10u);
    for (const auto& r : tab.rows) {
        EXPECT_TRUE(r.exact) << r.policy;
        EXPECT_GT(r.hit, 0.0);
        EXPECT_LT(r.hit, 1.0);
        EXPECT_GE(r.tau, 0.0);
    }
    ASSERT_EQ(tab.spearman_by_m.size(), 2u);
    for (const auto& [m, rho] : tab.spearman_by_m) {
        std::vector<double> tau, hit;
        for (const auto& r : tab.rows)
            if (r.m == m) {
                tau.push_back(r.tau);
                hit.push_back(r.hit);
            }
        EXPECT_NEAR(rho, oracle::spearman(tau, hit), 1e-12);
    }
    for (const auto& r : tab.rows)
        if (r.policy == "lru" && r.m == 3) EXPECT_NEAR(r.hit, hit_probability_closed_form(PolicyKind::lru, d, 3), 1e-12);
}
