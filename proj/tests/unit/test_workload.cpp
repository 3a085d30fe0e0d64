#include <cachemix/cachemix.hpp>
#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace cachemix;

TEST(SampleIrm, PointMass) {
    auto d = PopularityDist::from_probs({1.0});
    auto s = sample_irm(d, 5, 3);
    EXPECT_EQ(s.items, (std::vector<ItemId>{1, 1, 1, 1, 1}));
}

TEST(SampleIrm, Deterministic) {
    auto d = make_zipf(50, 0.8);
    EXPECT_EQ(sample_irm(d, 1000, 7).items, sample_irm(d, 1000, 7).items);
    EXPECT_NE(sample_irm(d, 1000, 7).items, sample_irm(d, 1000, 8).items);
}

TEST(SampleIrm, FrequenciesMatchProbabilities) {
    auto d = make_zipf(10, 0.8);
    const std::size_t N = 1'000'000;
    auto s = sample_irm(d, N, 1);
    std::vector<double> f(11, 0.0);
    for (ItemId i : s.items) f[i] += 1.0;
    for (ItemId i = 1; i <= 10; ++i) {
        const double p = d.p(i);
        EXPECT_NEAR(f[i] / N, p, 4.0 * std::sqrt(p * (1 - p) / N)) << i;
    }
}

TEST(SampleIrm, RejectsZeroCount) { EXPECT_THROW(sample_irm(make_zipf(3, 1.0), 0, 1), Error); }

TEST(SampleModulated, FullShuffleEveryStepIsUniform) {
    auto d = make_zipf(4, 1.0);
    auto s = sample_modulated(d, {1.0, ModulationMode::full_shuffle}, 1'000'000, 5);
    std::vector<double> f(5, 0.0);
    for (ItemId i : s.stream.items) f[i] += 1.0;
    for (ItemId i = 1; i <= 4; ++i) EXPECT_NEAR(f[i] / 1e6, 0.25, 0.005);
}

TEST(SampleModulated, RareShufflesKeepIrmFrequencies) {
    auto d = make_zipf(6, 1.0);
    auto s = sample_modulated(d, {1e-9, ModulationMode::full_shuffle}, 200000, 3);
    EXPECT_EQ(s.epochs, 0u);
    std::vector<double> f(7, 0.0);
    for (ItemId i : s.stream.items) f[i] += 1.0;
    for (ItemId i = 1; i <= 6; ++i) EXPECT_NEAR(f[i] / 200000.0, d.p(i), 0.005);
}

TEST(SampleModulated, EpochCountTracksRate) {
    auto d = make_zipf(20, 0.8);
    auto s = sample_modulated(d, {1e-2, ModulationMode::top_swap}, 100000, 4);
    EXPECT_NEAR(static_cast<double>(s.epochs), 1000.0, 4.0 * std::sqrt(1000.0));
    EXPECT_THROW(sample_modulated(d, {0.0, ModulationMode::top_swap}, 10, 1), Error);
}

TEST(ParseTrace, DensifiesFirstSeen) {
    std::istringstream in("a\nb\na\n");
    auto s = parse_trace(in, TraceFormat::lines);
    EXPECT_EQ(s.items, (std::vector<ItemId>{1, 2, 1}));
    EXPECT_EQ(s.keys, (std::vector<std::string>{"a", "b"}));
}

TEST(ParseTrace, EmptyInput) {
    std::istringstream in("");
    EXPECT_TRUE(parse_trace(in, TraceFormat::lines).empty());
}

TEST(ParseTrace, CsvTimestamps) {
    std::istringstream in("5,x\n6,y\n");
    auto s = parse_trace(in, TraceFormat::csv);
    EXPECT_EQ(s.items, (std::vector<ItemId>{1, 2}));
    EXPECT_EQ(s.timestamps, (std::vector<long long>{5, 6}));
}

TEST(ParseTrace, MalformedCsvNamesLine) {
    std::istringstream in("5,x\nbad\n");
    try {
        parse_trace(in, TraceFormat::csv);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parse_error);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(ParseTrace, NumericKeys) {
    std::istringstream in("7\n3\n7\n");
    auto s = parse_trace(in, TraceFormat::lines, KeyMode::numeric);
    EXPECT_EQ(s.items, (std::vector<ItemId>{7, 3, 7}));
    std::istringstream bad("7\nx\n");
    EXPECT_THROW(parse_trace(bad, TraceFormat::lines, KeyMode::numeric), Error);
}

TEST(ReadTrace, MissingFileIsIoError) {
    try {
        read_trace("/nonexistent/trace.txt", TraceFormat::lines);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::io_error);
    }
}

TEST(WriteTrace, RoundTrip) {
    auto s = sample_irm(make_zipf(30, 0.8), 500, 2);
    auto path = std::filesystem::temp_directory_path() / "cachemix_roundtrip.csv";
    write_trace(s, path.string(), TraceFormat::csv);
    auto back = read_trace(path.string(), TraceFormat::csv, KeyMode::numeric);
    EXPECT_EQ(back.items, s.items);
    ASSERT_EQ(back.timestamps.size(), 500u);
    EXPECT_EQ(back.timestamps.back(), 500);
    std::filesystem::remove(path);
}

TEST(FitZipf, RecoversExponent) {
    auto s = sample_irm(make_zipf(100, 0.8), 1'000'000, 13);
    auto f = fit_zipf(s);
    EXPECT_GE(f.alpha, 0.75);
    EXPECT_LE(f.alpha, 0.85);
    EXPECT_FALSE(f.degenerate);
}

TEST(FitZipf, UniformStream) {
    auto s = sample_irm(make_zipf(100, 0.0), 1'000'000, 14);
    auto f = fit_zipf(s);
    EXPECT_GE(f.alpha, 0.0);
    EXPECT_LE(f.alpha, 0.05);
}

TEST(FitZipf, SingleItemIsDegenerate) {
    RequestStream s;
    s.items.assign(10, 1);
    auto f = fit_zipf(s);
    EXPECT_TRUE(f.degenerate);
    EXPECT_DOUBLE_EQ(f.alpha, 5.0);
    EXPECT_FALSE(f.warning.empty());
    EXPECT_THROW(fit_zipf(RequestStream{}), Error);
}
