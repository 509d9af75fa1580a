#include <gtest/gtest.h>

#include <sstream>

#include "tamelab/tamelab.hpp"

using namespace tamelab;

namespace {

ScaleParams small_scale(std::int64_t begin, std::int64_t extent) {
    ScaleParams s;
    s.window = Box::interval(begin, begin + extent);
    s.entropy_n_max = 12;
    s.brackets = {4, 8, 12};
    s.max_size = 12;
    s.beam = 1024;
    return s;
}

}  // namespace

TEST(Probe, GrowthClasses) {
    const ProbeSpec run{"arith1", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}};
    const std::vector<std::size_t> sizes{1, 2, 4, 8, 16};
    const SeqWindow ones(Box::interval(0, 200), 2, std::vector<std::uint8_t>(200, 1), "ones");
    const auto flat = probe_projection_growth(ones, run, sizes);
    EXPECT_EQ(flat.growth, Growth::bounded);
    EXPECT_EQ(flat.counts, (std::vector<std::uint64_t>{1, 1, 1, 1, 1}));

    const auto line = probe_projection_growth(char_halfline(Box::interval(-500, 500)), run, sizes);
    EXPECT_EQ(line.growth, Growth::polynomial);
    EXPECT_EQ(line.counts, (std::vector<std::uint64_t>{2, 3, 5, 9, 17}));

    const auto full = probe_projection_growth(de_bruijn(16, Box::interval(0, 1 << 17)), run, sizes);
    EXPECT_EQ(full.growth, Growth::exponential);
    EXPECT_EQ(full.kept.size(), 16u);
    EXPECT_EQ(full.counts.back(), 65536u);
    EXPECT_STREQ(growth_name(Growth::exponential), "exponential");
}

TEST(Probe, RejectsUnsortedSequence) {
    const ProbeSpec bad{"bad", {3, 1}};
    const std::vector<std::size_t> sizes{1, 2};
    EXPECT_THROW(probe_projection_growth(morse(Box::interval(0, 100)), bad, sizes), ArgumentError);
}

TEST(DefaultProbes, FitInsideAQuarterWindow) {
    const auto probes = default_probes(Box::interval(0, 4000));
    ASSERT_EQ(probes.size(), 4u);
    for (const auto& p : probes) {
        EXPECT_FALSE(p.along.empty());
        EXPECT_LT(p.along.back(), 1000);
        EXPECT_TRUE(std::is_sorted(p.along.begin(), p.along.end()));
    }
    EXPECT_EQ(probes[3].along, (std::vector<std::int64_t>{10, 100, 110}));
}

TEST(Classify, FullShiftStandInHasPositiveEvidence) {
    const auto rep = classify(SeqSource::de_bruijn(12), small_scale(0, 1 << 13));
    EXPECT_TRUE(rep.nonnull_evidence);
    EXPECT_TRUE(rep.positive_entropy_evidence);
    EXPECT_FALSE(rep.tame_consistent);
    EXPECT_EQ(rep.brackets.back().max_size, 12u);
    EXPECT_NEAR(rep.entropy.headline, 1.0, 1e-9);
}

TEST(Classify, HalflineIsTameConsistent) {
    auto scale = small_scale(-1000, 2000);
    scale.entropy_n_max = 256;
    const auto rep = classify(SeqSource::char_halfline(), scale);
    EXPECT_TRUE(rep.tame_consistent);
    EXPECT_FALSE(rep.positive_entropy_evidence);
    EXPECT_LT(rep.entropy.headline, 0.01);
    for (const auto& b : rep.brackets) EXPECT_EQ(b.max_size, 1u);
}

TEST(Classify, FibonacciIsTameConsistent) {
    const auto src = SeqSource::sturmian(RotationSpec::circle({constants::golden}), CutPartition({Frac(), constants::golden.complement()}),
                                         TorusPoint{Frac()});
    auto scale = small_scale(0, 20000);
    scale.entropy_n_max = 30;
    const auto rep = classify(src, scale);
    EXPECT_TRUE(rep.tame_consistent);
    EXPECT_FALSE(rep.positive_entropy_evidence);
    for (const auto& b : rep.brackets) EXPECT_LE(b.max_size, 2u);
}

TEST(Classify, FlagsAreConsistent) {
    for (const auto& src : {SeqSource::morse(), SeqSource::random(4), SeqSource::de_bruijn(9)}) {
        const auto rep = classify(src, small_scale(0, 4096));
        if (rep.positive_entropy_evidence) {
            EXPECT_TRUE(rep.nonnull_evidence);
            EXPECT_GE(rep.entropy.headline, 0.05);
            EXPECT_GE(rep.best_density, 0.05);
        }
        for (std::size_t i = 1; i < rep.brackets.size(); ++i) EXPECT_GE(rep.brackets[i].max_size, rep.brackets[i - 1].max_size);
    }
}

TEST(Classify, ReportIsThreadIndependent) {
    auto scale = small_scale(0, 8192);
    std::ostringstream a, b;
    scale.threads = 1;
    write_report(a, classify(SeqSource::morse(), scale));
    scale.threads = 8;
    write_report(b, classify(SeqSource::morse(), scale));
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(a.str().rfind("TAMELAB-EVIDENCE v1\n", 0), 0u);
}

TEST(Classify, RequiresBrackets) {
    auto scale = small_scale(0, 100);
    scale.brackets.clear();
    EXPECT_THROW(classify(SeqSource::morse(), scale), ArgumentError);
}
