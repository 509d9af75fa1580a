#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "properties.hpp"

using namespace tamelab;

namespace {

// Coordinate projections of {0,1}^dim, one column per vertex.
FunctionSample cube_projections(std::size_t dim) {
    const std::size_t cols = std::size_t{1} << dim;
    std::vector<double> values;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < cols; ++j) values.push_back(static_cast<double>((j >> i) & 1));
    return FunctionSample(dim, cols, std::move(values));
}

}  // namespace

TEST(FunctionSample, Validation) {
    EXPECT_THROW(FunctionSample(0, 1, {}), ArgumentError);
    EXPECT_THROW(FunctionSample(1, 2, {1.0}), ArgumentError);
    EXPECT_THROW(FunctionSample(1, 1, {INFINITY}), ArgumentError);
    EXPECT_THROW(FunctionSample(1, 2, {1.0, 2.0}, {{0.0}}), ArgumentError);
    const FunctionSample fs(2, 2, {1.0, -3.0, 0.5, 2.0});
    EXPECT_EQ(fs.bound(), 3.0);
    EXPECT_EQ(fs.at(1, 0), 0.5);
    EXPECT_EQ(fs.labels()[1], std::vector<double>{1.0});
}

TEST(Independence, CubeProjectionsAreIndependent) {
    const FunctionSample fs = cube_projections(3);
    const auto w = find_independent_subfamily(fs, 0.25, 0.75, 3);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->length(), 3u);
    EXPECT_EQ(w->members, (std::vector<std::size_t>{0, 1, 2}));
    // column j has bit i equal to member i's value, so split h uses column h
    for (std::size_t h = 0; h < 8; ++h) EXPECT_EQ(w->columns[h], h);
    EXPECT_TRUE(verify_witness(fs, *w));
    const L1Bound l1 = l1_lower_bound(fs, *w);
    EXPECT_DOUBLE_EQ(l1.certified, 0.25);
    EXPECT_GE(l1.empirical, 0.25);
    EXPECT_NEAR(l1.empirical, 2.0 / 3.0, 1e-12);
}

TEST(Independence, LongestThenLexicographic) {
    // rows 0 and 2 are the only independent pair
    const FunctionSample fs(3, 4, {0, 1, 0, 1,  //
                                   0, 0, 0, 0,  //
                                   0, 0, 1, 1});
    const auto w = find_independent_subfamily(fs, 0.25, 0.75, 3);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->members, (std::vector<std::size_t>{0, 2}));
    const FunctionSample flat(2, 3, {0, 0, 0, 1, 1, 1});
    EXPECT_FALSE(find_independent_subfamily(flat, 0.25, 0.75, 2));
}

TEST(Independence, ValidatesArguments) {
    const FunctionSample fs = cube_projections(2);
    EXPECT_THROW(find_independent_subfamily(fs, 0.5, 0.5, 2), ArgumentError);
    EXPECT_THROW(find_independent_subfamily(fs, 0.2, 0.8, 1), ArgumentError);
    EXPECT_THROW(find_independent_subfamily(fs, 0.2, 0.8, 13), ArgumentError);
    const FunctionSample tall(65, 1, std::vector<double>(65, 0.0));
    EXPECT_THROW(find_independent_subfamily(tall, 0.2, 0.8, 2), CapacityError);
    IndependenceWitness bogus{0.25, 0.75, {0, 1}, {0, 0, 0, 0}};
    EXPECT_FALSE(verify_witness(fs, bogus));
    EXPECT_THROW(l1_lower_bound(fs, bogus), IntegrityError);
}

TEST(Independence, SameResultAcrossThreadCounts) {
    props::Rng rng(0x5eed0006);
    std::vector<double> values(20 * 200);
    for (auto& v : values) v = static_cast<double>(props::uniform(rng, 0, 1));
    const FunctionSample fs(20, 200, values);
    const auto a = find_independent_subfamily(fs, 0.25, 0.75, 6, 1);
    const auto b = find_independent_subfamily(fs, 0.25, 0.75, 6, 8);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(a->members, b->members);
    EXPECT_EQ(a->columns, b->columns);
}

TEST(Independence, WitnessSoundnessProperty) {
    const auto o = props::witness_soundness(0x5eed0007, 150);
    EXPECT_TRUE(o.ok()) << o.first_failure;
}

TEST(Independence, SturmianOrbitFamilyHasShortWitnessesOnly) {
    const auto src = SeqSource::sturmian(RotationSpec::circle({constants::golden}), CutPartition({Frac(), constants::golden.complement()}),
                                         TorusPoint{Frac()});
    std::vector<std::int64_t> shifts(16), points(2000);
    std::iota(shifts.begin(), shifts.end(), 0);
    std::iota(points.begin(), points.end(), 0);
    const FunctionSample fs = orbit_family_sample(src, shifts, points);
    const auto w = find_independent_subfamily(fs, 0.25, 0.75, 6);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->length(), 2u);
    EXPECT_TRUE(verify_witness(fs, *w));
}

TEST(ThresholdLadder, WidestGapFirst) {
    std::vector<double> values(101);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i) / 100.0;
    const auto ladder = threshold_ladder(FunctionSample(1, 101, values));
    ASSERT_EQ(ladder.size(), 3u);
    EXPECT_DOUBLE_EQ(ladder[0].first, 0.1);
    EXPECT_DOUBLE_EQ(ladder[0].second, 0.9);
    EXPECT_DOUBLE_EQ(ladder[2].first, 0.4);
    EXPECT_DOUBLE_EQ(ladder[2].second, 0.6);
}

TEST(EpsilonNs, IdentityOnUnitInterval) {
    std::vector<double> values;
    std::vector<std::vector<double>> labels;
    for (int j = 0; j < 100; ++j) {
        values.push_back(j / 100.0);
        labels.push_back({j / 100.0});
    }
    const FunctionSample fs(1, 100, values, labels);
    const GridCover cover = GridCover::from_labels(labels, {0.1});
    EXPECT_EQ(cover.cells().size(), 10u);
    const auto at_tenth = epsilon_ns(fs, cover, 0.1);
    EXPECT_TRUE(at_tenth.holds);
    EXPECT_EQ(at_tenth.cell, 0u);
    EXPECT_FALSE(epsilon_ns(fs, cover, 0.05).holds);
    EXPECT_NEAR(epsilon_ns(fs, cover, 0.05).oscillation, 0.09, 1e-12);
    EXPECT_THROW(epsilon_ns(fs, cover, 0.0), ArgumentError);
}

TEST(EpsilonNs, MonotoneProperty) {
    const auto o = props::eps_ns_monotone(0x5eed0008, 150);
    EXPECT_TRUE(o.ok()) << o.first_failure;
}

TEST(Variation, StepFunctionsAndValidation) {
    const std::vector<double> pos{0, 1, 2, 3}, val{0, 1, 1, 0};
    EXPECT_DOUBLE_EQ(total_variation(pos, val), 2.0);
    const std::vector<double> bad{0, 0, 1, 2};
    EXPECT_THROW(total_variation(bad, val), ArgumentError);
    EXPECT_THROW(total_variation(pos, std::vector<double>{1.0}), ArgumentError);
}

TEST(Variation, CircleCodingIndicatorJumpsTwicePerInterval) {
    // an interval indicator read along an increasing chain jumps at most twice
    const CutPartition part({Frac(), constants::golden.complement()});
    std::vector<Frac> points;
    for (int j = 0; j < 500; ++j) points.push_back(Frac::ratio(static_cast<std::uint64_t>(j), 500));
    const std::vector<std::int64_t> shifts{0, 1, 7, 100};
    const FunctionSample fs = circle_family_sample(part, 1, constants::golden, shifts, points);
    for (std::size_t i = 0; i < fs.rows(); ++i) {
        std::vector<double> pos;
        for (const auto& p : points) pos.push_back(p.to_double());
        const auto row = fs.row(i);
        EXPECT_LE(total_variation(pos, std::vector<double>(row.begin(), row.end())), 2.0);
    }
}

TEST(Variation, AdditivityProperty) {
    const auto o = props::variation_additivity(0x5eed0009, 150);
    EXPECT_TRUE(o.ok()) << o.first_failure;
}

TEST(OrbitFamily, MatchesMaterializedWindow) {
    const auto src = SeqSource::morse();
    const std::vector<std::int64_t> shifts{0, 3, 10}, points{0, 1, 2, 5, 8};
    const FunctionSample fs = orbit_family_sample(src, shifts, points);
    const SeqWindow w = morse(Box::interval(0, 20));
    for (std::size_t i = 0; i < shifts.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j) EXPECT_EQ(fs.at(i, j), w.at(points[j] + shifts[i]));
    EXPECT_EQ(fs.labels()[3], std::vector<double>{5.0});
}

TEST(SampleCsv, RoundTrip) {
    const FunctionSample fs(2, 3, {0.1, -2.5, 1e-9, 3, 4, 5}, {{0, 1}, {0.5, 2}, {1, 3}});
    std::ostringstream os;
    write_sample_csv(os, fs);
    std::istringstream is(os.str());
    const FunctionSample back = read_sample_csv(is);
    ASSERT_EQ(back.rows(), 2u);
    ASSERT_EQ(back.cols(), 3u);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(back.at(i, j), fs.at(i, j));
    EXPECT_EQ(back.labels(), fs.labels());
    std::istringstream bad("member,0\nf0,x\n");
    EXPECT_THROW(read_sample_csv(bad), ConfigError);
}
