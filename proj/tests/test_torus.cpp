#include <gtest/gtest.h>

#include "properties.hpp"
#include "tamelab/torus.hpp"

using namespace tamelab;

TEST(Frac, RatioIsExactBinaryExpansion) {
    EXPECT_EQ(Frac::ratio(1, 2), constants::half);
    EXPECT_EQ(Frac::ratio(1, 4), constants::quarter);
    EXPECT_EQ(Frac::ratio(0, 7), Frac());
    EXPECT_EQ(Frac::ratio(1, 3).hex(), "0x55555555555555555555555555555555");
    EXPECT_EQ(Frac::ratio(2, 3).hex(), "0xaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa");
    EXPECT_THROW(Frac::ratio(3, 3), RangeError);
    EXPECT_THROW(Frac::ratio(1, 0), RangeError);
}

TEST(Frac, ConstantsMatchReferenceDigits) {
    // leading hexadecimal digits of (sqrt5-1)/2, sqrt2-1, sqrt3-1, pi-3
    EXPECT_EQ(constants::golden.hi(), 0x9e3779b97f4a7c15ULL);
    EXPECT_EQ(constants::sqrt2.hi(), 0x6a09e667f3bcc908ULL);
    EXPECT_EQ(constants::sqrt3.hi(), 0xbb67ae8584caa73bULL);
    EXPECT_EQ(constants::pi.hi(), 0x243f6a8885a308d3ULL);
    EXPECT_NEAR(constants::golden.to_double(), 0.6180339887498949, 1e-15);
    EXPECT_NEAR(constants::sqrt2.to_double(), 0.4142135623730950, 1e-15);
}

TEST(Frac, ComplementAndTimesWrap) {
    EXPECT_EQ(Frac().complement(), Frac());
    EXPECT_EQ(constants::quarter.complement(), Frac::ratio(3, 4));
    EXPECT_EQ(constants::half.times(2), Frac());
    EXPECT_EQ(constants::quarter.times(-1), Frac::ratio(3, 4));
    EXPECT_EQ(constants::golden.times(3), constants::golden + constants::golden + constants::golden);
    EXPECT_EQ(constants::golden + constants::golden.complement(), Frac());
}

TEST(Frac, ParseForms) {
    EXPECT_EQ(parse_frac("golden"), constants::golden);
    EXPECT_EQ(parse_frac("1-golden"), constants::golden.complement());
    EXPECT_EQ(parse_frac("1/3"), Frac::ratio(1, 3));
    EXPECT_EQ(parse_frac("0.5"), constants::half);
    EXPECT_EQ(parse_frac("0.25"), constants::quarter);
    EXPECT_EQ(parse_frac("0"), Frac());
    EXPECT_NEAR(parse_frac("0.1").to_double(), 0.1, 1e-18);
    EXPECT_THROW(parse_frac("1.5"), ConfigError);
    EXPECT_THROW(parse_frac("nonsense"), ConfigError);
}

TEST(Rotation, ValidatesShape) {
    EXPECT_THROW(RotationSpec({}), DimensionError);
    EXPECT_THROW(RotationSpec::circle({Frac()}), ArgumentError);
    const auto spec = RotationSpec::circle({constants::golden, constants::sqrt2});
    EXPECT_EQ(spec.rank(), 2u);
    EXPECT_EQ(spec.torus_dim(), 1u);
    const TorusPoint z{Frac()};
    const std::vector<std::int64_t> one{1};
    EXPECT_THROW(rotate_add(z, spec, one), DimensionError);
    const std::vector<std::int64_t> huge{kMaxRotationStep, 0};
    EXPECT_THROW(rotate_add(z, spec, huge), RangeError);
}

TEST(Rotation, AddsEachGenerator) {
    const auto spec = RotationSpec::circle({constants::golden, constants::sqrt2});
    const std::vector<std::int64_t> n{2, -1};
    const TorusPoint r = rotate_add(TorusPoint{Frac()}, spec, n);
    EXPECT_EQ(r[0], constants::golden.times(2) - constants::sqrt2);
}

TEST(Rotation, CocycleIdentityProperty) {
    const auto o = props::cocycle_identity(0x5eed0001, 200);
    EXPECT_TRUE(o.ok()) << o.first_failure;
    EXPECT_EQ(o.cases, 200u);
}

TEST(CutPartition, HalfOpenCells) {
    const CutPartition part({Frac(), constants::quarter, constants::half});
    EXPECT_EQ(part.alphabet_size(), 3u);
    EXPECT_EQ(part.evaluate(Frac()), 0u);
    EXPECT_EQ(part.evaluate(constants::quarter - Frac(1)), 0u);
    EXPECT_EQ(part.evaluate(constants::quarter), 1u);
    EXPECT_EQ(part.evaluate(constants::half), 2u);
    EXPECT_EQ(part.evaluate(Frac::ratio(9, 10)), 2u);
    EXPECT_TRUE(part.near_cut(constants::half + Frac(5)));
    EXPECT_TRUE(part.near_cut(Frac() - Frac(5)));
    EXPECT_FALSE(part.near_cut(Frac::ratio(1, 3)));
}

TEST(CutPartition, RejectsBadCuts) {
    EXPECT_THROW(CutPartition({Frac()}), ArgumentError);
    EXPECT_THROW(CutPartition({constants::half}), ArgumentError);
    EXPECT_THROW(CutPartition({constants::quarter, constants::half}), ArgumentError);
    EXPECT_THROW(CutPartition({Frac(), constants::half, constants::quarter}), ArgumentError);
    std::vector<Frac> many;
    for (int i = 0; i < 17; ++i) many.push_back(Frac::ratio(static_cast<std::uint64_t>(i), 17));
    EXPECT_THROW(CutPartition{many}, CapacityError);
}

TEST(BallRegion, MinImageMetric) {
    const BallRegion ball(TorusPoint{Frac(), Frac()}, constants::quarter);
    EXPECT_TRUE(ball.contains(TorusPoint{Frac::ratio(9, 10), Frac::ratio(1, 10)}));
    EXPECT_TRUE(ball.contains(TorusPoint{constants::quarter, Frac()}));
    EXPECT_FALSE(ball.contains(TorusPoint{Frac::ratio(1, 5), Frac::ratio(1, 5)}));
    EXPECT_FALSE(ball.contains(TorusPoint{constants::half, constants::half}));
    EXPECT_THROW(ball.contains(TorusPoint{Frac()}), DimensionError);
    EXPECT_THROW(BallRegion(TorusPoint{Frac()}, constants::quarter), DimensionError);
    EXPECT_THROW(BallRegion(TorusPoint{Frac(), Frac()}, constants::half), RangeError);
}
