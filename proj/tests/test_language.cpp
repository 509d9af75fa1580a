#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "properties.hpp"

using namespace tamelab;

namespace {

// Direct count of distinct length-n factors, reading symbols one by one.
std::uint64_t naive_factors(const SeqWindow& w, std::size_t n) {
    std::set<std::vector<std::uint8_t>> seen;
    const auto syms = w.symbols();
    for (std::size_t i = 0; i + n <= syms.size(); ++i) seen.emplace(syms.begin() + static_cast<std::ptrdiff_t>(i), syms.begin() + static_cast<std::ptrdiff_t>(i + n));
    return seen.size();
}

SeqWindow fibonacci_window(std::int64_t len) {
    return sturmian_code(RotationSpec::circle({constants::golden}), CutPartition({Frac(), constants::golden.complement()}),
                         TorusPoint{Frac()}, Box::interval(0, len));
}

}  // namespace

TEST(CoordSet, NormalizesAndOrders) {
    const CoordSet a = CoordSet::of({5, 1, 3, 1});
    EXPECT_EQ(a.size(), 3u);
    EXPECT_EQ(a.format(), "1,3,5");
    EXPECT_EQ(a.diameter_sum(), 4);
    EXPECT_TRUE(CoordSet::of({1, 5}).is_subset_of(a));
    EXPECT_FALSE(CoordSet::of({2}).is_subset_of(a));
    EXPECT_EQ(CoordSet::cube(2, 2).size(), 4u);
    EXPECT_EQ(CoordSet::contiguous(-2, 3).format(), "-2,-1,0");
    EXPECT_THROW(CoordSet(1, {}), ArgumentError);
    EXPECT_THROW(CoordSet(4, {Coord{}}), DimensionError);
}

TEST(PatternCodes, RoundTrip) {
    const std::vector<std::uint8_t> p{2, 0, 1, 2};
    const auto code = encode_pattern(p, 3);
    EXPECT_EQ(code, 2u + 0u * 3 + 1u * 9 + 2u * 27);
    EXPECT_EQ(decode_pattern(code, 3, 4), p);
    EXPECT_EQ(pattern_space(2, 24), std::uint64_t{1} << 24);
    EXPECT_EQ(pattern_space(2, 25), 0u);
}

TEST(PatternsOn, WitnessesReproduceTheirCodes) {
    const SeqWindow w = morse(Box::interval(0, 300));
    const CoordSet A = CoordSet::of({0, 3, 7});
    const PatternSet ps = patterns_on(w, A, ShiftSet::all(), true);
    EXPECT_EQ(ps.shifts().size(), 293u);
    EXPECT_EQ(ps.witnesses().size(), ps.count());
    for (auto code : ps.codes()) {
        const auto t = ps.witness_shift(code);
        ASSERT_TRUE(t.has_value());
        std::vector<std::uint8_t> pat;
        for (const auto& c : A.coords()) pat.push_back(w.at(c + *t));
        EXPECT_EQ(encode_pattern(pat, 2), code);
    }
    EXPECT_FALSE(ps.witness_shift(ps.capacity()).has_value());
}

TEST(PatternsOn, ShiftLimitsAndErrors) {
    const SeqWindow w = char_halfline(Box::interval(-10, 10));
    const CoordSet A = CoordSet::of({0, 1});
    EXPECT_EQ(patterns_on(w, A).count(), 3u);  // 00, 01, 11
    EXPECT_EQ(patterns_on(w, A, ShiftSet::all(5)).count(), 1u);
    EXPECT_THROW(patterns_on(w, CoordSet::of({0, 25})), RangeError);
    EXPECT_THROW(patterns_on(w, A, ShiftSet::explicit_list({coord1(9)})), RangeError);
    EXPECT_THROW(patterns_on(w, CoordSet::cube(2, 2)), DimensionError);
}

TEST(PatternsOn, IdenticalAcrossThreadCounts) {
    const SeqWindow w = SeqSource::random(5, 3).materialize(Box::interval(0, 50000));
    const CoordSet A = CoordSet::of({0, 2, 3, 9, 11});
    const PatternSet one = patterns_on(w, A, ShiftSet::all(), true, 1);
    const PatternSet many = patterns_on(w, A, ShiftSet::all(), true, 8);
    EXPECT_EQ(one.codes(), many.codes());
    std::ostringstream a, b;
    write_patterns(a, one);
    write_patterns(b, many);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Project, RejectsNonSubset) {
    const SeqWindow w = morse(Box::interval(0, 64));
    const PatternSet ps = patterns_on(w, CoordSet::of({0, 1}));
    EXPECT_THROW(project(ps, CoordSet::of({2})), ArgumentError);
}

TEST(Project, ConsistencyProperty) {
    const auto o = props::projection_consistency(0x5eed0002, 150);
    EXPECT_TRUE(o.ok()) << o.first_failure;
    EXPECT_EQ(o.cases, 150u);
}

TEST(Complexity, FibonacciIsNPlusOne) {
    const WindowLanguage lang = complexity(fibonacci_window(100000), 30);
    for (std::size_t n = 1; n <= 30; ++n) EXPECT_EQ(lang.p(n), n + 1) << n;
}

TEST(Complexity, SuffixArrayMatchesNaiveCount) {
    props::Rng rng(0x5eed0003);
    for (int i = 0; i < 40; ++i) {
        const unsigned alphabet = static_cast<unsigned>(props::uniform(rng, 2, 4));
        const SeqWindow w = props::random_window(rng, 2, 300, alphabet);
        const std::size_t n_max = std::min<std::size_t>(12, w.size() - 1);
        const WindowLanguage lang = complexity(w, n_max);
        for (std::size_t n = 1; n <= n_max; ++n) EXPECT_EQ(lang.p(n), naive_factors(w, n)) << "case " << i << " n " << n;
    }
}

TEST(Complexity, ConcatenationPrefixCounts) {
    // factor counts of w_1 ... w_12, frozen from an independent reference script
    const WindowLanguage lang = complexity(concat_nonnull(Box::interval(1, concat_prefix_length(12) + 1)), 32);
    EXPECT_EQ(lang.p(8), 256u);
    EXPECT_EQ(lang.p(12), 4096u);
    EXPECT_EQ(lang.p(13), 6239u);
    EXPECT_EQ(lang.p(16), 13456u);
    EXPECT_EQ(lang.p(24), 67912u);
    EXPECT_EQ(lang.p(32), 127217u);
}

TEST(Complexity, TwoDimensionalCubesMatchPatternRoute) {
    const auto src = SeqSource::sturmian(RotationSpec::circle({constants::golden, constants::sqrt2}),
                                         CutPartition({Frac(), constants::golden.complement()}), TorusPoint{Frac()});
    const SeqWindow w = src.materialize(Box::make(std::vector<std::int64_t>{0, 0}, std::vector<std::int64_t>{128, 128}));
    const WindowLanguage a = complexity(w, 3);
    const WindowLanguage b = complexity_by_patterns(w, 3);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.p(1), 2u);
    // a rank-2 rotation coding has (n+1)^2-type growth, far below 2^(n^2)
    EXPECT_LE(a.p(3), 64u);
}

TEST(Complexity, DeBruijnIsFull) {
    const WindowLanguage lang = complexity(de_bruijn(10, Box::interval(0, 1 << 11)), 10);
    for (std::size_t n = 1; n <= 10; ++n) EXPECT_EQ(lang.p(n), std::uint64_t{1} << n);
}
