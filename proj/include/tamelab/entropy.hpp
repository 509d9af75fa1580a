#pragma once

// Entropy series from pattern counts. The cover refined along a coordinate
// sequence is the partition by the symbol at coordinate 0, so the refinement
// along a_0..a_{n-1} has one cell per pattern on {a_0, ..., a_{n-1}}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tamelab/error.hpp"
#include "tamelab/language.hpp"
#include "tamelab/window.hpp"

namespace tamelab {

struct EntropyPoint {
    std::size_t n;
    std::uint64_t count;
    double rate;  // log2(count) / n
};

struct EntropySeries {
    enum class Mode { contiguous, along_sequence };

    Mode mode = Mode::contiguous;
    std::vector<std::int64_t> along;  // coordinate sequence (along_sequence only)
    std::vector<EntropyPoint> points;
    double headline = 0.0;            // least-squares slope of log2(count) over the last quartile

    double rate(std::size_t n) const { return points.at(n - 1).rate; }
    std::uint64_t count(std::size_t n) const { return points.at(n - 1).count; }
};

namespace detail {

/// Least-squares slope of log2(count) against n over the last quarter of the
/// points (at least two points when available).
inline double tail_slope(const std::vector<EntropyPoint>& pts) {
    if (pts.size() < 2) return pts.empty() ? 0.0 : pts.front().rate;
    std::size_t take = std::max<std::size_t>(2, pts.size() / 4);
    const std::size_t first = pts.size() - take;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = first; i < pts.size(); ++i) {
        const double x = static_cast<double>(pts[i].n), y = std::log2(static_cast<double>(pts[i].count));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(take);
    const double den = k * sxx - sx * sx;
    if (den == 0) return 0.0;
    const double slope = (k * sxy - sx * sy) / den;
    return slope < 0 ? 0.0 : slope;
}

inline EntropyPoint make_point(std::size_t n, std::uint64_t count) {
    return {n, count, std::log2(static_cast<double>(count)) / static_cast<double>(n)};
}

}  // namespace detail

/// rate(n) = log2 p(n) / n for n = 1..n_max.
inline EntropySeries entropy_estimate(const SeqWindow& win, std::size_t n_max, std::size_t threads = 1) {
    const WindowLanguage lang = complexity(win, n_max, threads);
    EntropySeries s;
    s.mode = EntropySeries::Mode::contiguous;
    for (std::size_t n = 1; n <= n_max; ++n) s.points.push_back(detail::make_point(n, lang.p(n)));
    s.headline = detail::tail_slope(s.points);
    return s;
}

/// rate(n) = log2 |patterns on {a_0, ..., a_{n-1}}| / n, each over all shifts valid for that prefix.
inline EntropySeries sequence_entropy_estimate(const SeqWindow& win, std::span<const std::int64_t> along, std::size_t n_max,
                                               std::size_t threads = 1) {
    if (win.rank() != 1) throw DimensionError("sequence entropy is defined for rank-1 windows");
    if (n_max == 0 || n_max > along.size()) throw ArgumentError("n_max must be 1..|sequence|");
    for (std::size_t i = 1; i < n_max; ++i)
        if (along[i] <= along[i - 1]) throw ArgumentError("coordinate sequence must be strictly increasing");
    EntropySeries s;
    s.mode = EntropySeries::Mode::along_sequence;
    s.along.assign(along.begin(), along.begin() + static_cast<std::ptrdiff_t>(n_max));
    for (std::size_t n = 1; n <= n_max; ++n) {
        const CoordSet A = CoordSet::of(along.first(n));
        s.points.push_back(detail::make_point(n, patterns_on(win, A, ShiftSet::all(), false, threads).count()));
    }
    s.headline = detail::tail_slope(s.points);
    return s;
}

inline void write_entropy_csv(std::ostream& os, const EntropySeries& s) {
    os << "n,count,rate\n";
    char buf[64];
    for (const auto& p : s.points) {
        std::snprintf(buf, sizeof buf, "%.12f", p.rate);
        os << p.n << ',' << p.count << ',' << buf << '\n';
    }
}

}  // namespace tamelab
