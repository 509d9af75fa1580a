#pragma once

// Evidence reports: entropy, free sets per diameter bracket, density proxies
// and projection-growth probes, reduced to three flags. Every flag holds at
// the scale recorded in the report and nowhere else.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tamelab/entropy.hpp"
#include "tamelab/error.hpp"
#include "tamelab/freeset.hpp"
#include "tamelab/generators.hpp"
#include "tamelab/language.hpp"

namespace tamelab {

enum class Growth { bounded, polynomial, exponential };

inline const char* growth_name(Growth g) {
    switch (g) {
        case Growth::bounded: return "bounded";
        case Growth::polynomial: return "polynomial";
        case Growth::exponential: return "exponential";
    }
    return "?";
}

struct ProbeSpec {
    std::string name;
    std::vector<std::int64_t> along;  // increasing, relative to the shift origin
};

struct ProjectionProbe {
    std::string name;
    std::vector<std::int64_t> kept;  // greedy K, in order of inclusion
    std::vector<std::size_t> sizes;
    std::vector<std::uint64_t> counts;  // patterns on the first sizes[i] elements of K
    double slope = 0.0;                 // least-squares slope of log count vs log size
    Growth growth = Growth::bounded;
};

namespace detail {

inline double loglog_slope(std::span<const std::size_t> sizes, std::span<const std::uint64_t> counts) {
    const std::size_t n = sizes.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log2(static_cast<double>(sizes[i])), y = std::log2(static_cast<double>(counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(n), den = k * sxx - sx * sx;
    return den == 0 ? 0.0 : (k * sxy - sx * sy) / den;
}

inline std::uint64_t count_on(const SeqWindow& win, std::span<const std::int64_t> coords, std::size_t threads) {
    std::vector<Coord> cs;
    for (auto x : coords) cs.push_back(coord1(x));
    return patterns_on(win, CoordSet(win.rank(), std::move(cs)), ShiftSet::all(), false, threads).count();
}

}  // namespace detail

/// Greedy K subset of L: an element is dropped when including it would more
/// than double the pattern count. Growth of counts on K-prefixes is fit on a
/// log-log scale: slope < 0.1 bounded, < dimension + 1 polynomial, else exponential.
inline ProjectionProbe probe_projection_growth(const SeqWindow& win, const ProbeSpec& probe, std::span<const std::size_t> prefix_sizes,
                                               std::size_t dimension = 1, std::size_t threads = 1) {
    if (prefix_sizes.empty()) throw ArgumentError("probe needs prefix sizes");
    for (std::size_t i = 0; i < probe.along.size(); ++i)
        if (i && probe.along[i] <= probe.along[i - 1]) throw ArgumentError("probe sequence must be increasing");
    const std::size_t target = *std::max_element(prefix_sizes.begin(), prefix_sizes.end());
    ProjectionProbe out;
    out.name = probe.name;
    std::uint64_t count = 1;
    for (auto x : probe.along) {
        if (out.kept.size() == target) break;
        out.kept.push_back(x);
        std::vector<std::int64_t> sorted = out.kept;
        std::sort(sorted.begin(), sorted.end());
        const std::uint64_t c = detail::count_on(win, sorted, threads);
        if (c > 2 * count) {
            out.kept.pop_back();
            continue;
        }
        count = c;
    }
    for (auto s : prefix_sizes) {
        if (s == 0 || s > out.kept.size()) continue;
        std::vector<std::int64_t> prefix(out.kept.begin(), out.kept.begin() + static_cast<std::ptrdiff_t>(s));
        std::sort(prefix.begin(), prefix.end());
        out.sizes.push_back(s);
        out.counts.push_back(detail::count_on(win, prefix, threads));
    }
    out.slope = detail::loglog_slope(out.sizes, out.counts);
    out.growth = out.slope < 0.1 ? Growth::bounded
                 : out.slope < static_cast<double>(dimension) + 1 ? Growth::polynomial
                                                                  : Growth::exponential;
    return out;
}

struct ScaleParams {
    Box window = Box::interval(0, 1 << 16);
    std::size_t entropy_n_max = 16;
    std::vector<std::int64_t> brackets{4, 8, 16};  // pool [0, D)^rank per bracket
    std::size_t max_size = 24;
    std::uint64_t horizon = 0;
    std::size_t beam = 256;
    double density_threshold = 0.05;
    double entropy_threshold = 0.05;
    double slack = 2.0;
    std::vector<ProbeSpec> probes;  // empty: default_probes(window)
    std::vector<std::size_t> prefix_sizes{1, 2, 4, 8, 16};
    std::size_t threads = 1;
};

/// Arithmetic progressions of step 1 and 2, powers of two, and finite sums of
/// distinct powers of ten, each truncated to fit a quarter of the window.
inline std::vector<ProbeSpec> default_probes(const Box& window) {
    const std::int64_t reach = std::max<std::int64_t>(1, window.extents[0] / 4);
    std::vector<ProbeSpec> out(4);
    out[0].name = "arith1";
    out[1].name = "arith2";
    out[2].name = "lacunary2";
    out[3].name = "ip10";
    for (std::int64_t x = 0; x < reach && x < 64; ++x) out[0].along.push_back(x);
    for (std::int64_t x = 0; x < reach && x < 128; x += 2) out[1].along.push_back(x);
    for (std::int64_t x = 1; x < reach; x *= 2) out[2].along.push_back(x);
    for (std::uint32_t mask = 1; mask < (1u << 10); ++mask) {
        std::int64_t v = 0, p = 10;
        for (std::uint32_t b = 0; b < 10 && v < reach; ++b, p *= 10)
            if (mask & (1u << b)) v += p;
        if (v < reach) out[3].along.push_back(v);
    }
    std::sort(out[3].along.begin(), out[3].along.end());
    out[3].along.erase(std::unique(out[3].along.begin(), out[3].along.end()), out[3].along.end());
    std::erase_if(out, [](const ProbeSpec& p) { return p.along.empty(); });
    return out;
}

struct BracketResult {
    std::int64_t diameter_budget = 0;
    std::size_t max_size = 0;
    std::optional<FreeSetCertificate> best;
    std::vector<DensityPoint> density;
    std::optional<double> best_coverage_next;  // best coverage at size max_size + 1, when any candidate exists
    bool beam_limited = false;
};

struct EvidenceReport {
    std::string source;
    std::string source_digest;
    std::string window_digest;
    Box window;
    std::uint64_t near_boundary_hits = 0;
    EntropySeries entropy;
    std::vector<BracketResult> brackets;
    std::vector<ProjectionProbe> probes;
    double best_density = 0.0;        // density proxy of the largest set in the last bracket
    double complexity_ratio = 0.0;    // p(n_max) / (n_max + 1); linear-growth trace
    ScaleParams scale;
    bool nonnull_evidence = false;
    bool positive_entropy_evidence = false;
    bool tame_consistent = false;
};

inline EvidenceReport classify(const SeqSource& source, const ScaleParams& scale) {
    if (scale.brackets.empty()) throw ArgumentError("at least one diameter bracket is required");
    const SeqWindow win = source.materialize(scale.window, scale.threads);
    EvidenceReport rep;
    rep.source = source.describe();
    rep.source_digest = source.digest();
    rep.window_digest = digest_of(seq_to_string(win));
    rep.window = scale.window;
    rep.near_boundary_hits = win.near_boundary_hits();
    rep.scale = scale;
    rep.scale.threads = 0;  // not part of the scale
    if (rep.scale.probes.empty()) rep.scale.probes = default_probes(scale.window);
    const std::size_t rank = win.rank();

    rep.entropy = entropy_estimate(win, scale.entropy_n_max, scale.threads);
    rep.complexity_ratio = static_cast<double>(rep.entropy.points.back().count) / static_cast<double>(scale.entropy_n_max + 1);

    bool oversized = false;
    for (auto D : scale.brackets) {
        if (D <= 0) throw ArgumentError("bracket diameters must be positive");
        FreeSearchBudget budget;
        budget.rank = rank;
        const Box cube = Box::make(std::vector<std::int64_t>(rank, 0), std::vector<std::int64_t>(rank, D));
        for (std::uint64_t i = 0; i < cube.cells(); ++i) budget.pool.push_back(cube.at(i));
        budget.max_size = scale.max_size;
        budget.horizon = scale.horizon;
        budget.beam = scale.beam;
        budget.threads = scale.threads;
        const MaxFreeResult r = max_free_set(win, budget);
        BracketResult br;
        br.diameter_budget = D;
        br.max_size = r.max_size();
        br.best = r.best;
        br.density = free_density_profile(r);
        br.beam_limited = r.beam_limited;
        if (br.max_size < r.profile.size() && r.profile[br.max_size].candidates > 0)
            br.best_coverage_next = r.profile[br.max_size].best_coverage();
        for (const auto& d : br.density)
            if (static_cast<double>(d.size) > std::log2(static_cast<double>(d.diameter + 1)) + scale.slack) oversized = true;
        rep.brackets.push_back(std::move(br));
    }

    for (const auto& p : rep.scale.probes)
        rep.probes.push_back(probe_projection_growth(win, p, scale.prefix_sizes, source.group_rank(), scale.threads));

    const auto& last = rep.brackets.back();
    if (!last.density.empty()) rep.best_density = last.density.back().ratio;

    bool grows = rep.brackets.size() >= 2 && rep.brackets.front().max_size > 0;
    for (std::size_t i = 1; i < rep.brackets.size(); ++i)
        if (rep.brackets[i].max_size <= rep.brackets[i - 1].max_size) grows = false;
    rep.nonnull_evidence = grows;
    rep.positive_entropy_evidence =
        grows && rep.best_density >= scale.density_threshold && rep.entropy.headline >= scale.entropy_threshold;
    bool subexponential = true;
    for (const auto& p : rep.probes)
        if (p.growth == Growth::exponential) subexponential = false;
    rep.tame_consistent = !oversized && subexponential;
    return rep;
}

namespace detail {

inline std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string join_sizes(std::span<const std::int64_t> xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
    return out;
}

}  // namespace detail

inline void write_report(std::ostream& os, const EvidenceReport& r) {
    const auto yes = [](bool b) { return b ? "true" : "false"; };
    os << "TAMELAB-EVIDENCE v1\n";
    os << "source: " << r.source << "\n";
    os << "source_digest: " << r.source_digest << "\n";
    os << "window: origin=" << format_coord(r.window.origin, r.window.rank) << " extents=" << format_coord(r.window.extents, r.window.rank)
       << "\n";
    os << "window_digest: " << r.window_digest << "\n";
    os << "near_boundary_hits: " << r.near_boundary_hits << "\n";
    os << "entropy: n=1.." << r.scale.entropy_n_max << " rate(n_max)=" << detail::fixed(r.entropy.points.back().rate)
       << " headline=" << detail::fixed(r.entropy.headline) << "\n";
    os << "complexity_ratio: " << detail::fixed(r.complexity_ratio) << "\n";
    os << "scale: horizon=" << (r.scale.horizon ? std::to_string(r.scale.horizon) : std::string("all"))
       << " beam=" << r.scale.beam << " max_size=" << r.scale.max_size << " brackets=" << detail::join_sizes(r.scale.brackets) << "\n";
    os << "thresholds: density=" << detail::fixed(r.scale.density_threshold, 4) << " entropy=" << detail::fixed(r.scale.entropy_threshold, 4)
       << " slack=" << detail::fixed(r.scale.slack, 4) << "\n";
    for (const auto& b : r.brackets) {
        os << "bracket " << b.diameter_budget << ": max_free_size=" << b.max_size;
        if (b.best) os << " set=" << b.best->coords.format();
        os << " next_coverage=" << (b.best_coverage_next ? detail::fixed(*b.best_coverage_next) : std::string("n/a")) << (b.beam_limited ? " beam-limited" : "") << "\n";
        for (const auto& d : b.density)
            os << "  density size=" << d.size << " diameter=" << d.diameter << " ratio=" << detail::fixed(d.ratio) << "\n";
    }
    for (const auto& p : r.probes) {
        os << "probe " << p.name << ": growth=" << growth_name(p.growth) << " slope=" << detail::fixed(p.slope) << " counts=";
        for (std::size_t i = 0; i < p.sizes.size(); ++i) os << (i ? "," : "") << p.sizes[i] << ":" << p.counts[i];
        os << "\n";
    }
    os << "best_density: " << detail::fixed(r.best_density) << "\n";
    os << "nonnull_evidence: " << yes(r.nonnull_evidence) << "\n";
    os << "positive_entropy_evidence: " << yes(r.positive_entropy_evidence) << "\n";
    os << "tame_consistent: " << yes(r.tame_consistent) << "\n";
}

inline void write_report_csv_header(std::ostream& os) {
    os << "source_digest,window_digest,entropy_headline,complexity_ratio,max_free_sizes,best_density,nonnull_evidence,"
          "positive_entropy_evidence,tame_consistent\n";
}

inline void write_report_csv_row(std::ostream& os, const EvidenceReport& r) {
    os << r.source_digest << ',' << r.window_digest << ',' << detail::fixed(r.entropy.headline) << ',' << detail::fixed(r.complexity_ratio)
       << ',';
    for (std::size_t i = 0; i < r.brackets.size(); ++i) os << (i ? ";" : "") << r.brackets[i].max_size;
    os << ',' << detail::fixed(r.best_density) << ',' << r.nonnull_evidence << ',' << r.positive_entropy_evidence << ','
       << r.tame_consistent << '\n';
}

}  // namespace tamelab
