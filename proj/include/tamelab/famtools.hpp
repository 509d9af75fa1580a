#pragma once

// Finite-sample diagnostics for bounded real-valued families: independent
// subsequences with threshold gaps, l1 constants, eps-non-sensitivity on a
// grid cover, and sampled total variation.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "tamelab/error.hpp"
#include "tamelab/generators.hpp"
#include "tamelab/support.hpp"
#include "tamelab/torus.hpp"
#include "tamelab/window.hpp"

namespace tamelab {

/// rows = family members, cols = sample points. labels[j] are the
/// coordinates of point j (used by GridCover).
class FunctionSample {
public:
    static constexpr std::size_t kMaxRowsForSearch = 64;

    FunctionSample(std::size_t rows, std::size_t cols, std::vector<double> values, std::vector<std::vector<double>> labels = {})
        : rows_(rows), cols_(cols), values_(std::move(values)), labels_(std::move(labels)) {
        if (rows_ == 0 || cols_ == 0) throw ArgumentError("function sample must be nonempty");
        if (values_.size() != rows_ * cols_) throw ArgumentError("value count does not match rows x cols");
        if (!labels_.empty() && labels_.size() != cols_) throw ArgumentError("label count does not match columns");
        for (double v : values_) {
            if (!std::isfinite(v)) throw ArgumentError("function values must be finite");
            bound_ = std::max(bound_, std::fabs(v));
        }
        if (labels_.empty())
            for (std::size_t j = 0; j < cols_; ++j) labels_.push_back({static_cast<double>(j)});
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double bound() const { return bound_; }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    const std::vector<std::vector<double>>& labels() const { return labels_; }

private:
    std::size_t rows_, cols_;
    std::vector<double> values_;
    std::vector<std::vector<double>> labels_;
    double bound_ = 0.0;
};

/// Members n_1 < ... < n_m with, for each high-mask h (bit i set: member i
/// above b, clear: below a), a column meeting all 2m inequalities.
struct IndependenceWitness {
    double a = 0, b = 0;
    std::vector<std::size_t> members;
    std::vector<std::size_t> columns;  // indexed by high-mask

    std::size_t length() const { return members.size(); }
};

inline bool verify_witness(const FunctionSample& fs, const IndependenceWitness& w) {
    const std::size_t m = w.members.size();
    if (m < 2 || m > 12 || !(w.a < w.b)) return false;
    if (w.columns.size() != (std::size_t{1} << m)) return false;
    for (std::size_t i = 0; i < m; ++i)
        if (w.members[i] >= fs.rows() || (i && w.members[i] <= w.members[i - 1])) return false;
    for (std::size_t h = 0; h < w.columns.size(); ++h) {
        const std::size_t j = w.columns[h];
        if (j >= fs.cols()) return false;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = fs.at(w.members[i], j);
            if ((h >> i) & 1 ? !(v > w.b) : !(v < w.a)) return false;
        }
    }
    return true;
}

inline void write_witness(std::ostream& os, const IndependenceWitness& w) {
    char buf[64];
    os << "TAMELAB-INDEPENDENCE v1\n";
    std::snprintf(buf, sizeof buf, "%.17g %.17g", w.a, w.b);
    os << "thresholds: " << buf << "\n";
    os << "length: " << w.length() << "\nmembers:";
    for (auto n : w.members) os << ' ' << n;
    os << "\n";
    for (std::size_t h = 0; h < w.columns.size(); ++h) {
        os << "split ";
        for (std::size_t i = 0; i < w.members.size(); ++i) os << (((h >> i) & 1) ? 'H' : 'L');
        os << " column " << w.columns[h] << "\n";
    }
}

namespace detail {

using ColumnBits = std::vector<std::uint64_t>;

struct IndependenceSearch {
    const FunctionSample& fs;
    std::size_t max_len;
    std::size_t words;
    std::vector<ColumnBits> low, high;

    IndependenceSearch(const FunctionSample& f, double a, double b, std::size_t m)
        : fs(f), max_len(m), words((f.cols() + 63) / 64), low(f.rows(), ColumnBits(words, 0)), high(f.rows(), ColumnBits(words, 0)) {
        for (std::size_t i = 0; i < fs.rows(); ++i)
            for (std::size_t j = 0; j < fs.cols(); ++j) {
                const double v = fs.at(i, j);
                if (v < a) low[i][j >> 6] |= std::uint64_t{1} << (j & 63);
                else if (v > b) high[i][j >> 6] |= std::uint64_t{1} << (j & 63);
            }
    }

    static bool any(const ColumnBits& v) {
        for (auto w : v)
            if (w) return true;
        return false;
    }

    static std::size_t first(const ColumnBits& v) {
        for (std::size_t w = 0; w < v.size(); ++w)
            if (v[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(v[w]));
        return SIZE_MAX;
    }

    /// Splits each cell by row r; cells are indexed by high-mask, new bit = highest.
    bool extend(const std::vector<ColumnBits>& cells, std::size_t r, std::vector<ColumnBits>& out) const {
        const std::size_t n = cells.size();
        out.assign(2 * n, ColumnBits(words, 0));
        for (std::size_t h = 0; h < n; ++h) {
            auto& lo = out[h];
            auto& hi = out[h + n];
            for (std::size_t w = 0; w < words; ++w) {
                lo[w] = cells[h][w] & low[r][w];
                hi[w] = cells[h][w] & high[r][w];
            }
            if (!any(lo) || !any(hi)) return false;
        }
        return true;
    }

    /// Depth-first from `path`; best holds the longest (then lexicographically first) witness.
    void dfs(std::vector<std::size_t>& path, const std::vector<ColumnBits>& cells, std::optional<IndependenceWitness>& best,
             double a, double b) const {
        if (path.size() >= 2 && (!best || path.size() > best->length())) {
            IndependenceWitness w{a, b, path, {}};
            for (const auto& c : cells) w.columns.push_back(first(c));
            best = std::move(w);
        }
        if (path.size() == max_len) return;
        std::vector<ColumnBits> next;
        for (std::size_t r = path.back() + 1; r < fs.rows(); ++r) {
            if (best && best->length() == max_len) return;
            // remaining rows cannot beat the current best
            if (best && path.size() + (fs.rows() - r) <= best->length()) return;
            if (!extend(cells, r, next)) continue;
            path.push_back(r);
            dfs(path, next, best, a, b);
            path.pop_back();
        }
    }
};

inline bool better(const std::optional<IndependenceWitness>& x, const std::optional<IndependenceWitness>& y) {
    if (!x) return false;
    if (!y) return true;
    if (x->length() != y->length()) return x->length() > y->length();
    return x->members < y->members;
}

}  // namespace detail

/// Longest independent subsequence (length 2..max_len) at thresholds a < b;
/// ties go to the lexicographically smallest member list. Absence is a
/// statement about this sample only.
inline std::optional<IndependenceWitness> find_independent_subfamily(const FunctionSample& fs, double a, double b,
                                                                     std::size_t max_len, std::size_t threads = 1) {
    if (!(a < b)) throw ArgumentError("thresholds must satisfy a < b");
    if (max_len < 2 || max_len > 12) throw ArgumentError("max_len must be 2..12");
    if (fs.rows() > FunctionSample::kMaxRowsForSearch) throw CapacityError("independence search is capped at 64 rows");
    const detail::IndependenceSearch search(fs, a, b, max_len);
    const std::size_t n = fs.rows();
    std::vector<std::optional<IndependenceWitness>> found(chunk_count(n, threads));
    parallel_chunks(n, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto& best = found[chunk];
        for (std::size_t r = begin; r < end; ++r) {
            if (best && best->length() == max_len) break;
            std::vector<detail::ColumnBits> cells{search.low[r], search.high[r]};
            if (!detail::IndependenceSearch::any(cells[0]) || !detail::IndependenceSearch::any(cells[1])) continue;
            std::vector<std::size_t> path{r};
            search.dfs(path, cells, best, a, b);
        }
    });
    std::optional<IndependenceWitness> best;
    for (auto& f : found)
        if (detail::better(f, best)) best = std::move(f);
    return best;
}

/// Threshold pairs (Q(q), Q(1-q)) of the pooled values for q = 0.1, 0.25, 0.4, widest gap first.
inline std::vector<std::pair<double, double>> threshold_ladder(const FunctionSample& fs) {
    std::vector<double> all;
    for (std::size_t i = 0; i < fs.rows(); ++i) all.insert(all.end(), fs.row(i).begin(), fs.row(i).end());
    std::sort(all.begin(), all.end());
    auto quantile = [&](double q) { return all[static_cast<std::size_t>(q * static_cast<double>(all.size() - 1))]; };
    std::vector<std::pair<double, double>> out;
    for (double q : {0.1, 0.25, 0.4}) {
        const double a = quantile(q), b = quantile(1 - q);
        if (a < b) out.emplace_back(a, b);
    }
    return out;
}

struct L1Bound {
    double certified;  // (b - a) / 2
    double empirical;  // min over sign vectors of (1/m) max_j |sum_i c_i f_{n_i}(x_j)|
};

/// For a valid witness the empirical value is at least the certified one:
/// the columns for the splits c and -c differ by more than m(b - a).
inline L1Bound l1_lower_bound(const FunctionSample& fs, const IndependenceWitness& w) {
    if (!verify_witness(fs, w)) throw IntegrityError("independence witness does not verify against the sample");
    const std::size_t m = w.length();
    double empirical = INFINITY;
    // c and -c give the same value, so fix c_0 = +1
    for (std::uint32_t signs = 0; signs < (1u << (m - 1)); ++signs) {
        double worst = 0.0;
        for (std::size_t j = 0; j < fs.cols(); ++j) {
            double sum = fs.at(w.members[0], j);
            for (std::size_t i = 1; i < m; ++i) sum += ((signs >> (i - 1)) & 1 ? -1.0 : 1.0) * fs.at(w.members[i], j);
            worst = std::max(worst, std::fabs(sum));
        }
        empirical = std::min(empirical, worst / static_cast<double>(m));
    }
    return {(w.b - w.a) / 2, empirical};
}

/// Axis-aligned cells of width widths[d], keyed by floor(label_d / width_d).
class GridCover {
public:
    struct Cell {
        std::vector<std::int64_t> key;
        std::vector<std::size_t> columns;
    };

    static GridCover from_labels(const std::vector<std::vector<double>>& labels, const std::vector<double>& widths) {
        if (widths.empty()) throw ArgumentError("grid cover needs at least one axis");
        for (double w : widths)
            if (!(w > 0)) throw ArgumentError("cell widths must be positive");
        std::map<std::vector<std::int64_t>, std::vector<std::size_t>> cells;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j].size() != widths.size()) throw DimensionError("label dimension differs from cover dimension");
            std::vector<std::int64_t> key;
            for (std::size_t d = 0; d < widths.size(); ++d)
                key.push_back(static_cast<std::int64_t>(std::floor(labels[j][d] / widths[d] + 1e-9)));
            cells[key].push_back(j);
        }
        GridCover g;
        g.widths_ = widths;
        for (auto& [key, cols] : cells) g.cells_.push_back({key, std::move(cols)});
        return g;
    }

    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<double>& widths() const { return widths_; }
    bool empty() const { return cells_.empty(); }

private:
    std::vector<double> widths_;
    std::vector<Cell> cells_;
};

struct NsResult {
    bool holds = false;
    std::optional<std::size_t> cell;  // first cell, in key order, with oscillation <= eps
    double oscillation = 0.0;         // of that cell, or the smallest seen
};

/// Probe of eps-non-sensitivity restricted to the cells of `cover`.
inline NsResult epsilon_ns(const FunctionSample& fs, const GridCover& cover, double eps) {
    if (!(eps > 0)) throw ArgumentError("eps must be positive");
    if (cover.empty()) throw ArgumentError("empty cover");
    NsResult out;
    out.oscillation = INFINITY;
    for (std::size_t c = 0; c < cover.cells().size(); ++c) {
        double osc = 0.0;
        for (std::size_t i = 0; i < fs.rows() && osc <= eps; ++i) {
            double lo = INFINITY, hi = -INFINITY;
            for (auto j : cover.cells()[c].columns) {
                if (j >= fs.cols()) throw RangeError("cover refers to a missing column");
                lo = std::min(lo, fs.at(i, j));
                hi = std::max(hi, fs.at(i, j));
            }
            osc = std::max(osc, hi - lo);
        }
        if (osc <= eps) return {true, c, osc};
        out.oscillation = std::min(out.oscillation, osc);
    }
    return out;
}

/// Sampled variation sum |v_{i+1} - v_i|; a lower bound for the true variation.
inline double total_variation(std::span<const std::pair<double, double>> samples) {
    double total = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].first > samples[i - 1].first)) throw ArgumentError("positions must be strictly increasing");
        total += std::fabs(samples[i].second - samples[i - 1].second);
    }
    return total;
}

inline double total_variation(std::span<const double> positions, std::span<const double> values) {
    if (positions.size() != values.size()) throw ArgumentError("positions and values differ in length");
    std::vector<std::pair<double, double>> s;
    for (std::size_t i = 0; i < positions.size(); ++i) s.emplace_back(positions[i], values[i]);
    return total_variation(s);
}

/// Row n: the symbol observable translated by shifts[n], read at each point.
inline FunctionSample orbit_family_sample(const SeqSource& source, std::span<const Coord> shifts, std::span<const Coord> points) {
    if (shifts.empty() || points.empty()) throw ArgumentError("shifts and points must be nonempty");
    const std::size_t rank = source.group_rank();
    std::vector<double> values;
    values.reserve(shifts.size() * points.size());
    for (const auto& s : shifts)
        for (const auto& p : points) values.push_back(static_cast<double>(source.symbol_at(p + s)));
    std::vector<std::vector<double>> labels;
    for (const auto& p : points) {
        std::vector<double> l;
        for (std::size_t i = 0; i < rank; ++i) l.push_back(static_cast<double>(p[i]));
        labels.push_back(std::move(l));
    }
    return FunctionSample(shifts.size(), points.size(), std::move(values), std::move(labels));
}

inline FunctionSample orbit_family_sample(const SeqSource& source, std::span<const std::int64_t> shifts,
                                          std::span<const std::int64_t> points) {
    std::vector<Coord> s, p;
    for (auto x : shifts) s.push_back(coord1(x));
    for (auto x : points) p.push_back(coord1(x));
    return orbit_family_sample(source, s, p);
}

/// Row n: indicator of partition cell `cell` rotated by shifts[n] * alpha,
/// read at circle points (labels are the points as doubles).
inline FunctionSample circle_family_sample(const CutPartition& partition, unsigned cell, Frac alpha,
                                           std::span<const std::int64_t> shifts, std::span<const Frac> points) {
    if (cell >= partition.alphabet_size()) throw ArgumentError("cell outside the partition");
    std::vector<double> values;
    for (auto n : shifts) {
        if (n <= -kMaxRotationStep || n >= kMaxRotationStep) throw RangeError("rotation step too large");
        const Frac step = alpha.times(n);
        for (const auto& x : points) values.push_back(partition.evaluate(x + step) == cell ? 1.0 : 0.0);
    }
    std::vector<std::vector<double>> labels;
    for (const auto& x : points) labels.push_back({x.to_double()});
    return FunctionSample(shifts.size(), points.size(), std::move(values), std::move(labels));
}

/// CSV exchange: header "member,<label>,...", then "f<i>,<values>"; label axes joined by ':'.
inline void write_sample_csv(std::ostream& os, const FunctionSample& fs) {
    char buf[64];
    os << "member";
    for (const auto& l : fs.labels()) {
        os << ',';
        for (std::size_t d = 0; d < l.size(); ++d) {
            std::snprintf(buf, sizeof buf, "%.17g", l[d]);
            os << (d ? ":" : "") << buf;
        }
    }
    os << '\n';
    for (std::size_t i = 0; i < fs.rows(); ++i) {
        os << 'f' << i;
        for (double v : fs.row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << ',' << buf;
        }
        os << '\n';
    }
}

inline FunctionSample read_sample_csv(std::istream& is) {
    auto split = [](const std::string& line, char sep) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, sep)) out.push_back(item);
        return out;
    };
    auto number = [](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw ConfigError("bad number '" + s + "' in sample CSV");
            return v;
        } catch (const std::logic_error&) {
            throw ConfigError("bad number '" + s + "' in sample CSV");
        }
    };
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty sample CSV");
    const auto header = split(line, ',');
    if (header.size() < 2 || header[0] != "member") throw ConfigError("sample CSV must start with a 'member' header");
    std::vector<std::vector<double>> labels;
    for (std::size_t j = 1; j < header.size(); ++j) {
        std::vector<double> l;
        for (const auto& part : split(header[j], ':')) l.push_back(number(part));
        labels.push_back(std::move(l));
    }
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) throw ConfigError("sample CSV row has the wrong width");
        for (std::size_t j = 1; j < cells.size(); ++j) values.push_back(number(cells[j]));
        ++rows;
    }
    return FunctionSample(rows, header.size() - 1, std::move(values), std::move(labels));
}

}  // namespace tamelab
