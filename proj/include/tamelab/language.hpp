#pragma once

// Window languages: patterns observed on arbitrary coordinate sets, factor
// complexity and projections between coordinate sets.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tamelab/error.hpp"
#include "tamelab/support.hpp"
#include "tamelab/window.hpp"

namespace tamelab {

/// Largest pattern space m^|A| handled with dense code sets.
inline constexpr std::uint64_t kMaxPatternSpace = std::uint64_t{1} << 24;

/// m^s, or 0 when it exceeds kMaxPatternSpace.
inline std::uint64_t pattern_space(unsigned alphabet, std::size_t size) {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < size; ++i) {
        n *= alphabet;
        if (n > kMaxPatternSpace) return 0;
    }
    return n;
}

/// A finite, strictly ordered set of lattice coordinates.
class CoordSet {
public:
    CoordSet() = default;

    CoordSet(std::size_t rank, std::vector<Coord> coords) : rank_(rank), coords_(std::move(coords)) {
        if (rank_ == 0 || rank_ > 3) throw DimensionError("coordinate rank must be 1..3");
        for (auto& c : coords_)
            for (std::size_t i = rank_; i < 3; ++i) c[i] = 0;
        std::sort(coords_.begin(), coords_.end());
        coords_.erase(std::unique(coords_.begin(), coords_.end()), coords_.end());
        if (coords_.empty()) throw ArgumentError("coordinate sets must be nonempty");
    }

    static CoordSet of(std::initializer_list<std::int64_t> xs) { return of(std::vector<std::int64_t>(xs)); }

    static CoordSet of(std::span<const std::int64_t> xs) {
        std::vector<Coord> cs;
        cs.reserve(xs.size());
        for (auto x : xs) cs.push_back(coord1(x));
        return CoordSet(1, std::move(cs));
    }

    /// {start, ..., start + n - 1}
    static CoordSet contiguous(std::int64_t start, std::int64_t n) {
        std::vector<std::int64_t> xs(static_cast<std::size_t>(n));
        std::iota(xs.begin(), xs.end(), start);
        return of(xs);
    }

    /// The box [0,n)^rank.
    static CoordSet cube(std::size_t rank, std::int64_t n) {
        const Box b = Box::make(std::vector<std::int64_t>(rank, 0), std::vector<std::int64_t>(rank, n));
        std::vector<Coord> cs;
        for (std::uint64_t i = 0; i < b.cells(); ++i) cs.push_back(b.at(i));
        return CoordSet(rank, std::move(cs));
    }

    std::size_t rank() const { return rank_; }
    std::size_t size() const { return coords_.size(); }
    const std::vector<Coord>& coords() const { return coords_; }
    const Coord& operator[](std::size_t i) const { return coords_[i]; }

    Coord min_corner() const {
        Coord m = coords_.front();
        for (const auto& c : coords_)
            for (std::size_t i = 0; i < rank_; ++i) m[i] = std::min(m[i], c[i]);
        return m;
    }

    Coord max_corner() const {
        Coord m = coords_.front();
        for (const auto& c : coords_)
            for (std::size_t i = 0; i < rank_; ++i) m[i] = std::max(m[i], c[i]);
        return m;
    }

    /// max - min per axis.
    Coord diameter() const { return max_corner() - min_corner(); }

    /// Sum of per-axis diameters; equals max - min for rank 1.
    std::int64_t diameter_sum() const {
        const Coord d = diameter();
        return d[0] + d[1] + d[2];
    }

    bool is_subset_of(const CoordSet& other) const {
        return rank_ == other.rank_ && std::includes(other.coords_.begin(), other.coords_.end(), coords_.begin(), coords_.end());
    }

    std::string format() const {
        std::string out;
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (i) out += ',';
            out += format_coord(coords_[i], rank_);
        }
        return out;
    }

    friend bool operator==(const CoordSet&, const CoordSet&) = default;
    friend auto operator<=>(const CoordSet& a, const CoordSet& b) { return a.coords_ <=> b.coords_; }

private:
    std::size_t rank_ = 1;
    std::vector<Coord> coords_;
};

/// Which shifts t to sample when reading x|_{A+t}.
struct ShiftSet {
    bool all_valid = true;
    std::size_t limit = 0;  // 0: no limit; otherwise the first `limit` valid shifts in row-major order
    std::vector<Coord> list;

    static ShiftSet all(std::size_t limit = 0) { return ShiftSet{true, limit, {}}; }
    static ShiftSet explicit_list(std::vector<Coord> shifts) { return ShiftSet{false, 0, std::move(shifts)}; }
};

/// A resolved, ordered set of shifts: a row-major box prefix or an explicit list.
class ShiftRange {
public:
    static ShiftRange box(Box b, std::uint64_t count) {
        ShiftRange r;
        r.box_ = b;
        r.count_ = count;
        return r;
    }

    static ShiftRange list(std::vector<Coord> shifts) {
        ShiftRange r;
        r.count_ = shifts.size();
        r.list_ = std::move(shifts);
        return r;
    }

    std::uint64_t size() const { return count_; }
    bool is_box() const { return box_.has_value(); }
    const std::optional<Box>& shift_box() const { return box_; }

    Coord at(std::uint64_t i) const { return box_ ? box_->at(i) : list_[static_cast<std::size_t>(i)]; }

    std::string describe(std::size_t rank) const {
        if (box_) {
            const Coord last = box_->at(count_ - 1);
            return "box origin=" + format_coord(box_->origin, rank) + " first=" + format_coord(box_->at(0), rank) +
                   " last=" + format_coord(last, rank) + " count=" + std::to_string(count_);
        }
        return "list count=" + std::to_string(count_);
    }

private:
    std::optional<Box> box_;
    std::vector<Coord> list_;
    std::uint64_t count_ = 0;
};

/// Shifts t with lo + t and hi + t inside the window, per the request.
inline ShiftRange resolve_shifts(const SeqWindow& win, const Coord& lo, const Coord& hi, const ShiftSet& request) {
    const Box& w = win.box();
    if (!request.all_valid) {
        for (const auto& t : request.list)
            if (!w.contains(lo + t) || !w.contains(hi + t))
                throw RangeError("shift " + format_coord(t, w.rank) + " moves the coordinate set outside the window");
        if (request.list.empty()) throw RangeError("empty shift list");
        return ShiftRange::list(request.list);
    }
    Box b;
    b.rank = w.rank;
    for (std::size_t i = 0; i < w.rank; ++i) {
        b.origin[i] = w.origin[i] - lo[i];
        b.extents[i] = (w.origin[i] + w.extents[i] - 1 - hi[i]) - b.origin[i] + 1;
        if (b.extents[i] <= 0) throw RangeError("coordinate set does not fit inside the window");
    }
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < b.rank; ++i) count *= static_cast<std::uint64_t>(b.extents[i]);
    if (request.limit != 0) count = std::min<std::uint64_t>(count, request.limit);
    return ShiftRange::box(b, count);
}

/// Mixed-radix pattern codes: digit i is the symbol at the i-th coordinate,
/// least significant first.
inline std::vector<std::uint8_t> decode_pattern(std::uint64_t code, unsigned alphabet, std::size_t size) {
    std::vector<std::uint8_t> out(size);
    for (std::size_t i = 0; i < size; ++i) {
        out[i] = static_cast<std::uint8_t>(code % alphabet);
        code /= alphabet;
    }
    return out;
}

inline std::uint64_t encode_pattern(std::span<const std::uint8_t> symbols, unsigned alphabet) {
    std::uint64_t code = 0;
    for (std::size_t i = symbols.size(); i-- > 0;) code = code * alphabet + symbols[i];
    return code;
}

/// The set {x|_{A+t} : t sampled}, stored as a dense bit vector over codes.
class PatternSet {
public:
    struct Witness {
        std::uint64_t code;
        std::uint64_t shift_index;  // position in shifts()
    };

    PatternSet(CoordSet coords, unsigned alphabet, std::vector<std::uint64_t> bits,
               std::shared_ptr<const ShiftRange> shifts, std::vector<Witness> witnesses = {})
        : coords_(std::move(coords)), alphabet_(alphabet), bits_(std::move(bits)), shifts_(std::move(shifts)),
          witnesses_(std::move(witnesses)) {
        count_ = 0;
        for (auto w : bits_) count_ += static_cast<std::uint64_t>(std::popcount(w));
    }

    const CoordSet& coords() const { return coords_; }
    unsigned alphabet() const { return alphabet_; }
    std::uint64_t count() const { return count_; }
    std::uint64_t capacity() const { return pattern_space(alphabet_, coords_.size()); }
    bool contains(std::uint64_t code) const {
        return code < capacity() && ((bits_[code >> 6] >> (code & 63)) & 1);
    }
    const ShiftRange& shifts() const { return *shifts_; }
    std::shared_ptr<const ShiftRange> shared_shifts() const { return shifts_; }
    const std::vector<Witness>& witnesses() const { return witnesses_; }
    const std::vector<std::uint64_t>& bits() const { return bits_; }

    std::vector<std::uint64_t> codes() const {
        std::vector<std::uint64_t> out;
        out.reserve(count_);
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                out.push_back(w * 64 + static_cast<std::uint64_t>(std::countr_zero(word)));
                word &= word - 1;
            }
        }
        return out;
    }

    std::optional<Coord> witness_shift(std::uint64_t code) const {
        auto it = std::lower_bound(witnesses_.begin(), witnesses_.end(), code,
                                   [](const Witness& w, std::uint64_t c) { return w.code < c; });
        if (it == witnesses_.end() || it->code != code) return std::nullopt;
        return shifts_->at(it->shift_index);
    }

private:
    CoordSet coords_;
    unsigned alphabet_;
    std::vector<std::uint64_t> bits_;
    std::uint64_t count_ = 0;
    std::shared_ptr<const ShiftRange> shifts_;
    std::vector<Witness> witnesses_;
};

/// Patterns of `win` on A + t for the requested shifts. With witnesses, the
/// first shift (in shift order) realizing each code is retained.
inline PatternSet patterns_on(const SeqWindow& win, const CoordSet& A, const ShiftSet& request = ShiftSet::all(),
                              bool with_witnesses = false, std::size_t threads = 1) {
    if (A.rank() != win.rank()) throw DimensionError("coordinate set rank differs from window rank");
    const std::uint64_t space = pattern_space(win.alphabet(), A.size());
    if (space == 0) throw CapacityError("pattern space m^|A| exceeds 2^24");
    auto shifts = std::make_shared<const ShiftRange>(resolve_shifts(win, A.min_corner(), A.max_corner(), request));

    std::vector<std::int64_t> offsets;
    offsets.reserve(A.size());
    for (const auto& c : A.coords()) offsets.push_back(win.linear(c));
    const auto syms = win.symbols();
    const unsigned m = win.alphabet();
    const std::size_t words = static_cast<std::size_t>((space + 63) / 64);
    const std::uint64_t n = shifts->size();
    const bool fast1d = win.rank() == 1 && shifts->is_box();
    const std::int64_t base0 = fast1d ? win.flat(shifts->at(0)) : 0;

    auto code_at = [&](std::uint64_t i) {
        const std::int64_t base = fast1d ? base0 + static_cast<std::int64_t>(i) : win.flat(shifts->at(i));
        std::uint64_t code = 0;
        for (std::size_t j = offsets.size(); j-- > 0;) code = code * m + syms[static_cast<std::size_t>(base + offsets[j])];
        return code;
    };

    const std::size_t chunks = chunk_count(n, threads);
    std::vector<std::vector<std::uint64_t>> local(chunks);
    parallel_chunks(n, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto& bits = local[chunk];
        bits.assign(words, 0);
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t code = code_at(i);
            bits[code >> 6] |= std::uint64_t{1} << (code & 63);
        }
    });
    std::vector<std::uint64_t> bits(words, 0);
    for (const auto& l : local)
        for (std::size_t w = 0; w < words; ++w) bits[w] |= l[w];

    std::vector<PatternSet::Witness> witnesses;
    if (with_witnesses) {
        std::uint64_t remaining = 0;
        for (auto w : bits) remaining += static_cast<std::uint64_t>(std::popcount(w));
        std::vector<std::uint64_t> seen(words, 0);
        for (std::uint64_t i = 0; i < n && remaining > 0; ++i) {
            const std::uint64_t code = code_at(i);
            auto& word = seen[code >> 6];
            const std::uint64_t bit = std::uint64_t{1} << (code & 63);
            if (!(word & bit)) {
                word |= bit;
                witnesses.push_back({code, i});
                --remaining;
            }
        }
        std::sort(witnesses.begin(), witnesses.end(), [](const auto& a, const auto& b) { return a.code < b.code; });
    }
    return PatternSet(A, m, std::move(bits), std::move(shifts), std::move(witnesses));
}

/// Restriction of every pattern in `ps` to the coordinates of `sub`.
inline PatternSet project(const PatternSet& ps, const CoordSet& sub) {
    if (!sub.is_subset_of(ps.coords())) throw ArgumentError("projection target is not a subset of the pattern coordinates");
    std::vector<std::size_t> keep;
    for (const auto& c : sub.coords())
        keep.push_back(static_cast<std::size_t>(std::lower_bound(ps.coords().coords().begin(), ps.coords().coords().end(), c) -
                                                ps.coords().coords().begin()));
    const unsigned m = ps.alphabet();
    const std::size_t s = ps.coords().size();
    const std::uint64_t space = pattern_space(m, sub.size());
    auto image = [&](std::uint64_t code) {
        const auto digits = decode_pattern(code, m, s);
        std::uint64_t out = 0;
        for (std::size_t j = keep.size(); j-- > 0;) out = out * m + digits[keep[j]];
        return out;
    };
    std::vector<std::uint64_t> bits(static_cast<std::size_t>((space + 63) / 64), 0);
    for (auto code : ps.codes()) {
        const auto c = image(code);
        bits[c >> 6] |= std::uint64_t{1} << (c & 63);
    }
    std::vector<PatternSet::Witness> witnesses;
    if (!ps.witnesses().empty()) {
        std::unordered_map<std::uint64_t, std::uint64_t> best;
        for (const auto& w : ps.witnesses()) {
            const auto c = image(w.code);
            auto [it, inserted] = best.emplace(c, w.shift_index);
            if (!inserted) it->second = std::min(it->second, w.shift_index);
        }
        for (const auto& [c, idx] : best) witnesses.push_back({c, idx});
        std::sort(witnesses.begin(), witnesses.end(), [](const auto& a, const auto& b) { return a.code < b.code; });
    }
    return PatternSet(sub, m, std::move(bits), ps.shared_shifts(), std::move(witnesses));
}

/// Structured text dump: coordinates, count, codes ascending in hex, witnesses.
inline void write_patterns(std::ostream& os, const PatternSet& ps) {
    os << "TAMELAB-PATTERNS v1\n";
    os << "rank: " << ps.coords().rank() << "\n";
    os << "alphabet: " << ps.alphabet() << "\n";
    os << "coords: " << ps.coords().format() << "\n";
    os << "shifts: " << ps.shifts().describe(ps.coords().rank()) << "\n";
    os << "count: " << ps.count() << " of " << ps.capacity() << "\n";
    os << "codes:";
    for (auto c : ps.codes()) os << ' ' << std::hex << "0x" << c << std::dec;
    os << "\n";
    for (const auto& w : ps.witnesses())
        os << "witness: 0x" << std::hex << w.code << std::dec << " @ " << format_coord(ps.shifts().at(w.shift_index), ps.coords().rank())
           << "\n";
}

// ---------------------------------------------------------------------------
// Factor complexity

namespace detail {

/// Suffix array by prefix doubling with counting sorts, O(n log n).
inline std::vector<std::int32_t> suffix_array(std::span<const std::uint8_t> s) {
    const auto n = static_cast<std::int32_t>(s.size());
    std::vector<std::int32_t> sa(n), rank(n), tmp(n), cnt;
    if (n == 0) return sa;
    for (std::int32_t i = 0; i < n; ++i) rank[i] = s[i];
    std::iota(sa.begin(), sa.end(), 0);
    std::int32_t classes = 256;
    for (std::int32_t k = 1;; k <<= 1) {
        // sort by (rank[i], rank[i+k]) with rank[i+k] = -1 past the end
        auto second = [&](std::int32_t i) { return i + k < n ? rank[i + k] + 1 : 0; };
        cnt.assign(static_cast<std::size_t>(classes) + 2, 0);
        for (std::int32_t i = 0; i < n; ++i) ++cnt[static_cast<std::size_t>(second(i))];
        for (std::size_t i = 1; i < cnt.size(); ++i) cnt[i] += cnt[i - 1];
        for (std::int32_t i = n; i-- > 0;) tmp[static_cast<std::size_t>(--cnt[static_cast<std::size_t>(second(i))])] = i;
        cnt.assign(static_cast<std::size_t>(classes) + 1, 0);
        for (std::int32_t i = 0; i < n; ++i) ++cnt[static_cast<std::size_t>(rank[i])];
        for (std::size_t i = 1; i < cnt.size(); ++i) cnt[i] += cnt[i - 1];
        for (std::int32_t i = n; i-- > 0;) {
            const std::int32_t j = tmp[static_cast<std::size_t>(i)];
            sa[static_cast<std::size_t>(--cnt[static_cast<std::size_t>(rank[j])])] = j;
        }
        std::vector<std::int32_t> next(n);
        next[sa[0]] = 0;
        std::int32_t c = 0;
        for (std::int32_t i = 1; i < n; ++i) {
            const std::int32_t a = sa[i - 1], b = sa[i];
            if (rank[a] != rank[b] || second(a) != second(b)) ++c;
            next[b] = c;
        }
        rank.swap(next);
        classes = c + 1;
        if (classes == n || k >= n) break;
    }
    return sa;
}

/// lcp[i] = longest common prefix of suffixes sa[i-1] and sa[i]; lcp[0] = 0 (Kasai).
inline std::vector<std::int32_t> lcp_array(std::span<const std::uint8_t> s, const std::vector<std::int32_t>& sa) {
    const auto n = static_cast<std::int32_t>(s.size());
    std::vector<std::int32_t> rank(n), lcp(n, 0);
    for (std::int32_t i = 0; i < n; ++i) rank[sa[i]] = i;
    std::int32_t h = 0;
    for (std::int32_t i = 0; i < n; ++i) {
        if (rank[i] > 0) {
            const std::int32_t j = sa[rank[i] - 1];
            while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
            lcp[rank[i]] = h;
            if (h > 0) --h;
        } else {
            h = 0;
        }
    }
    return lcp;
}

}  // namespace detail

/// Pattern counts p(1..n_max) on contiguous windows (k = 1) or cubes n^k (k > 1).
struct WindowLanguage {
    std::size_t rank = 1;
    std::vector<std::uint64_t> counts;  // counts[n-1] = p(n)

    std::uint64_t p(std::size_t n) const { return counts.at(n - 1); }
    std::size_t n_max() const { return counts.size(); }
};

/// Complexity computed pattern set by pattern set; the reference route.
inline WindowLanguage complexity_by_patterns(const SeqWindow& win, std::size_t n_max, std::size_t threads = 1) {
    WindowLanguage lang{win.rank(), {}};
    for (std::size_t n = 1; n <= n_max; ++n) {
        const CoordSet box = CoordSet::cube(win.rank(), static_cast<std::int64_t>(n));
        lang.counts.push_back(patterns_on(win, box, ShiftSet::all(), false, threads).count());
    }
    return lang;
}

/// Factor complexity p(n) = |patterns_on(win, {0..n-1}, all)|.
///
/// For k = 1 all lengths are counted exactly in one pass from a suffix array:
/// p(n) = #{suffixes of length >= n whose LCP with their predecessor is < n}.
/// For k > 1 each cube shape is enumerated directly (m^(n^k) <= 2^24).
inline WindowLanguage complexity(const SeqWindow& win, std::size_t n_max, std::size_t threads = 1) {
    if (n_max == 0) throw ArgumentError("n_max must be positive");
    if (win.rank() != 1) return complexity_by_patterns(win, n_max, threads);
    const auto s = win.symbols();
    if (n_max + 1 > s.size()) throw RangeError("n_max must not exceed window length - 1");
    if (s.size() > static_cast<std::size_t>(INT32_MAX)) throw CapacityError("window too long for the suffix array");
    const auto sa = detail::suffix_array(s);
    const auto lcp = detail::lcp_array(s, sa);
    std::vector<std::int64_t> diff(n_max + 2, 0);
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const auto len = static_cast<std::size_t>(static_cast<std::int64_t>(s.size()) - sa[i]);
        const auto lo = static_cast<std::size_t>(lcp[i]) + 1;  // first length this suffix contributes to
        const std::size_t hi = std::min(len, n_max);
        if (lo <= hi) {
            ++diff[lo];
            --diff[hi + 1];
        }
    }
    WindowLanguage lang{1, {}};
    std::int64_t acc = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        acc += diff[n];
        lang.counts.push_back(static_cast<std::uint64_t>(acc));
    }
    return lang;
}

}  // namespace tamelab
