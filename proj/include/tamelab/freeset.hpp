#pragma once

// Interpolation (free) sets: a window is free on A at horizon H when the
// patterns x|_{A+t}, t ranging over the first H valid shifts, realize every
// symbol assignment on A.
//
// The search is level-wise. Every subset of a free set is free, so size-(s+1)
// candidates are joins of two size-s free sets sharing their first s-1
// coordinates whose remaining s-subsets are free as well. Shifts are first
// collapsed to representatives with distinct patterns on the whole pool; a
// candidate P + {c} is free iff every pattern class of P splits into all
// symbols at c.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tamelab/error.hpp"
#include "tamelab/language.hpp"
#include "tamelab/support.hpp"
#include "tamelab/window.hpp"

namespace tamelab {

/// "The window is free on `coords`" at a stated horizon, with one witness
/// shift per pattern code when coverage is full.
struct FreeSetCertificate {
    CoordSet coords;
    unsigned alphabet = 2;
    std::uint64_t horizon = 0;   // shifts sampled
    std::uint64_t observed = 0;  // distinct patterns seen
    std::uint64_t total = 0;     // m^|A|
    std::vector<std::pair<std::uint64_t, Coord>> witnesses;

    bool free() const { return observed == total; }
    std::size_t size() const { return coords.size(); }
    double coverage() const { return static_cast<double>(observed) / static_cast<double>(total); }

    /// Coverage as a reduced fraction "p/q".
    std::string coverage_fraction() const {
        const std::uint64_t g = std::gcd(observed, total);
        return std::to_string(observed / g) + "/" + std::to_string(total / g);
    }
};

inline void write_certificate(std::ostream& os, const FreeSetCertificate& cert) {
    os << "TAMELAB-FREESET v1\n";
    os << "coords: " << cert.coords.format() << "\n";
    os << "size: " << cert.size() << "\n";
    os << "horizon: " << cert.horizon << "\n";
    os << "coverage: " << cert.coverage_fraction() << "\n";
    os << "free: " << (cert.free() ? "yes" : "no") << "\n";
    for (const auto& [code, shift] : cert.witnesses)
        os << "witness: 0x" << std::hex << code << std::dec << " @ " << format_coord(shift, cert.coords.rank()) << "\n";
}

/// Re-reads the window at every witness shift and checks the claimed code.
inline bool verify_certificate(const SeqWindow& win, const FreeSetCertificate& cert) {
    if (cert.free() && cert.witnesses.size() != cert.total) return false;
    std::uint64_t prev = 0;
    bool first = true;
    for (const auto& [code, shift] : cert.witnesses) {
        if (!first && code <= prev) return false;
        first = false;
        prev = code;
        std::vector<std::uint8_t> pattern;
        for (const auto& c : cert.coords.coords()) {
            const Coord p = c + shift;
            if (!win.box().contains(p)) return false;
            pattern.push_back(win.at(p));
        }
        if (encode_pattern(pattern, win.alphabet()) != code) return false;
    }
    return true;
}

/// is_free over the requested shifts (default: every valid shift).
inline FreeSetCertificate is_free(const SeqWindow& win, const CoordSet& A, const ShiftSet& shifts = ShiftSet::all(),
                                  std::size_t threads = 1) {
    const PatternSet ps = patterns_on(win, A, shifts, true, threads);
    FreeSetCertificate cert;
    cert.coords = A;
    cert.alphabet = win.alphabet();
    cert.horizon = ps.shifts().size();
    cert.observed = ps.count();
    cert.total = ps.capacity();
    if (cert.free())
        for (const auto& w : ps.witnesses()) cert.witnesses.emplace_back(w.code, ps.shifts().at(w.shift_index));
    return cert;
}

struct FreeSearchBudget {
    std::vector<Coord> pool;          // candidate coordinates
    std::size_t rank = 1;
    std::size_t max_size = 24;
    std::uint64_t horizon = 0;        // first `horizon` shifts valid for the whole pool; 0 = all
    std::size_t beam = 0;             // 0 = exhaustive
    std::size_t coverage_probe_cap = 4096;
    std::size_t threads = 1;

    static FreeSearchBudget interval(std::int64_t begin, std::int64_t end, std::size_t max_size, std::uint64_t horizon = 0) {
        FreeSearchBudget b;
        for (std::int64_t x = begin; x < end; ++x) b.pool.push_back(coord1(x));
        b.max_size = max_size;
        b.horizon = horizon;
        return b;
    }

    static FreeSearchBudget of(std::span<const std::int64_t> xs, std::size_t max_size, std::uint64_t horizon = 0) {
        FreeSearchBudget b;
        for (auto x : xs) b.pool.push_back(coord1(x));
        b.max_size = max_size;
        b.horizon = horizon;
        return b;
    }
};

struct LevelProfile {
    std::size_t size = 0;
    std::uint64_t candidates = 0;       // candidates tested at this size
    std::uint64_t free_sets = 0;        // of which free
    std::uint64_t best_observed = 0;    // best pattern count among probed candidates
    std::uint64_t total = 0;            // m^size
    bool coverage_exact = true;         // false when the probe saw only a prefix of the candidates
    std::optional<FreeSetCertificate> first;    // lexicographically smallest free set
    std::optional<FreeSetCertificate> densest;  // smallest diameter, then lexicographic

    double best_coverage() const { return total ? static_cast<double>(best_observed) / static_cast<double>(total) : 0.0; }
};

struct MaxFreeResult {
    std::optional<FreeSetCertificate> best;  // largest size, lexicographically smallest
    std::vector<LevelProfile> profile;       // one entry per size tried, starting at 1
    std::uint64_t horizon = 0;
    std::uint64_t representatives = 0;
    bool beam_limited = false;
    std::vector<std::string> warnings;

    std::size_t max_size() const { return best ? best->size() : 0; }
};

namespace detail {

/// Sampled shifts collapsed to representatives with distinct pool patterns,
/// stored column-wise: columns[j][r] is the symbol at pool[j] for rep r.
class ShiftTable {
public:
    static constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 28;

    ShiftTable(const SeqWindow& win, const FreeSearchBudget& budget) : alphabet_(win.alphabet()), rank_(win.rank()) {
        if (budget.pool.empty()) throw ArgumentError("empty candidate pool");
        if (budget.rank != win.rank()) throw DimensionError("pool rank differs from window rank");
        const CoordSet pool(win.rank(), budget.pool);
        pool_ = pool.coords();
        shifts_ = std::make_shared<const ShiftRange>(
            resolve_shifts(win, pool.min_corner(), pool.max_corner(), ShiftSet::all(static_cast<std::size_t>(budget.horizon))));

        const std::size_t P = pool_.size();
        std::vector<std::int64_t> offsets;
        for (const auto& c : pool_) offsets.push_back(win.linear(c));
        const auto syms = win.symbols();
        const bool fast1d = win.rank() == 1;
        const std::int64_t base0 = win.flat(shifts_->at(0));

        std::vector<std::uint8_t> rows;  // representative patterns, row-major
        std::vector<std::uint8_t> scratch(P);
        std::unordered_map<std::uint64_t, std::uint32_t> head;
        std::vector<std::uint32_t> chain;
        const std::uint64_t n = shifts_->size();
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::int64_t base = fast1d ? base0 + static_cast<std::int64_t>(i) : win.flat(shifts_->at(i));
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (std::size_t j = 0; j < P; ++j) {
                const std::uint8_t v = syms[static_cast<std::size_t>(base + offsets[j])];
                scratch[j] = v;
                h = (h ^ v) * 0x100000001b3ULL;
            }
            auto it = head.find(h);
            std::uint32_t r = it == head.end() ? UINT32_MAX : it->second;
            while (r != UINT32_MAX && !std::equal(scratch.begin(), scratch.end(), rows.begin() + static_cast<std::ptrdiff_t>(r) * P))
                r = chain[r];
            if (r != UINT32_MAX) continue;
            const auto id = static_cast<std::uint32_t>(rep_first_.size());
            if (static_cast<std::uint64_t>(id + 1) * P > kMaxCells) throw CapacityError("shift table exceeds 2^28 cells");
            chain.push_back(it == head.end() ? UINT32_MAX : it->second);
            head[h] = id;
            rep_first_.push_back(i);
            rows.insert(rows.end(), scratch.begin(), scratch.end());
        }
        reps_ = rep_first_.size();
        columns_.assign(P, std::vector<std::uint8_t>(reps_));
        for (std::size_t r = 0; r < reps_; ++r)
            for (std::size_t j = 0; j < P; ++j) columns_[j][r] = rows[r * P + j];
        words_ = (reps_ + 63) / 64;
        if (alphabet_ == 2 && P <= 64) {
            masks_.assign(reps_, 0);
            for (std::size_t r = 0; r < reps_; ++r)
                for (std::size_t j = 0; j < P; ++j) masks_[r] |= static_cast<std::uint64_t>(rows[r * P + j]) << j;
        }
    }

    unsigned alphabet() const { return alphabet_; }
    std::size_t rank() const { return rank_; }
    std::size_t reps() const { return reps_; }
    std::size_t words() const { return words_; }
    std::uint64_t horizon() const { return shifts_->size(); }
    const std::vector<Coord>& pool() const { return pool_; }
    const std::vector<std::uint8_t>& column(std::size_t j) const { return columns_[j]; }

    /// Binary pools of at most 64 coordinates: masks()[r] bit j = symbol at pool[j].
    bool packed() const { return !masks_.empty(); }
    const std::vector<std::uint64_t>& masks() const { return masks_; }

    /// Bitset over representatives of symbol 1 at pool[j] (binary alphabet only).
    const std::vector<std::uint64_t>& ones(std::size_t j) const {
        std::call_once(ones_once_, [&] {
            ones_.assign(columns_.size(), std::vector<std::uint64_t>(words_, 0));
            for (std::size_t c = 0; c < columns_.size(); ++c)
                for (std::size_t r = 0; r < reps_; ++r)
                    if (columns_[c][r]) ones_[c][r >> 6] |= std::uint64_t{1} << (r & 63);
        });
        return ones_[j];
    }

    std::uint64_t code(std::span<const std::uint32_t> members, std::size_t r) const {
        std::uint64_t c = 0;
        for (std::size_t i = members.size(); i-- > 0;) c = c * alphabet_ + columns_[members[i]][r];
        return c;
    }

    std::uint64_t count_patterns(std::span<const std::uint32_t> members) const {
        const std::uint64_t space = pattern_space(alphabet_, members.size());
        std::vector<std::uint64_t> bits((space + 63) / 64, 0);
        std::uint64_t count = 0;
        for (std::size_t r = 0; r < reps_; ++r) {
            const auto c = code(members, r);
            auto& w = bits[c >> 6];
            const auto bit = std::uint64_t{1} << (c & 63);
            if (!(w & bit)) {
                w |= bit;
                ++count;
            }
        }
        return count;
    }

    FreeSetCertificate certify(std::span<const std::uint32_t> members) const {
        FreeSetCertificate cert;
        std::vector<Coord> cs;
        for (auto j : members) cs.push_back(pool_[j]);
        cert.coords = CoordSet(rank_, std::move(cs));
        cert.alphabet = alphabet_;
        cert.horizon = horizon();
        cert.total = pattern_space(alphabet_, members.size());
        std::unordered_map<std::uint64_t, std::uint64_t> first;
        for (std::size_t r = 0; r < reps_; ++r) first.emplace(code(members, r), rep_first_[r]);
        cert.observed = first.size();
        if (cert.free()) {
            for (const auto& [c, idx] : first) cert.witnesses.emplace_back(c, shifts_->at(idx));
            std::sort(cert.witnesses.begin(), cert.witnesses.end());
        }
        return cert;
    }

    std::int64_t diameter(std::span<const std::uint32_t> members) const {
        Coord lo = pool_[members[0]], hi = lo;
        for (auto j : members)
            for (std::size_t i = 0; i < rank_; ++i) {
                lo[i] = std::min(lo[i], pool_[j][i]);
                hi[i] = std::max(hi[i], pool_[j][i]);
            }
        std::int64_t d = 0;
        for (std::size_t i = 0; i < rank_; ++i) d += hi[i] - lo[i];
        return d;
    }

private:
    unsigned alphabet_;
    std::size_t rank_;
    std::vector<Coord> pool_;
    std::shared_ptr<const ShiftRange> shifts_;
    std::vector<std::uint64_t> rep_first_;
    std::size_t reps_ = 0;
    std::size_t words_ = 0;
    std::vector<std::vector<std::uint8_t>> columns_;
    std::vector<std::uint64_t> masks_;
    mutable std::once_flag ones_once_;
    mutable std::vector<std::vector<std::uint64_t>> ones_;
};

#if defined(__x86_64__) && defined(__GNUC__)
__attribute__((target("bmi2"))) inline std::uint64_t pext_hw(std::uint64_t word, std::uint64_t select) {
    return __builtin_ia32_pext_di(word, select);
}
#endif

inline std::uint64_t pext_sw(std::uint64_t word, std::uint64_t select) {
    std::uint64_t out = 0, bit = 1;
    while (select) {
        const std::uint64_t low = select & (~select + 1);
        if (word & low) out |= bit;
        bit <<= 1;
        select ^= low;
    }
    return out;
}

/// Free test for binary pools of at most 64 coordinates: scan the packed
/// representatives until every code of the set has been seen.
class PackedScan {
public:
    explicit PackedScan(const ShiftTable& table) : masks_(table.masks()) {
#if defined(__x86_64__) && defined(__GNUC__)
        hw_ = __builtin_cpu_supports("bmi2");
#endif
    }

    bool free(std::span<const std::uint32_t> members) {
        std::uint64_t select = 0;
        for (auto j : members) select |= std::uint64_t{1} << j;
        const std::size_t space = std::size_t{1} << members.size();
        if (stamp_.size() < space) stamp_.assign(space, 0);
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
#if defined(__x86_64__) && defined(__GNUC__)
        if (hw_) return scan(select, space, [](std::uint64_t w, std::uint64_t m) { return pext_hw(w, m); });
#endif
        return scan(select, space, pext_sw);
    }

private:
    template <class Gather>
    bool scan(std::uint64_t select, std::size_t space, Gather gather) {
        std::size_t seen = 0;
        for (auto w : masks_) {
            auto& st = stamp_[gather(w, select)];
            if (st != epoch_) {
                st = epoch_;
                if (++seen == space) return true;
            }
        }
        return false;
    }

    const std::vector<std::uint64_t>& masks_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    bool hw_ = false;
};

/// Pattern classes of the representatives for one free set, with a test
/// for whether adding one more pool coordinate keeps the set free.
class Cells {
public:
    static constexpr std::size_t kMaxBitsetWords = std::size_t{1} << 16;

    Cells(const ShiftTable& table, std::span<const std::uint32_t> members) : table_(table) {
        const std::uint64_t space = pattern_space(table.alphabet(), members.size());
        const std::size_t reps = table.reps();
        std::vector<std::uint32_t> codes(reps);
        for (std::size_t r = 0; r < reps; ++r) codes[r] = static_cast<std::uint32_t>(table.code(members, r));
        start_.assign(space + 1, 0);
        for (auto c : codes) ++start_[c + 1];
        for (std::size_t i = 1; i < start_.size(); ++i) start_[i] += start_[i - 1];
        order_.resize(reps);
        std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t r = 0; r < reps; ++r) order_[fill[codes[r]]++] = static_cast<std::uint32_t>(r);
        // smallest classes first: they are the likeliest to fail to split
        by_size_.resize(space);
        std::iota(by_size_.begin(), by_size_.end(), 0u);
        std::stable_sort(by_size_.begin(), by_size_.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return size(a) < size(b); });
        if (table.alphabet() == 2 && space * table.words() <= kMaxBitsetWords) {
            const std::size_t W = table.words();
            bits_.assign(space * W, 0);
            for (std::size_t r = 0; r < reps; ++r) bits_[codes[r] * W + (r >> 6)] |= std::uint64_t{1} << (r & 63);
        }
    }

    std::size_t size(std::uint32_t cell) const { return start_[cell + 1] - start_[cell]; }

    bool extends_freely(std::size_t column) const {
        if (!bits_.empty()) return extends_bitset(column);
        const auto& col = table_.column(column);
        const unsigned full = (1u << table_.alphabet()) - 1;
        for (auto cell : by_size_) {
            unsigned seen = 0;
            for (std::size_t i = start_[cell]; i < start_[cell + 1] && seen != full; ++i) seen |= 1u << col[order_[i]];
            if (seen != full) return false;
        }
        return true;
    }

private:
    bool extends_bitset(std::size_t column) const {
        const auto& ones = table_.ones(column);
        const std::size_t W = table_.words();
        for (auto cell : by_size_) {
            const std::uint64_t* c = bits_.data() + static_cast<std::size_t>(cell) * W;
            bool has_one = false, has_zero = false;
            for (std::size_t w = 0; w < W && !(has_one && has_zero); ++w) {
                has_one |= (c[w] & ones[w]) != 0;
                has_zero |= (c[w] & ~ones[w]) != 0;
            }
            if (!(has_one && has_zero)) return false;
        }
        return true;
    }

    const ShiftTable& table_;
    std::vector<std::uint32_t> start_;
    std::vector<std::uint32_t> order_;
    std::vector<std::uint32_t> by_size_;
    std::vector<std::uint64_t> bits_;
};

/// Free sets of one size, flat: set i occupies members[i*size, (i+1)*size).
struct Level {
    std::size_t size = 0;
    std::vector<std::uint32_t> members;

    std::size_t count() const { return size ? members.size() / size : 0; }
    std::span<const std::uint32_t> set(std::size_t i) const { return {members.data() + i * size, size}; }
};

/// Membership test for the apriori check: all s-subsets must be free.
/// Looks sets up in the full (unpruned) level, which is lexicographically sorted.
class LevelIndex {
public:
    /// With `complete` false the level may miss free sets (beam), so the check is skipped.
    LevelIndex(const Level& level, std::size_t pool_size, bool complete = true)
        : level_(level), pool_(pool_size), complete_(complete) {
        if (complete_ && level.size == 2 && pool_size * pool_size <= (std::size_t{1} << 26)) {
            pairs_.assign((pool_size * pool_size + 63) / 64, 0);
            for (std::size_t i = 0; i < level.count(); ++i) {
                const auto s = level.set(i);
                const std::size_t k = s[0] * pool_size + s[1];
                pairs_[k >> 6] |= std::uint64_t{1} << (k & 63);
            }
        }
    }

    bool contains(std::span<const std::uint32_t> set) const {
        std::size_t lo = 0, hi = level_.count();
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const auto m = level_.set(mid);
            if (std::lexicographical_compare(m.begin(), m.end(), set.begin(), set.end())) lo = mid + 1;
            else hi = mid;
        }
        return lo < level_.count() && std::equal(set.begin(), set.end(), level_.set(lo).begin());
    }

    /// Candidate = prefix + {b, c}; the subsets missing one prefix element must be free.
    bool subsets_free(std::span<const std::uint32_t> candidate, std::vector<std::uint32_t>& scratch) const {
        const std::size_t n = candidate.size();  // = level size + 1
        if (!complete_ || level_.size < 2) return true;
        if (!pairs_.empty()) {
            const std::size_t k = candidate[1] * pool_ + candidate[2];
            return (pairs_[k >> 6] >> (k & 63)) & 1;
        }
        for (std::size_t drop = 0; drop + 2 < n; ++drop) {
            scratch.clear();
            for (std::size_t i = 0; i < n; ++i)
                if (i != drop) scratch.push_back(candidate[i]);
            if (!contains(scratch)) return false;
        }
        return true;
    }

private:
    const Level& level_;
    std::size_t pool_;
    bool complete_;
    std::vector<std::uint64_t> pairs_;
};

/// Calls visit(i, c, candidate) for each candidate joined from level sets,
/// in lexicographic order, for sets i in [begin, end). visit returns false to stop.
template <class Visit>
void for_each_candidate(const Level& level, const LevelIndex& index, std::size_t begin, std::size_t end, Visit&& visit) {
    const std::size_t s = level.size;
    std::vector<std::uint32_t> candidate(s + 1), scratch;
    for (std::size_t i = begin; i < end; ++i) {
        const auto a = level.set(i);
        for (std::size_t j = i + 1; j < level.count(); ++j) {
            const auto b = level.set(j);
            if (!std::equal(a.begin(), a.end() - 1, b.begin())) break;
            std::copy(a.begin(), a.end(), candidate.begin());
            candidate[s] = b[s - 1];
            if (!index.subsets_free(candidate, scratch)) continue;
            if (!visit(i, b[s - 1], std::span<const std::uint32_t>(candidate))) return;
        }
    }
}

}  // namespace detail

/// Largest free subset of the pool at the budget's horizon, plus a per-size
/// profile. Exhaustive unless a beam is set; ties go to the
/// lexicographically smallest coordinate list.
inline MaxFreeResult max_free_set(const SeqWindow& win, const FreeSearchBudget& budget) {
    // above this many representatives a direct scan beats building pattern classes
    constexpr std::size_t kScanThreshold = 4096;
    const detail::ShiftTable table(win, budget);
    const unsigned m = table.alphabet();
    const std::size_t P = table.pool().size();

    MaxFreeResult result;
    result.horizon = table.horizon();
    result.representatives = table.reps();

    std::size_t cap = std::min(budget.max_size, P);
    while (cap > 0 && pattern_space(m, cap) == 0) --cap;
    if (cap == 0) return result;
    if (pattern_space(m, cap) > table.horizon())
        result.warnings.push_back("pattern space m^" + std::to_string(cap) + " exceeds the " + std::to_string(table.horizon()) +
                                  " sampled shifts");

    // level 1: coordinates showing every symbol
    detail::Level level{1, {}};
    {
        LevelProfile prof;
        prof.size = 1;
        prof.total = m;
        prof.candidates = P;
        for (std::uint32_t j = 0; j < P; ++j) {
            std::uint32_t seen = 0;
            for (auto v : table.column(j)) seen |= 1u << v;
            const auto observed = static_cast<std::uint64_t>(std::popcount(seen));
            prof.best_observed = std::max(prof.best_observed, observed);
            if (observed == m) level.members.push_back(j);
        }
        prof.free_sets = level.count();
        result.profile.push_back(std::move(prof));
    }

    // Records the level's certificates and returns the sets kept for joining.
    auto finish_level = [&](const detail::Level& lv) {
        LevelProfile& prof = result.profile.back();
        if (lv.count() == 0) return lv;
        prof.best_observed = prof.total;
        prof.first = table.certify(lv.set(0));
        std::vector<std::uint32_t> idx(lv.count());
        std::iota(idx.begin(), idx.end(), 0u);
        std::vector<std::int64_t> diam(lv.count());
        for (std::size_t i = 0; i < lv.count(); ++i) diam[i] = table.diameter(lv.set(i));
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return diam[a] < diam[b]; });
        prof.densest = table.certify(lv.set(idx[0]));
        result.best = prof.first;
        if (budget.beam == 0 || lv.count() <= budget.beam) return lv;
        // the beam keeps the lexicographically first sets: their joins reach the largest sizes
        result.beam_limited = true;
        detail::Level kept{lv.size, {}};
        kept.members.assign(lv.members.begin(), lv.members.begin() + static_cast<std::ptrdiff_t>(budget.beam * lv.size));
        return kept;
    };

    detail::Level full = level;
    level = finish_level(full);
    const bool scan_mode = table.packed() && table.reps() > kScanThreshold;

    for (std::size_t s = 1; s < cap && level.count() > 0; ++s) {
        const detail::LevelIndex index(full, P, !result.beam_limited);
        const std::size_t n = level.count();
        const std::size_t chunks = chunk_count(n, budget.threads);
        std::vector<std::vector<std::uint32_t>> found(chunks);
        std::vector<std::uint64_t> tested(chunks, 0);
        parallel_chunks(n, budget.threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
            std::size_t current = SIZE_MAX;
            std::optional<detail::Cells> cells;
            std::optional<detail::PackedScan> scan;
            if (scan_mode) scan.emplace(table);
            detail::for_each_candidate(level, index, begin, end, [&](std::size_t i, std::uint32_t c, auto candidate) {
                ++tested[chunk];
                bool ok;
                if (scan_mode) {
                    ok = scan->free(candidate);
                } else {
                    if (i != current) {
                        cells.reset();
                        cells.emplace(table, level.set(i));
                        current = i;
                    }
                    ok = cells->extends_freely(c);
                }
                if (ok) found[chunk].insert(found[chunk].end(), candidate.begin(), candidate.end());
                return true;
            });
        });
        detail::Level next{s + 1, {}};
        LevelProfile prof;
        prof.size = s + 1;
        prof.total = pattern_space(m, s + 1);
        for (std::size_t c = 0; c < chunks; ++c) {
            next.members.insert(next.members.end(), found[c].begin(), found[c].end());
            prof.candidates += tested[c];
        }
        prof.free_sets = next.count();
        if (next.count() == 0 && prof.candidates > 0) {
            // no free set: report the best coverage over the first candidates
            std::uint64_t probed = 0;
            detail::for_each_candidate(level, index, 0, n, [&](std::size_t, std::uint32_t, auto candidate) {
                prof.best_observed = std::max(prof.best_observed, table.count_patterns(candidate));
                return ++probed < budget.coverage_probe_cap;
            });
            prof.coverage_exact = probed == prof.candidates;
        }
        result.profile.push_back(std::move(prof));
        full = std::move(next);
        level = finish_level(full);
    }
    return result;
}

struct DensityPoint {
    std::size_t size;
    std::int64_t diameter;
    double ratio;  // size / (diameter + 1)
    CoordSet coords;
};

/// Densest certified free set per size: the finite-scale trace of positive-density freeness.
inline std::vector<DensityPoint> free_density_profile(const MaxFreeResult& result) {
    std::vector<DensityPoint> out;
    for (const auto& lv : result.profile) {
        if (!lv.densest) continue;
        const auto d = lv.densest->coords.diameter_sum();
        out.push_back({lv.size, d, static_cast<double>(lv.size) / static_cast<double>(d + 1), lv.densest->coords});
    }
    return out;
}

inline std::vector<DensityPoint> free_density_profile(const SeqWindow& win, const FreeSearchBudget& budget) {
    return free_density_profile(max_free_set(win, budget));
}

struct OracleResult {
    std::vector<CoordSet> free_sets;
    std::size_t max_size = 0;
};

/// Enumerates every subset of a tiny pool and tests coverage directly.
/// Uses the same shift semantics as max_free_set: the first `horizon` shifts
/// valid for the whole pool.
inline OracleResult brute_force_free_oracle(const SeqWindow& win, const std::vector<Coord>& pool, std::size_t max_size,
                                            std::uint64_t horizon) {
    if (max_size > 4) throw ArgumentError("oracle max_size is capped at 4");
    if (horizon == 0 || horizon > 64) throw ArgumentError("oracle horizon must be 1..64");
    if (pool.empty() || pool.size() > 16) throw ArgumentError("oracle pool must have 1..16 coordinates");
    const CoordSet whole(win.rank(), pool);
    const ShiftRange range = resolve_shifts(win, whole.min_corner(), whole.max_corner(), ShiftSet::all(horizon));
    std::vector<Coord> shifts;
    for (std::uint64_t i = 0; i < range.size(); ++i) shifts.push_back(range.at(i));
    const ShiftSet sample = ShiftSet::explicit_list(shifts);

    OracleResult out;
    const std::size_t P = whole.size();
    for (std::uint32_t mask = 1; mask < (1u << P); ++mask) {
        const auto s = static_cast<std::size_t>(std::popcount(mask));
        if (s > max_size) continue;
        std::vector<Coord> cs;
        for (std::size_t j = 0; j < P; ++j)
            if (mask & (1u << j)) cs.push_back(whole[j]);
        const CoordSet A(win.rank(), std::move(cs));
        const PatternSet ps = patterns_on(win, A, sample);
        if (ps.count() == ps.capacity()) {
            out.max_size = std::max(out.max_size, s);
            out.free_sets.push_back(A);
        }
    }
    std::sort(out.free_sets.begin(), out.free_sets.end());
    return out;
}

}  // namespace tamelab
