#pragma once

// Sequence sources: every concrete coding sequence / subshift generator behind
// one stateless abstraction that materializes symbol blocks on demand.

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tamelab/error.hpp"
#include "tamelab/support.hpp"
#include "tamelab/torus.hpp"
#include "tamelab/window.hpp"

namespace tamelab {

enum class SourceKind { sturmian, sphere, ip_indicator, morse, concat_nonnull, char_halfline, de_bruijn, explicit_file, random };

inline const char* kind_name(SourceKind k) {
    switch (k) {
        case SourceKind::sturmian: return "sturmian";
        case SourceKind::sphere: return "sphere";
        case SourceKind::ip_indicator: return "ip_indicator";
        case SourceKind::morse: return "morse";
        case SourceKind::concat_nonnull: return "concat_nonnull";
        case SourceKind::char_halfline: return "char_halfline";
        case SourceKind::de_bruijn: return "de_bruijn";
        case SourceKind::explicit_file: return "explicit";
        case SourceKind::random: return "random";
    }
    return "?";
}

struct SturmianParams {
    RotationSpec rotation;
    CutPartition partition;
    TorusPoint base;
};

struct SphereParams {
    BallRegion ball;
    RotationSpec rotation;
    TorusPoint base;
};

struct IpParams {
    std::int64_t base;
    int exponent_cap;
};

struct MorseParams {};
struct ConcatParams {};
struct HalflineParams {};

struct DeBruijnParams {
    int order;
    std::shared_ptr<const std::vector<std::uint8_t>> word;
};

struct ExplicitParams {
    std::shared_ptr<const SeqWindow> data;
};

/// Seeded pseudo-random symbols, hashed per coordinate (no state).
struct RandomParams {
    std::uint64_t seed;
    unsigned alphabet;
    std::size_t rank;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Greedy prefer-one de Bruijn word: start from 0^order, append 1 whenever the
/// new order-window is unseen, else 0, until both are seen. The first 2^order
/// symbols form one cyclic period.
inline std::vector<std::uint8_t> greedy_de_bruijn(int order) {
    const std::uint64_t span = std::uint64_t{1} << order;
    const std::uint64_t mask = span - 1;
    std::vector<std::uint64_t> seen((span + 63) / 64, 0);
    auto test_and_set = [&](std::uint64_t v) {
        const bool was = (seen[v >> 6] >> (v & 63)) & 1;
        seen[v >> 6] |= std::uint64_t{1} << (v & 63);
        return was;
    };
    std::vector<std::uint8_t> seq(static_cast<std::size_t>(order), 0);
    seq.reserve(span + static_cast<std::uint64_t>(order));
    std::uint64_t cur = 0;
    test_and_set(0);
    for (;;) {
        const std::uint64_t one = ((cur << 1) | 1) & mask;
        const std::uint64_t zero = (cur << 1) & mask;
        if (!test_and_set(one)) {
            seq.push_back(1);
            cur = one;
        } else if (!test_and_set(zero)) {
            seq.push_back(0);
            cur = zero;
        } else {
            break;
        }
    }
    seq.resize(span);
    return seq;
}

/// Symbol of the concatenation w = w_1 w_2 ... at position n (1-based; 0 for n <= 0).
inline std::uint8_t concat_symbol(std::int64_t n) {
    if (n <= 0) return 0;
    auto p = static_cast<std::uint64_t>(n - 1);
    for (std::uint64_t m = 1;; ++m) {
        const std::uint64_t u_len = m << (m + 1);  // 2^m slots of 2m symbols
        const std::uint64_t w_len = 2 * u_len;
        if (p < w_len) {
            if (p >= u_len) return 0;
            const std::uint64_t slot = p / (2 * m);
            const std::uint64_t r = p % (2 * m);
            if (r >= m) return 0;
            return static_cast<std::uint8_t>((slot >> (m - 1 - r)) & 1);
        }
        p -= w_len;
    }
}

inline bool ip_member(std::int64_t n, std::int64_t base, int cap) {
    if (n <= 0) return false;
    if (n % base != 0) return false;
    int position = 0;
    while (n > 0) {
        const std::int64_t digit = n % base;
        if (digit > 1) return false;
        if (digit == 1 && (position < 1 || position > cap)) return false;
        n /= base;
        ++position;
    }
    return true;
}

inline std::string frac_list(std::span<const Frac> fs) {
    std::string out = "[";
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i) out += ',';
        out += fs[i].hex();
    }
    return out + "]";
}

}  // namespace detail

/// A coding function m(f, z): Z^k -> {0, ..., alphabet-1}, evaluated pointwise.
class SeqSource {
public:
    using Params = std::variant<SturmianParams, SphereParams, IpParams, MorseParams, ConcatParams, HalflineParams,
                                DeBruijnParams, ExplicitParams, RandomParams>;

    static SeqSource sturmian(RotationSpec rotation, CutPartition partition, TorusPoint base) {
        if (rotation.torus_dim() != 1) throw DimensionError("Sturmian codings rotate the circle T^1");
        if (base.dim() != 1) throw DimensionError("Sturmian base point must lie on T^1");
        return SeqSource(SturmianParams{std::move(rotation), std::move(partition), base});
    }

    static SeqSource sphere(BallRegion ball, RotationSpec rotation, TorusPoint base) {
        if (rotation.rank() != 1) throw DimensionError("sphere codings use a single rotation");
        if (rotation.torus_dim() != ball.dim() || base.dim() != ball.dim())
            throw DimensionError("ball, rotation and base point must share the torus dimension");
        return SeqSource(SphereParams{ball, std::move(rotation), base});
    }

    static SeqSource ip_indicator(std::int64_t base, int exponent_cap) {
        if (base < 2) throw ArgumentError("IP base must be >= 2");
        if (exponent_cap < 1 || exponent_cap > 62) throw ArgumentError("IP exponent cap must be 1..62");
        return SeqSource(IpParams{base, exponent_cap});
    }

    static SeqSource morse() { return SeqSource(MorseParams{}); }
    static SeqSource concat_nonnull() { return SeqSource(ConcatParams{}); }
    static SeqSource char_halfline() { return SeqSource(HalflineParams{}); }

    static SeqSource de_bruijn(int order) {
        if (order < 1 || order > 24) throw RangeError("de Bruijn order must be 1..24");
        return SeqSource(DeBruijnParams{order, std::make_shared<const std::vector<std::uint8_t>>(detail::greedy_de_bruijn(order))});
    }

    static SeqSource explicit_window(SeqWindow data) {
        return SeqSource(ExplicitParams{std::make_shared<const SeqWindow>(std::move(data))});
    }

    static SeqSource random(std::uint64_t seed, unsigned alphabet = 2, std::size_t rank = 1) {
        if (alphabet < 2 || alphabet > 16) throw ArgumentError("alphabet size must be 2..16");
        if (rank < 1 || rank > 3) throw DimensionError("random source rank must be 1..3");
        return SeqSource(RandomParams{seed, alphabet, rank});
    }

    SourceKind kind() const { return static_cast<SourceKind>(params_.index()); }
    const Params& params() const { return params_; }

    unsigned alphabet_size() const {
        if (auto* p = std::get_if<SturmianParams>(&params_)) return p->partition.alphabet_size();
        if (auto* p = std::get_if<ExplicitParams>(&params_)) return p->data->alphabet();
        if (auto* p = std::get_if<RandomParams>(&params_)) return p->alphabet;
        return 2;
    }

    std::size_t group_rank() const {
        if (auto* p = std::get_if<SturmianParams>(&params_)) return p->rotation.rank();
        if (auto* p = std::get_if<ExplicitParams>(&params_)) return p->data->rank();
        if (auto* p = std::get_if<RandomParams>(&params_)) return p->rank;
        return 1;
    }

    /// Canonical parameter description; equal descriptions mean equal sequences.
    std::string describe() const {
        return std::visit(
            [](const auto& p) -> std::string {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, SturmianParams>) {
                    std::string s = "sturmian;alphas=[";
                    for (std::size_t i = 0; i < p.rotation.rank(); ++i) {
                        if (i) s += ',';
                        s += p.rotation.generators()[i][0].hex();
                    }
                    return s + "];cuts=" + detail::frac_list(p.partition.cuts()) + ";base=" + p.base[0].hex();
                } else if constexpr (std::is_same_v<T, SphereParams>) {
                    return "sphere;alpha=" + detail::frac_list(p.rotation.generators()[0].coords()) +
                           ";center=" + detail::frac_list(p.ball.center().coords()) + ";radius=" + p.ball.radius().hex() +
                           ";base=" + detail::frac_list(p.base.coords());
                } else if constexpr (std::is_same_v<T, IpParams>) {
                    return "ip_indicator;base=" + std::to_string(p.base) + ";cap=" + std::to_string(p.exponent_cap);
                } else if constexpr (std::is_same_v<T, MorseParams>) {
                    return "morse";
                } else if constexpr (std::is_same_v<T, ConcatParams>) {
                    return "concat_nonnull";
                } else if constexpr (std::is_same_v<T, HalflineParams>) {
                    return "char_halfline";
                } else if constexpr (std::is_same_v<T, DeBruijnParams>) {
                    return "de_bruijn;order=" + std::to_string(p.order);
                } else if constexpr (std::is_same_v<T, ExplicitParams>) {
                    return "explicit;digest=" + p.data->source_digest();
                } else {
                    return "random;seed=" + std::to_string(p.seed) + ";alphabet=" + std::to_string(p.alphabet) +
                           (p.rank > 1 ? ";rank=" + std::to_string(p.rank) : std::string());
                }
            },
            params_);
    }

    std::string digest() const { return digest_of(describe()); }

    /// Symbol at n in Z^k (k = group_rank()).
    std::uint8_t symbol_at(const Coord& n) const {
        return std::visit(
            [&](const auto& p) -> std::uint8_t {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, SturmianParams>) {
                    const TorusPoint q = rotate_add(p.base, p.rotation, std::span<const std::int64_t>(n.data(), p.rotation.rank()));
                    return static_cast<std::uint8_t>(p.partition.evaluate(q[0]));
                } else if constexpr (std::is_same_v<T, SphereParams>) {
                    const TorusPoint q = rotate_add(p.base, p.rotation, std::span<const std::int64_t>(n.data(), 1));
                    return p.ball.contains(q) ? 1 : 0;
                } else if constexpr (std::is_same_v<T, IpParams>) {
                    return detail::ip_member(n[0], p.base, p.exponent_cap) ? 1 : 0;
                } else if constexpr (std::is_same_v<T, MorseParams>) {
                    const std::int64_t m = n[0] >= 0 ? n[0] : -n[0] - 1;
                    return static_cast<std::uint8_t>(std::popcount(static_cast<std::uint64_t>(m)) & 1);
                } else if constexpr (std::is_same_v<T, ConcatParams>) {
                    return detail::concat_symbol(n[0]);
                } else if constexpr (std::is_same_v<T, HalflineParams>) {
                    return n[0] >= 0 ? 1 : 0;
                } else if constexpr (std::is_same_v<T, DeBruijnParams>) {
                    const auto period = static_cast<std::int64_t>(p.word->size());
                    std::int64_t r = n[0] % period;
                    if (r < 0) r += period;
                    return (*p.word)[static_cast<std::size_t>(r)];
                } else if constexpr (std::is_same_v<T, ExplicitParams>) {
                    return p.data->at(n);
                } else {
                    std::uint64_t h = p.seed;
                    for (std::size_t i = 0; i < 3; ++i) h = detail::splitmix64(h ^ static_cast<std::uint64_t>(n[i]));
                    return static_cast<std::uint8_t>(h % p.alphabet);
                }
            },
            params_);
    }

    std::uint8_t symbol_at(std::int64_t n) const { return symbol_at(coord1(n)); }

    /// Materializes the block over `window`. Bit-identical for every thread count.
    SeqWindow materialize(const Box& window, std::size_t threads = 1) const {
        if (window.rank != group_rank())
            throw DimensionError("window rank " + std::to_string(window.rank) + " differs from source rank " +
                                 std::to_string(group_rank()));
        const std::uint64_t cells = window.cells();
        if (cells > kMaxWindowCells) throw CapacityError("window exceeds 2^28 cells");
        if (auto* ip = std::get_if<IpParams>(&params_)) check_ip_range(*ip, window);
        std::vector<std::uint8_t> symbols(cells);
        const auto* sturm = std::get_if<SturmianParams>(&params_);
        std::vector<std::uint64_t> hits(chunk_count(cells, threads), 0);
        parallel_chunks(cells, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
            std::uint64_t local_hits = 0;
            for (std::size_t i = begin; i < end; ++i) {
                const Coord n = window.at(i);
                if (sturm) {
                    const TorusPoint q =
                        rotate_add(sturm->base, sturm->rotation, std::span<const std::int64_t>(n.data(), sturm->rotation.rank()));
                    symbols[i] = static_cast<std::uint8_t>(sturm->partition.evaluate(q[0]));
                    if (sturm->partition.near_cut(q[0])) ++local_hits;
                } else {
                    symbols[i] = symbol_at(n);
                }
            }
            hits[chunk] = local_hits;
        });
        std::uint64_t total_hits = 0;
        for (auto h : hits) total_hits += h;
        return SeqWindow(window, alphabet_size(), std::move(symbols), digest(), total_hits);
    }

private:
    explicit SeqSource(Params p) : params_(std::move(p)) {}

    static void check_ip_range(const IpParams& p, const Box& window) {
        // the cap must not truncate any IP element inside the window: base^(cap+1) > max |n|
        const std::int64_t far = std::max(std::abs(window.origin[0]), std::abs(window.origin[0] + window.extents[0] - 1));
        std::int64_t power = 1;
        for (int i = 0; i <= p.exponent_cap; ++i) {
            if (power > far / p.base) return;
            power *= p.base;
        }
        if (power <= far) throw RangeError("IP exponent cap too small for the window");
    }

    Params params_;
};

inline SeqWindow materialize(const SeqSource& source, const Box& window, std::size_t threads = 1) {
    return source.materialize(window, threads);
}

inline SeqWindow sturmian_code(const RotationSpec& spec, const CutPartition& part, const TorusPoint& z, const Box& window) {
    if (spec.rank() != window.rank) throw DimensionError("rotation rank differs from window rank");
    return SeqSource::sturmian(spec, part, z).materialize(window);
}

inline SeqWindow sphere_code(const BallRegion& region, const RotationSpec& spec, const TorusPoint& z, const Box& window) {
    return SeqSource::sphere(region, spec, z).materialize(window);
}

inline SeqWindow ip_indicator(std::int64_t base, int exponent_cap, const Box& window) {
    return SeqSource::ip_indicator(base, exponent_cap).materialize(window);
}

inline SeqWindow morse(const Box& window) { return SeqSource::morse().materialize(window); }
inline SeqWindow concat_nonnull(const Box& window) { return SeqSource::concat_nonnull().materialize(window); }
inline SeqWindow char_halfline(const Box& window) { return SeqSource::char_halfline().materialize(window); }
inline SeqWindow de_bruijn(int order, const Box& window) { return SeqSource::de_bruijn(order).materialize(window); }

/// Length of the block w_1 ... w_n of the concatenation example: sum of m * 2^(m+2).
inline std::int64_t concat_prefix_length(int n) {
    std::int64_t total = 0;
    for (int m = 1; m <= n; ++m) total += static_cast<std::int64_t>(m) << (m + 2);
    return total;
}

/// 1-based position in w of the first symbol of slot a_{n,i} (i = 1..2^n).
inline std::int64_t concat_slot_start(int n, std::int64_t i) {
    return concat_prefix_length(n - 1) + 1 + (i - 1) * 2 * n;
}

}  // namespace tamelab
