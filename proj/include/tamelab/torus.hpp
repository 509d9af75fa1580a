#pragma once

// Exact arithmetic on the torus T^d = [0,1)^d.
//
// Every coordinate is an unsigned 128-bit word w standing for w / 2^128, so
// addition mod 1 is plain unsigned wrap-around and multiplication by an
// integer is exact modulo 1. Irrational rotation numbers are truncated to
// this resolution; the dynamics studied is the quantized one.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tamelab/error.hpp"

namespace tamelab {

using u128 = unsigned __int128;
using i128 = __int128;

/// A point of the circle [0,1) at resolution 2^-128.
class Frac {
public:
    constexpr Frac() = default;
    constexpr explicit Frac(u128 word) : word_(word) {}

    static constexpr Frac from_words(std::uint64_t hi, std::uint64_t lo) {
        return Frac((static_cast<u128>(hi) << 64) | lo);
    }

    /// Exact p/q for 0 <= p < q.
    static constexpr Frac ratio(std::uint64_t p, std::uint64_t q) {
        if (q == 0 || p >= q) throw RangeError("fraction p/q must satisfy 0 <= p < q");
        // long division of p * 2^128 by q, one bit at a time
        u128 rem = p;
        u128 word = 0;
        for (int bit = 127; bit >= 0; --bit) {
            rem <<= 1;
            if (rem >= q) {
                rem -= q;
                word |= static_cast<u128>(1) << bit;
            }
        }
        return Frac(word);
    }

    constexpr u128 word() const { return word_; }
    constexpr std::uint64_t hi() const { return static_cast<std::uint64_t>(word_ >> 64); }
    constexpr std::uint64_t lo() const { return static_cast<std::uint64_t>(word_); }
    constexpr bool is_zero() const { return word_ == 0; }

    /// 1 - x, with 0 mapped to itself.
    constexpr Frac complement() const { return Frac(-word_); }

    /// n * x mod 1, exact for every n.
    constexpr Frac times(std::int64_t n) const {
        return Frac(word_ * static_cast<u128>(static_cast<i128>(n)));
    }

    double to_double() const {
        return static_cast<double>(hi()) * 0x1p-64 + static_cast<double>(lo()) * 0x1p-128;
    }

    std::string hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out = "0x";
        for (int shift = 124; shift >= 0; shift -= 4)
            out.push_back(digits[static_cast<unsigned>(word_ >> shift) & 0xf]);
        return out;
    }

    friend constexpr Frac operator+(Frac a, Frac b) { return Frac(a.word_ + b.word_); }
    friend constexpr Frac operator-(Frac a, Frac b) { return Frac(a.word_ - b.word_); }
    friend constexpr bool operator==(Frac a, Frac b) = default;
    friend constexpr auto operator<=>(Frac a, Frac b) { return a.word_ <=> b.word_; }

private:
    u128 word_ = 0;
};

/// Fractional parts of common irrationals, truncated toward zero to 128 bits.
///
/// golden = (sqrt(5)-1)/2, sqrt2 = sqrt(2)-1 and sqrt3 = sqrt(3)-1 are
/// floor(isqrt(n * 2^256)) - 2^128 (halved for golden) in exact integer
/// arithmetic; pi = floor((pi-3) * 2^128) from a 600-bit evaluation. The
/// words coincide with the well-known hexadecimal expansions of these numbers.
namespace constants {
inline constexpr Frac golden = Frac::from_words(0x9e3779b97f4a7c15ULL, 0xf39cc0605cedc834ULL);
inline constexpr Frac sqrt2 = Frac::from_words(0x6a09e667f3bcc908ULL, 0xb2fb1366ea957d3eULL);
inline constexpr Frac sqrt3 = Frac::from_words(0xbb67ae8584caa73bULL, 0x25742d7078b83b89ULL);
inline constexpr Frac pi = Frac::from_words(0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL);
inline constexpr Frac half = Frac(static_cast<u128>(1) << 127);
inline constexpr Frac quarter = Frac(static_cast<u128>(1) << 126);
}  // namespace constants

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    if (s.empty()) throw ConfigError("empty integer in " + std::string(what));
    std::uint64_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw ConfigError("bad integer '" + std::string(s) + "' in " + std::string(what));
        if (v > (UINT64_MAX - 9) / 10) throw ConfigError("integer overflow in " + std::string(what));
        v = v * 10 + static_cast<unsigned>(ch - '0');
    }
    return v;
}

// floor(0.d1d2...dL * 2^128) by repeated doubling of the decimal digit string.
inline Frac decimal_fraction(std::string_view digits) {
    std::vector<std::uint8_t> d;
    d.reserve(digits.size());
    for (char ch : digits) {
        if (ch < '0' || ch > '9') throw ConfigError("bad decimal digit in '" + std::string(digits) + "'");
        d.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    u128 word = 0;
    for (int bit = 127; bit >= 0; --bit) {
        unsigned carry = 0;
        for (std::size_t i = d.size(); i-- > 0;) {
            const unsigned v = d[i] * 2u + carry;
            d[i] = static_cast<std::uint8_t>(v % 10);
            carry = v / 10;
        }
        if (carry) word |= static_cast<u128>(1) << bit;
    }
    return Frac(word);
}

}  // namespace detail

/// Parses a circle coordinate.
///
/// Accepted forms: a decimal "0.xyz" (truncated toward zero), "0", a ratio
/// "p/q", a 128-bit hex word "0x...", a named constant (golden, phi, sqrt2,
/// sqrt3, pi) and "1-<any of the above>".
inline Frac parse_frac(std::string_view text) {
    const std::string_view s = detail::trim(text);
    if (s.empty()) throw ConfigError("empty fraction");
    if (s.size() > 2 && s[0] == '1' && s[1] == '-') return parse_frac(s.substr(2)).complement();
    if (s == "golden" || s == "phi") return constants::golden;
    if (s == "sqrt2") return constants::sqrt2;
    if (s == "sqrt3") return constants::sqrt3;
    if (s == "pi") return constants::pi;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        const std::string_view hex = s.substr(2);
        if (hex.size() > 32) throw ConfigError("hex fraction longer than 128 bits: " + std::string(s));
        u128 w = 0;
        for (char ch : hex) {
            unsigned v;
            if (ch >= '0' && ch <= '9') v = static_cast<unsigned>(ch - '0');
            else if (ch >= 'a' && ch <= 'f') v = static_cast<unsigned>(ch - 'a' + 10);
            else if (ch >= 'A' && ch <= 'F') v = static_cast<unsigned>(ch - 'A' + 10);
            else throw ConfigError("bad hex fraction: " + std::string(s));
            w = (w << 4) | v;
        }
        // left-align so that "0x8" means 1/2
        w <<= 4 * (32 - hex.size());
        return Frac(w);
    }
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto p = detail::parse_u64(detail::trim(s.substr(0, slash)), s);
        const auto q = detail::parse_u64(detail::trim(s.substr(slash + 1)), s);
        if (q == 0 || p >= q) throw ConfigError("ratio outside [0,1): " + std::string(s));
        return Frac::ratio(p, q);
    }
    const auto dot = s.find('.');
    const std::string_view whole = s.substr(0, dot);
    if (!whole.empty() && whole != "0") throw ConfigError("fraction outside [0,1): " + std::string(s));
    if (dot == std::string_view::npos) return Frac();
    return detail::decimal_fraction(s.substr(dot + 1));
}

/// A point of T^d, 1 <= d <= 3.
class TorusPoint {
public:
    TorusPoint() = default;
    TorusPoint(std::initializer_list<Frac> coords) : TorusPoint(std::span<const Frac>(coords.begin(), coords.size())) {}
    explicit TorusPoint(std::span<const Frac> coords) {
        if (coords.empty() || coords.size() > 3) throw DimensionError("torus dimension must be 1..3");
        dim_ = coords.size();
        std::copy(coords.begin(), coords.end(), c_.begin());
    }

    static TorusPoint zero(std::size_t dim) {
        if (dim == 0 || dim > 3) throw DimensionError("torus dimension must be 1..3");
        TorusPoint p;
        p.dim_ = dim;
        return p;
    }

    std::size_t dim() const { return dim_; }
    Frac operator[](std::size_t i) const { return c_[i]; }
    std::span<const Frac> coords() const { return {c_.data(), dim_}; }

    friend TorusPoint operator+(const TorusPoint& a, const TorusPoint& b) {
        if (a.dim_ != b.dim_) throw DimensionError("torus points of different dimension");
        TorusPoint r = a;
        for (std::size_t i = 0; i < a.dim_; ++i) r.c_[i] = a.c_[i] + b.c_[i];
        return r;
    }

    friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
        return a.dim_ == b.dim_ && std::equal(a.c_.begin(), a.c_.begin() + a.dim_, b.c_.begin());
    }

private:
    std::array<Frac, 3> c_{};
    std::size_t dim_ = 1;
};

/// Rotation of T^d by the action of Z^k: generator i moves a point by alphas[i].
///
/// Sturmian codings use d = 1 and k generators; sphere codings use one
/// generator in T^d.
class RotationSpec {
public:
    explicit RotationSpec(std::vector<TorusPoint> generators) : generators_(std::move(generators)) {
        if (generators_.empty() || generators_.size() > 3) throw DimensionError("rotation rank must be 1..3");
        for (const auto& g : generators_) {
            if (g.dim() != generators_.front().dim()) throw DimensionError("rotation generators of mixed dimension");
            for (Frac c : g.coords())
                if (c.is_zero()) throw ArgumentError("rotation generator with a zero entry");
        }
    }

    static RotationSpec circle(std::initializer_list<Frac> alphas) {
        std::vector<TorusPoint> gens;
        for (Frac a : alphas) gens.push_back(TorusPoint{a});
        return RotationSpec(std::move(gens));
    }

    std::size_t rank() const { return generators_.size(); }
    std::size_t torus_dim() const { return generators_.front().dim(); }
    const std::vector<TorusPoint>& generators() const { return generators_; }

private:
    std::vector<TorusPoint> generators_;
};

inline constexpr std::int64_t kMaxRotationStep = std::int64_t{1} << 40;

/// p + n_1 alpha_1 + ... + n_k alpha_k, exact modulo 1.
inline TorusPoint rotate_add(const TorusPoint& p, const RotationSpec& spec, std::span<const std::int64_t> n) {
    if (n.size() != spec.rank()) throw DimensionError("rotation vector length differs from rotation rank");
    if (p.dim() != spec.torus_dim()) throw DimensionError("point and rotation live in different tori");
    std::array<Frac, 3> acc{};
    for (std::size_t d = 0; d < p.dim(); ++d) acc[d] = p[d];
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] <= -kMaxRotationStep || n[i] >= kMaxRotationStep)
            throw RangeError("rotation step outside (-2^40, 2^40)");
        const auto& g = spec.generators()[i];
        for (std::size_t d = 0; d < p.dim(); ++d) acc[d] = acc[d] + g[d].times(n[i]);
    }
    return TorusPoint(std::span<const Frac>(acc.data(), p.dim()));
}

/// Partition of the circle into half-open cells [c_i, c_{i+1}), c_0 = 0.
class CutPartition {
public:
    explicit CutPartition(std::vector<Frac> cuts) : cuts_(std::move(cuts)) {
        if (cuts_.size() < 2) throw ArgumentError("a partition needs at least one interior cut");
        if (cuts_.size() > 16) throw CapacityError("at most 16 cells");
        if (!cuts_.front().is_zero()) throw ArgumentError("first cut must be 0");
        for (std::size_t i = 1; i < cuts_.size(); ++i)
            if (!(cuts_[i - 1] < cuts_[i])) throw ArgumentError("cuts must be strictly increasing");
    }

    const std::vector<Frac>& cuts() const { return cuts_; }
    std::size_t interior_cuts() const { return cuts_.size() - 1; }
    unsigned alphabet_size() const { return static_cast<unsigned>(cuts_.size()); }

    /// Cell index i with c_i <= t < c_{i+1}.
    unsigned evaluate(Frac t) const {
        const auto it = std::upper_bound(cuts_.begin(), cuts_.end(), t);
        return static_cast<unsigned>(it - cuts_.begin() - 1);
    }

    /// True when t is within 2^-tolerance_bits of some cut (0 included), circularly.
    bool near_cut(Frac t, unsigned tolerance_bits = 88) const {
        const u128 tol = static_cast<u128>(1) << (128 - tolerance_bits);
        for (Frac c : cuts_) {
            const u128 up = (t - c).word();
            const u128 down = (c - t).word();
            if (up < tol || down < tol) return true;
        }
        return false;
    }

private:
    std::vector<Frac> cuts_;
};

inline unsigned evaluate_partition(Frac t, const CutPartition& part) { return part.evaluate(t); }

/// Closed ball in T^d (d = 2 or 3) under the min-image metric.
///
/// Membership is decided on coordinates reduced to 48 bits, so squared
/// distances are exact integers at resolution 2^-96.
class BallRegion {
public:
    static constexpr unsigned kQuantBits = 48;

    BallRegion(TorusPoint center, Frac radius) : center_(center), radius_(radius) {
        if (center_.dim() < 2) throw DimensionError("ball regions live in T^2 or T^3");
        if (radius_.is_zero() || !(radius_ < constants::half)) throw RangeError("ball radius must lie in (0, 1/2)");
    }

    const TorusPoint& center() const { return center_; }
    Frac radius() const { return radius_; }
    std::size_t dim() const { return center_.dim(); }

    bool contains(const TorusPoint& p) const {
        if (p.dim() != center_.dim()) throw DimensionError("point and ball of different dimension");
        constexpr unsigned drop = 128 - kQuantBits;
        constexpr std::uint64_t mask = (std::uint64_t{1} << kQuantBits) - 1;
        u128 dist2 = 0;
        for (std::size_t i = 0; i < p.dim(); ++i) {
            const auto a = static_cast<std::uint64_t>(p[i].word() >> drop);
            const auto c = static_cast<std::uint64_t>(center_[i].word() >> drop);
            std::uint64_t diff = (a - c) & mask;
            diff = std::min(diff, (mask + 1 - diff) & mask);
            dist2 += static_cast<u128>(diff) * diff;
        }
        const auto r = static_cast<std::uint64_t>(radius_.word() >> drop);
        return dist2 <= static_cast<u128>(r) * r;
    }

private:
    TorusPoint center_;
    Frac radius_;
};

inline bool ball_contains(const BallRegion& region, const TorusPoint& p) { return region.contains(p); }

}  // namespace tamelab
