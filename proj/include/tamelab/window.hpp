#pragma once

// Lattice boxes and materialized symbol blocks (SeqWindow) plus their text format.

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "tamelab/error.hpp"
#include "tamelab/support.hpp"

namespace tamelab {

/// A point of Z^k, k <= 3. Unused trailing axes stay zero so that plain
/// array comparison is the lexicographic order on the used axes.
using Coord = std::array<std::int64_t, 3>;

inline Coord coord1(std::int64_t x) { return {x, 0, 0}; }

inline Coord operator+(const Coord& a, const Coord& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Coord operator-(const Coord& a, const Coord& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

inline std::string format_coord(const Coord& c, std::size_t rank) {
    std::string out;
    for (std::size_t i = 0; i < rank; ++i) {
        if (i) out += ':';
        out += std::to_string(c[i]);
    }
    return out;
}

inline constexpr std::uint64_t kMaxWindowCells = std::uint64_t{1} << 28;

/// Axis-aligned box origin + [0, extents) in Z^rank.
struct Box {
    std::size_t rank = 1;
    Coord origin{};
    Coord extents{};

    static Box interval(std::int64_t begin, std::int64_t end) {
        if (end <= begin) throw ArgumentError("empty interval");
        return Box{1, {begin, 0, 0}, {end - begin, 0, 0}};
    }

    static Box make(std::span<const std::int64_t> origin, std::span<const std::int64_t> extents) {
        if (origin.size() != extents.size() || origin.empty() || origin.size() > 3)
            throw DimensionError("box origin/extents must have equal length 1..3");
        Box b;
        b.rank = origin.size();
        for (std::size_t i = 0; i < b.rank; ++i) {
            if (extents[i] <= 0) throw ArgumentError("box extents must be positive");
            b.origin[i] = origin[i];
            b.extents[i] = extents[i];
        }
        return b;
    }

    /// Cell count, saturating just above the window cap.
    std::uint64_t cells() const {
        std::uint64_t n = 1;
        for (std::size_t i = 0; i < rank; ++i) {
            const auto e = static_cast<std::uint64_t>(extents[i]);
            if (e > kMaxWindowCells || n * e > kMaxWindowCells) return kMaxWindowCells + 1;
            n *= e;
        }
        return n;
    }

    bool contains(const Coord& c) const {
        for (std::size_t i = 0; i < rank; ++i)
            if (c[i] < origin[i] || c[i] >= origin[i] + extents[i]) return false;
        return true;
    }

    /// Row-major strides, last axis fastest.
    Coord strides() const {
        Coord s{0, 0, 0};
        std::int64_t acc = 1;
        for (std::size_t i = rank; i-- > 0;) {
            s[i] = acc;
            acc *= extents[i];
        }
        return s;
    }

    /// The i-th cell in row-major order.
    Coord at(std::uint64_t index) const {
        Coord c = origin;
        for (std::size_t i = rank; i-- > 0;) {
            const auto e = static_cast<std::uint64_t>(extents[i]);
            c[i] += static_cast<std::int64_t>(index % e);
            index /= e;
        }
        return c;
    }

    friend bool operator==(const Box&, const Box&) = default;
};

/// A row-major block of symbols of a coding sequence over a box.
class SeqWindow {
public:
    SeqWindow(Box box, unsigned alphabet, std::vector<std::uint8_t> symbols, std::string source_digest,
              std::uint64_t near_boundary_hits = 0)
        : box_(box), alphabet_(alphabet), symbols_(std::move(symbols)), digest_(std::move(source_digest)),
          near_boundary_hits_(near_boundary_hits) {
        if (box_.cells() > kMaxWindowCells) throw CapacityError("window exceeds 2^28 cells");
        if (symbols_.size() != box_.cells()) throw ArgumentError("symbol count does not match the box");
        if (alphabet_ < 2 || alphabet_ > 16) throw ArgumentError("alphabet size must be 2..16");
        for (auto s : symbols_)
            if (s >= alphabet_) throw ArgumentError("symbol outside the alphabet");
        strides_ = box_.strides();
    }

    const Box& box() const { return box_; }
    std::size_t rank() const { return box_.rank; }
    unsigned alphabet() const { return alphabet_; }
    std::span<const std::uint8_t> symbols() const { return symbols_; }
    const std::string& source_digest() const { return digest_; }
    std::uint64_t near_boundary_hits() const { return near_boundary_hits_; }
    std::size_t size() const { return symbols_.size(); }
    const Coord& strides() const { return strides_; }

    /// Row-major flat index of an absolute coordinate (unchecked).
    std::int64_t flat(const Coord& c) const {
        std::int64_t idx = 0;
        for (std::size_t i = 0; i < box_.rank; ++i) idx += (c[i] - box_.origin[i]) * strides_[i];
        return idx;
    }

    /// Linear part of flat(): sum c_i * stride_i, without the origin.
    std::int64_t linear(const Coord& c) const {
        std::int64_t idx = 0;
        for (std::size_t i = 0; i < box_.rank; ++i) idx += c[i] * strides_[i];
        return idx;
    }

    std::uint8_t at(const Coord& c) const {
        if (!box_.contains(c)) throw RangeError("coordinate " + format_coord(c, rank()) + " outside window");
        return symbols_[static_cast<std::size_t>(flat(c))];
    }

    std::uint8_t at(std::int64_t n) const { return at(coord1(n)); }

private:
    Box box_;
    unsigned alphabet_;
    std::vector<std::uint8_t> symbols_;
    std::string digest_;
    std::uint64_t near_boundary_hits_;
    Coord strides_{};
};

namespace detail {

inline std::string join_axis(const Coord& c, std::size_t rank) {
    std::string out;
    for (std::size_t i = 0; i < rank; ++i) {
        if (i) out += ',';
        out += std::to_string(c[i]);
    }
    return out;
}

inline char symbol_char(std::uint8_t s) { return "0123456789abcdef"[s & 0xf]; }

inline int symbol_value(char ch) {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    return -1;
}

}  // namespace detail

/// Writes the TAMELAB-SEQ v1 text format: one header line, then symbols
/// row-major, 64 per line. Symbols 10..15 are written as a..f.
inline void write_seq(std::ostream& os, const SeqWindow& win) {
    const Box& b = win.box();
    os << "TAMELAB-SEQ v1 k=" << b.rank << " alphabet=" << win.alphabet() << " origin=" << detail::join_axis(b.origin, b.rank)
       << " extents=" << detail::join_axis(b.extents, b.rank) << '\n';
    const auto syms = win.symbols();
    std::string line;
    for (std::size_t i = 0; i < syms.size(); ++i) {
        line.push_back(detail::symbol_char(syms[i]));
        if (line.size() == 64 || i + 1 == syms.size()) {
            os << line << '\n';
            line.clear();
        }
    }
}

inline std::string seq_to_string(const SeqWindow& win) {
    std::ostringstream os;
    write_seq(os, win);
    return os.str();
}

/// Reads the TAMELAB-SEQ v1 format. The window's digest is the digest of the text read.
inline SeqWindow read_seq(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw IoError("empty sequence file");
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "TAMELAB-SEQ" || version != "v1") throw ConfigError("not a TAMELAB-SEQ v1 file");
    std::size_t k = 0;
    unsigned alphabet = 0;
    std::vector<std::int64_t> origin, extents;
    auto parse_list = [](const std::string& v) {
        std::vector<std::int64_t> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                out.push_back(std::stoll(item, &used));
                if (used != item.size()) throw ConfigError("bad integer in sequence header");
            } catch (const std::logic_error&) {
                throw ConfigError("bad integer in sequence header");
            }
        }
        return out;
    };
    std::string field;
    while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ConfigError("bad header field '" + field + "'");
        const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "k") k = static_cast<std::size_t>(std::stoul(value));
        else if (key == "alphabet") alphabet = static_cast<unsigned>(std::stoul(value));
        else if (key == "origin") origin = parse_list(value);
        else if (key == "extents") extents = parse_list(value);
        else throw ConfigError("unknown header field '" + key + "'");
    }
    if (origin.size() != k || extents.size() != k) throw ConfigError("header rank mismatch");
    const Box box = Box::make(origin, extents);
    if (box.cells() > kMaxWindowCells) throw CapacityError("window exceeds 2^28 cells");
    std::vector<std::uint8_t> syms;
    syms.reserve(box.cells());
    std::string line;
    std::string text = header + '\n';
    while (std::getline(is, line)) {
        text += line;
        text += '\n';
        for (char ch : line) {
            const int v = detail::symbol_value(ch);
            if (v < 0) throw ConfigError("bad symbol character in sequence file");
            syms.push_back(static_cast<std::uint8_t>(v));
        }
    }
    if (syms.size() != box.cells()) throw ConfigError("sequence file symbol count does not match extents");
    return SeqWindow(box, alphabet, std::move(syms), digest_of(text));
}

}  // namespace tamelab
