#pragma once

// Experiment configuration: sectioned "key = value" text with a canonical
// serialization (sections and keys sorted), so parse(to_string(c)) == c.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tamelab/error.hpp"
#include "tamelab/support.hpp"
#include "tamelab/torus.hpp"
#include "tamelab/window.hpp"

namespace tamelab {

class Config {
public:
    using Section = std::map<std::string, std::string>;

    static Config parse(std::string_view text) {
        Config c;
        std::istringstream is{std::string(text)};
        std::string raw, section;
        std::size_t line_no = 0;
        while (std::getline(is, raw)) {
            ++line_no;
            const auto hash = raw.find('#');
            const std::string_view line = detail::trim(std::string_view(raw).substr(0, hash));
            if (line.empty()) continue;
            const auto where = " (line " + std::to_string(line_no) + ")";
            if (line.front() == '[') {
                if (line.back() != ']' || line.size() < 3) throw ConfigError("bad section header" + where);
                section = std::string(detail::trim(line.substr(1, line.size() - 2)));
                c.sections_[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ConfigError("expected key = value" + where);
            if (section.empty()) throw ConfigError("key outside any section" + where);
            const std::string key(detail::trim(line.substr(0, eq)));
            if (key.empty()) throw ConfigError("empty key" + where);
            if (!c.sections_[section].emplace(key, std::string(detail::trim(line.substr(eq + 1)))).second)
                throw ConfigError("duplicate key '" + section + "." + key + "'" + where);
        }
        return c;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read config '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    std::string to_string() const {
        std::string out;
        for (const auto& [name, keys] : sections_) {
            if (!out.empty()) out += '\n';
            out += '[' + name + "]\n";
            for (const auto& [k, v] : keys) out += k + " = " + v + '\n';
        }
        return out;
    }

    std::string digest() const { return digest_of(to_string()); }

    bool has(const std::string& section, const std::string& key) const {
        auto it = sections_.find(section);
        return it != sections_.end() && it->second.count(key);
    }

    const std::string& get(const std::string& section, const std::string& key) const {
        auto it = sections_.find(section);
        if (it == sections_.end() || !it->second.count(key)) throw ConfigError("missing key '" + section + "." + key + "'");
        return it->second.at(key);
    }

    std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const {
        return has(section, key) ? get(section, key) : fallback;
    }

    void set(const std::string& section, const std::string& key, const std::string& value) { sections_[section][key] = value; }

    void erase(const std::string& section, const std::string& key) {
        auto it = sections_.find(section);
        if (it == sections_.end()) return;
        it->second.erase(key);
        if (it->second.empty()) sections_.erase(it);
    }

    /// "section.key=value"
    void apply_override(std::string_view assignment) {
        const auto eq = assignment.find('=');
        const auto dot = assignment.find('.');
        if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
            throw ConfigError("override must look like section.key=value: " + std::string(assignment));
        set(std::string(detail::trim(assignment.substr(0, dot))), std::string(detail::trim(assignment.substr(dot + 1, eq - dot - 1))),
            std::string(detail::trim(assignment.substr(eq + 1))));
    }

    const std::map<std::string, Section>& sections() const { return sections_; }

    /// Rejects keys outside `allowed` in `section`.
    void require_known(const std::string& section, const std::vector<std::string>& allowed) const {
        auto it = sections_.find(section);
        if (it == sections_.end()) return;
        for (const auto& [k, v] : it->second)
            if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
                throw ConfigError("unknown key '" + section + "." + k + "'");
    }

    friend bool operator==(const Config&, const Config&) = default;

private:
    std::map<std::string, Section> sections_;
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view text, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(sep, start), text.size());
        const auto item = trim(text.substr(start, end - start));
        if (!item.empty()) out.emplace_back(item);
        start = end + 1;
    }
    return out;
}

inline std::int64_t parse_i64(std::string_view s) {
    s = trim(s);
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw ConfigError("expected an integer");
    std::uint64_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw ConfigError("bad integer '" + std::string(s) + "'");
        if (v > (UINT64_MAX - 9) / 10) throw ConfigError("integer out of range");
        v = v * 10 + static_cast<unsigned>(ch - '0');
    }
    if (v > static_cast<std::uint64_t>(INT64_MAX)) throw ConfigError("integer out of range");
    return neg ? -static_cast<std::int64_t>(v) : static_cast<std::int64_t>(v);
}

inline double parse_double(std::string_view s) {
    const std::string str(trim(s));
    try {
        std::size_t used = 0;
        const double v = std::stod(str, &used);
        if (used != str.size()) throw ConfigError("bad number '" + str + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("bad number '" + str + "'");
    }
}

}  // namespace detail

/// "1,2,5..8" -> {1,2,5,6,7,8}; ranges are inclusive.
inline std::vector<std::int64_t> parse_int_list(std::string_view text) {
    std::vector<std::int64_t> out;
    for (const auto& item : detail::split_list(text)) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(detail::parse_i64(item));
            continue;
        }
        const auto lo = detail::parse_i64(std::string_view(item).substr(0, dots));
        const auto hi = detail::parse_i64(std::string_view(item).substr(dots + 2));
        if (hi < lo) throw ConfigError("empty range '" + item + "'");
        if (hi - lo > (std::int64_t{1} << 24)) throw CapacityError("range '" + item + "' too long");
        for (std::int64_t x = lo; x <= hi; ++x) out.push_back(x);
    }
    return out;
}

/// One coordinate "x" or "x:y[:z]".
inline Coord parse_coord(std::string_view text, std::size_t& rank) {
    const auto parts = detail::split_list(text, ':');
    if (parts.empty() || parts.size() > 3) throw ConfigError("bad coordinate '" + std::string(text) + "'");
    rank = parts.size();
    Coord c{0, 0, 0};
    for (std::size_t i = 0; i < parts.size(); ++i) c[i] = detail::parse_i64(parts[i]);
    return c;
}

/// Comma-separated coordinates; rank-1 items may be inclusive ranges "a..b".
inline std::vector<Coord> parse_coord_list(std::string_view text, std::size_t rank) {
    std::vector<Coord> out;
    for (const auto& item : detail::split_list(text)) {
        if (item.find(':') == std::string::npos) {
            if (rank != 1) throw DimensionError("coordinate '" + item + "' lacks axes for rank " + std::to_string(rank));
            for (auto x : parse_int_list(item)) out.push_back(coord1(x));
            continue;
        }
        std::size_t r = 0;
        out.push_back(parse_coord(item, r));
        if (r != rank) throw DimensionError("coordinate '" + item + "' has the wrong rank");
    }
    return out;
}

inline std::vector<Frac> parse_frac_list(std::string_view text) {
    std::vector<Frac> out;
    for (const auto& item : detail::split_list(text)) out.push_back(parse_frac(item));
    if (out.empty()) throw ConfigError("empty fraction list");
    return out;
}

inline std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : detail::split_list(text)) out.push_back(detail::parse_double(item));
    return out;
}

}  // namespace tamelab
