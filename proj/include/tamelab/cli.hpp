#pragma once

// Experiment harness: config -> source/window/analysis, command dispatch and
// output files. Output bytes depend only on the config, never on the thread
// count; wall time goes to timing.txt, which the manifest does not list.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tamelab/classify.hpp"
#include "tamelab/config.hpp"
#include "tamelab/entropy.hpp"
#include "tamelab/famtools.hpp"
#include "tamelab/freeset.hpp"
#include "tamelab/generators.hpp"
#include "tamelab/language.hpp"

namespace tamelab {

inline constexpr const char* kVersion = "tamelab 0.1.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_config = 2,
    exit_capacity = 3,
    exit_io = 4,
    exit_argument = 5,
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return exit_config;
    if (dynamic_cast<const CapacityError*>(&e)) return exit_capacity;
    if (dynamic_cast<const IoError*>(&e)) return exit_io;
    if (dynamic_cast<const Error*>(&e)) return exit_argument;
    return exit_internal;
}

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"generate", "entropy", "seqentropy", "complexity", "freeset", "project", "family", "classify"};
    return names;
}

// clang-format off
inline const std::map<std::string, std::string>& preset_texts() {
    static const std::map<std::string, std::string> presets{
        {"fibonacci",
         "[source]\nkind = sturmian\nalphas = golden\ncuts = 0, 1-golden\nbase = 0\n"
         "[window]\norigin = 0\nextents = 100000\n"
         "[analysis]\nn_max = 30\npool = 0..999\nmax_size = 11\ncoords = 1,2,4,8,16,32,64,128,256,512\n"
         "family = orbit\nshifts = 0..63\npoints = 0..9999\na = 0.25\nb = 0.75\nmax_len = 6\n"},
        {"halfline",
         "[source]\nkind = char_halfline\n"
         "[window]\norigin = -1000\nextents = 2000\n"
         "[analysis]\nn_max = 30\nentropy_n_max = 256\npool = -8..7\nmax_size = 4\ncoords = 0,2,4,6,8,10,12,14\n"},
        {"debruijn16",
         "[source]\nkind = de_bruijn\norder = 16\n"
         "[window]\norigin = 0\nextents = 131072\n"
         "[analysis]\nn_max = 16\nentropy_n_max = 16\npool = 0..15\nmax_size = 16\ncoords = 0..15\n"},
        {"ip10",
         "[source]\nkind = ip_indicator\nradix = 10\ncap = 6\n"
         "[window]\norigin = -1000000\nextents = 2000000\n"
         "[analysis]\nn_max = 16\npool = 10,100,1000,10000\nmax_size = 4\ncoords = 10,100,1000\nsub = 10,100\n"},
        {"concat12",
         "[source]\nkind = concat_nonnull\n"
         "[window]\norigin = 1\nextents = 360456\n"
         "[analysis]\nn_max = 32\nentropy_n_max = 12\npool = 163849..163860\nmax_size = 12\ncoords = 163849..163860\n"},
        {"concat10",
         "[source]\nkind = concat_nonnull\n"
         "[window]\norigin = 1\nextents = 73736\n"
         "[analysis]\nn_max = 24\nentropy_n_max = 10\npool = 0..15\nmax_size = 10\n"},
        {"morse",
         "[source]\nkind = morse\n"
         "[window]\norigin = 0\nextents = 65536\n"
         "[analysis]\nn_max = 32\npool = 0..31\nmax_size = 6\n"},
        {"sphere2",
         "[source]\nkind = sphere\nalpha = sqrt2, sqrt3\ncenter = 0.5, 0.5\nradius = 0.25\nbase = 0, 0\n"
         "[window]\norigin = 0\nextents = 65536\n"
         "[analysis]\nn_max = 24\npool = 0..63\nmax_size = 8\n"},
        {"sturmian2d",
         "[source]\nkind = sturmian\nalphas = golden, sqrt2\ncuts = 0, 1-golden\nbase = 0\n"
         "[window]\norigin = 0:0\nextents = 256:256\n"
         "[analysis]\nn_max = 4\nentropy_n_max = 4\nbrackets = 2,3,4\npool = 0:0,0:1,0:2,1:0,1:1,1:2,2:0,2:1,2:2\nmax_size = 6\n"
         "prefix_sizes = 1,2,4,8\n"},
        {"cube",
         "[source]\nkind = morse\n"
         "[window]\norigin = 0\nextents = 64\n"
         "[analysis]\nfamily = cube\ncube_dim = 3\na = 0.25\nb = 0.75\nmax_len = 3\neps = 0.5\ncell_width = 1\n"},
    };
    return presets;
}
// clang-format on

inline Config preset_config(const std::string& name) {
    auto it = preset_texts().find(name);
    if (it == preset_texts().end()) throw ConfigError("unknown preset '" + name + "'");
    return Config::parse(it->second);
}

inline std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : preset_texts()) out.push_back(k);
    return out;
}

namespace detail {

inline const std::vector<std::string> kSourceKeys{"kind", "alphas", "cuts", "base", "alpha", "center", "radius",
                                                  "order", "file", "seed", "alphabet", "rank", "radix", "cap"};
inline const std::vector<std::string> kWindowKeys{"origin", "extents"};
inline const std::vector<std::string> kAnalysisKeys{
    "n_max", "entropy_n_max", "pool", "max_size", "horizon", "beam", "coverage_probe_cap", "coords", "sub",
    "brackets", "classify_beam", "density_threshold", "entropy_threshold", "slack", "prefix_sizes", "family",
    "shifts", "points", "a", "b", "max_len", "cube_dim", "eps", "cell_width", "write_sample", "seq_n_max"};
inline const std::vector<std::string> kRunKeys{"threads", "format"};

inline void validate(const Config& c) {
    for (const auto& [name, keys] : c.sections())
        if (name != "source" && name != "window" && name != "analysis" && name != "run")
            throw ConfigError("unknown section [" + name + "]");
    c.require_known("source", kSourceKeys);
    c.require_known("window", kWindowKeys);
    c.require_known("analysis", kAnalysisKeys);
    c.require_known("run", kRunKeys);
}

inline std::size_t get_size(const Config& c, const std::string& key, std::size_t fallback) {
    if (!c.has("analysis", key)) return fallback;
    const auto v = parse_i64(c.get("analysis", key));
    if (v < 0) throw ConfigError("analysis." + key + " must be nonnegative");
    return static_cast<std::size_t>(v);
}

inline double get_double(const Config& c, const std::string& key, double fallback) {
    return c.has("analysis", key) ? parse_double(c.get("analysis", key)) : fallback;
}

inline TorusPoint torus_point(const std::string& text) {
    const auto fs = parse_frac_list(text);
    return TorusPoint(std::span<const Frac>(fs));
}

}  // namespace detail

inline SeqSource build_source(const Config& c) {
    detail::validate(c);
    const std::string kind = c.get("source", "kind");
    auto key = [&](const std::string& k) { return c.get("source", k); };
    if (kind == "sturmian") {
        std::vector<TorusPoint> gens;
        for (auto a : parse_frac_list(key("alphas"))) gens.push_back(TorusPoint{a});
        return SeqSource::sturmian(RotationSpec(std::move(gens)), CutPartition(parse_frac_list(key("cuts"))),
                                   detail::torus_point(c.get_or("source", "base", "0")));
    }
    if (kind == "sphere") {
        const TorusPoint center = detail::torus_point(key("center"));
        const std::string zero_base = center.dim() == 1 ? "0" : center.dim() == 2 ? "0,0" : "0,0,0";
        return SeqSource::sphere(BallRegion(center, parse_frac(key("radius"))), RotationSpec({detail::torus_point(key("alpha"))}),
                                 detail::torus_point(c.get_or("source", "base", zero_base)));
    }
    if (kind == "ip_indicator")
        return SeqSource::ip_indicator(detail::parse_i64(key("radix")), static_cast<int>(detail::parse_i64(key("cap"))));
    if (kind == "morse") return SeqSource::morse();
    if (kind == "concat_nonnull") return SeqSource::concat_nonnull();
    if (kind == "char_halfline") return SeqSource::char_halfline();
    if (kind == "de_bruijn") return SeqSource::de_bruijn(static_cast<int>(detail::parse_i64(key("order"))));
    if (kind == "explicit") {
        std::ifstream in(key("file"));
        if (!in) throw IoError("cannot read sequence file '" + key("file") + "'");
        return SeqSource::explicit_window(read_seq(in));
    }
    if (kind == "random")
        return SeqSource::random(static_cast<std::uint64_t>(detail::parse_i64(c.get_or("source", "seed", "0"))),
                                 static_cast<unsigned>(detail::parse_i64(c.get_or("source", "alphabet", "2"))),
                                 static_cast<std::size_t>(detail::parse_i64(c.get_or("source", "rank", "1"))));
    throw ConfigError("unknown source kind '" + kind + "'");
}

inline Box build_window(const Config& c) {
    std::size_t r1 = 0, r2 = 0;
    const Coord origin = parse_coord(c.get("window", "origin"), r1);
    const Coord extents = parse_coord(c.get("window", "extents"), r2);
    if (r1 != r2) throw DimensionError("window origin and extents differ in rank");
    return Box::make(std::span<const std::int64_t>(origin.data(), r1), std::span<const std::int64_t>(extents.data(), r1));
}

struct RunOptions {
    std::string out_dir = "tamelab-out";
    std::string format = "text";  // text | csv
    std::size_t threads = 1;
};

struct RunResult {
    std::map<std::string, std::string> files;  // name -> content, manifest included
    double wall_seconds = 0.0;
};

namespace detail {

inline std::string csv_or_text(const RunOptions& o, const std::string& stem) { return stem + (o.format == "csv" ? ".csv" : ".txt"); }

inline std::string run_generate(const SeqWindow& win) { return seq_to_string(win); }

inline std::string run_complexity(const SeqWindow& win, std::size_t n_max, const RunOptions& o) {
    const WindowLanguage lang = complexity(win, n_max, o.threads);
    std::ostringstream os;
    if (o.format == "csv") os << "n,count\n";
    for (std::size_t n = 1; n <= n_max; ++n) os << n << (o.format == "csv" ? "," : " ") << lang.p(n) << '\n';
    return os.str();
}

inline std::string format_profile(const MaxFreeResult& r, const RunOptions& o) {
    std::ostringstream os;
    if (o.format == "csv") {
        os << "size,candidates,free_sets,best_observed,total,coverage_exact,densest_diameter,densest_ratio\n";
        for (const auto& lv : r.profile) {
            const auto d = lv.densest ? lv.densest->coords.diameter_sum() : -1;
            os << lv.size << ',' << lv.candidates << ',' << lv.free_sets << ',' << lv.best_observed << ',' << lv.total << ','
               << (lv.coverage_exact ? 1 : 0) << ',' << d << ','
               << (lv.densest ? fixed(static_cast<double>(lv.size) / static_cast<double>(d + 1)) : std::string("")) << '\n';
        }
        return os.str();
    }
    os << "TAMELAB-FREESEARCH v1\n";
    os << "horizon: " << r.horizon << "\nrepresentatives: " << r.representatives << "\n";
    os << "max_free_size: " << r.max_size() << (r.beam_limited ? " (beam-limited)" : "") << "\n";
    for (const auto& w : r.warnings) os << "warning: " << w << "\n";
    for (const auto& lv : r.profile) {
        os << "size " << lv.size << ": candidates=" << lv.candidates << " free=" << lv.free_sets << " best_coverage=" << lv.best_observed
           << "/" << lv.total << (lv.coverage_exact ? "" : " (probe-truncated)");
        if (lv.densest) os << " densest=" << lv.densest->coords.format();
        os << "\n";
    }
    if (r.best) write_certificate(os, *r.best);
    return os.str();
}

inline FunctionSample cube_family(std::size_t dim) {
    if (dim < 1 || dim > 12) throw ArgumentError("cube_dim must be 1..12");
    const std::size_t cols = std::size_t{1} << dim;
    std::vector<double> values;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < cols; ++j) values.push_back(static_cast<double>((j >> i) & 1));
    std::vector<std::vector<double>> labels;
    for (std::size_t j = 0; j < cols; ++j) {
        std::vector<double> l;
        for (std::size_t i = 0; i < dim; ++i) l.push_back(static_cast<double>((j >> i) & 1));
        labels.push_back(std::move(l));
    }
    return FunctionSample(dim, cols, std::move(values), std::move(labels));
}

}  // namespace detail

/// Family sample selected by analysis.family (orbit | cube).
inline FunctionSample build_family(const Config& c, const SeqSource& source) {
    const std::string family = c.get_or("analysis", "family", "orbit");
    if (family == "cube") return detail::cube_family(detail::get_size(c, "cube_dim", 3));
    if (family == "orbit") {
        const std::size_t rank = source.group_rank();
        const auto shifts = parse_coord_list(c.get("analysis", "shifts"), rank);
        const auto points = parse_coord_list(c.get("analysis", "points"), rank);
        return orbit_family_sample(source, shifts, points);
    }
    throw ConfigError("unknown family '" + family + "'");
}

inline ScaleParams build_scale(const Config& c, const Box& window, std::size_t threads) {
    ScaleParams s;
    s.window = window;
    s.entropy_n_max = detail::get_size(c, "entropy_n_max", detail::get_size(c, "n_max", 16));
    if (c.has("analysis", "brackets")) s.brackets = parse_int_list(c.get("analysis", "brackets"));
    s.max_size = detail::get_size(c, "max_size", 24);
    s.horizon = detail::get_size(c, "horizon", 0);
    s.beam = detail::get_size(c, "classify_beam", 4096);
    s.density_threshold = detail::get_double(c, "density_threshold", 0.05);
    s.entropy_threshold = detail::get_double(c, "entropy_threshold", 0.05);
    s.slack = detail::get_double(c, "slack", 2.0);
    if (c.has("analysis", "prefix_sizes")) {
        s.prefix_sizes.clear();
        for (auto v : parse_int_list(c.get("analysis", "prefix_sizes"))) s.prefix_sizes.push_back(static_cast<std::size_t>(v));
    }
    s.threads = threads;
    return s;
}

/// Runs one command and returns every output file (not yet written).
/// The thread hint in [run] is dropped from the recorded config so outputs match across thread counts.
inline RunResult execute(const std::string& command, const Config& given, const RunOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    detail::validate(given);
    Config config = given;
    config.erase("run", "threads");
    if (opts.format != "text" && opts.format != "csv") throw ConfigError("format must be text or csv");
    if (std::find(command_names().begin(), command_names().end(), command) == command_names().end())
        throw ConfigError("unknown command '" + command + "'");

    const SeqSource source = build_source(config);
    const Box window = build_window(config);
    const std::size_t rank = window.rank;
    RunResult res;
    auto& files = res.files;
    const auto need_window = [&] { return source.materialize(window, opts.threads); };
    auto coords_of = [&](const std::string& key) { return CoordSet(rank, parse_coord_list(config.get("analysis", key), rank)); };

    if (command == "generate") {
        files["sequence.seq"] = detail::run_generate(need_window());
    } else if (command == "complexity") {
        files[detail::csv_or_text(opts, "complexity")] = detail::run_complexity(need_window(), detail::get_size(config, "n_max", 16), opts);
    } else if (command == "entropy") {
        const auto s = entropy_estimate(need_window(), detail::get_size(config, "entropy_n_max", detail::get_size(config, "n_max", 16)),
                                        opts.threads);
        std::ostringstream os;
        write_entropy_csv(os, s);
        os << "# headline " << detail::fixed(s.headline) << "\n";
        files["entropy.csv"] = os.str();
    } else if (command == "seqentropy") {
        const CoordSet A = coords_of("coords");
        std::vector<std::int64_t> along;
        for (const auto& c : A.coords()) along.push_back(c[0]);
        const auto s = sequence_entropy_estimate(need_window(), along, detail::get_size(config, "seq_n_max", along.size()), opts.threads);
        std::ostringstream os;
        write_entropy_csv(os, s);
        os << "# headline " << detail::fixed(s.headline) << "\n";
        files["seqentropy.csv"] = os.str();
    } else if (command == "freeset") {
        const SeqWindow win = need_window();
        if (config.has("analysis", "coords") && !config.has("analysis", "pool")) {
            const auto cert = is_free(win, coords_of("coords"), ShiftSet::all(detail::get_size(config, "horizon", 0)), opts.threads);
            if (!verify_certificate(win, cert)) throw IntegrityError("certificate failed re-verification");
            std::ostringstream os;
            write_certificate(os, cert);
            files["certificate.txt"] = os.str();
        } else {
            FreeSearchBudget b;
            b.rank = rank;
            b.pool = parse_coord_list(config.get("analysis", "pool"), rank);
            b.max_size = detail::get_size(config, "max_size", 24);
            b.horizon = detail::get_size(config, "horizon", 0);
            b.beam = detail::get_size(config, "beam", 0);
            b.coverage_probe_cap = detail::get_size(config, "coverage_probe_cap", 4096);
            b.threads = opts.threads;
            const auto r = max_free_set(win, b);
            if (r.best && !verify_certificate(win, *r.best)) throw IntegrityError("certificate failed re-verification");
            files[detail::csv_or_text(opts, "freeset")] = detail::format_profile(r, opts);
        }
    } else if (command == "project") {
        const SeqWindow win = need_window();
        const CoordSet A = coords_of("coords");
        const PatternSet ps = patterns_on(win, A, ShiftSet::all(detail::get_size(config, "horizon", 0)), true, opts.threads);
        std::ostringstream os;
        write_patterns(os, ps);
        files["patterns.txt"] = os.str();
        if (config.has("analysis", "sub")) {
            std::ostringstream ps_os;
            write_patterns(ps_os, project(ps, coords_of("sub")));
            files["projection.txt"] = ps_os.str();
        }
    } else if (command == "family") {
        const FunctionSample fs = build_family(config, source);
        const double a = detail::get_double(config, "a", 0.25), b = detail::get_double(config, "b", 0.75);
        const std::size_t max_len = detail::get_size(config, "max_len", 6);
        const auto w = find_independent_subfamily(fs, a, b, max_len, opts.threads);
        std::ostringstream os;
        os << "TAMELAB-FAMILY v1\nrows: " << fs.rows() << "\ncols: " << fs.cols() << "\nbound: " << detail::fixed(fs.bound()) << "\n";
        os << "thresholds: " << detail::fixed(a) << " " << detail::fixed(b) << "\nmax_len: " << max_len << "\n";
        if (w) {
            const auto l1 = l1_lower_bound(fs, *w);
            os << "l1_certified: " << detail::fixed(l1.certified) << "\nl1_empirical: " << detail::fixed(l1.empirical) << "\n";
            write_witness(os, *w);
        } else {
            os << "witness: none at scale (" << fs.cols() << " columns, depth " << max_len << ")\n";
        }
        if (config.has("analysis", "eps")) {
            const double eps = detail::get_double(config, "eps", 0.1);
            const std::size_t dims = fs.labels().front().size();
            const double width = detail::get_double(config, "cell_width", 1.0);
            const GridCover cover = GridCover::from_labels(fs.labels(), std::vector<double>(dims, width));
            const auto ns = epsilon_ns(fs, cover, eps);
            os << "eps_ns: eps=" << detail::fixed(eps) << " cells=" << cover.cells().size() << " holds=" << (ns.holds ? "true" : "false");
            if (ns.cell) os << " cell=" << *ns.cell;
            os << "\n";
        }
        files["family.txt"] = os.str();
        if (config.get_or("analysis", "write_sample", "false") == "true") {
            std::ostringstream cs;
            write_sample_csv(cs, fs);
            files["sample.csv"] = cs.str();
        }
    } else if (command == "classify") {
        const auto rep = classify(source, build_scale(config, window, opts.threads));
        std::ostringstream os;
        if (opts.format == "csv") {
            write_report_csv_header(os);
            write_report_csv_row(os, rep);
        } else {
            write_report(os, rep);
        }
        files[detail::csv_or_text(opts, "report")] = os.str();
    }

    files["config.txt"] = config.to_string();
    std::ostringstream man;
    man << "TAMELAB-MANIFEST v1\nversion: " << kVersion << "\ncommand: " << command << "\nformat: " << opts.format
        << "\nconfig_digest: " << config.digest() << "\nsource_digest: " << source.digest() << "\n";
    for (const auto& [name, content] : files) man << "file: " << name << " " << digest_of(content) << "\n";
    files["manifest.txt"] = man.str();
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

inline void write_outputs(const RunResult& res, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    auto put = [&](const std::string& name, const std::string& content) {
        const auto path = std::filesystem::path(dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        out << content;
        if (!out) throw IoError("write failed for '" + path.string() + "'");
    };
    for (const auto& [name, content] : res.files) put(name, content);
    put("timing.txt", "wall_seconds: " + detail::fixed(res.wall_seconds, 3) + "\n");
}

}  // namespace tamelab
