#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tamelab/cli.hpp"

namespace {

const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  internal error\n"
    "  2  usage or config error\n"
    "  3  capacity exceeded (window, pattern space or search table)\n"
    "  4  I/O error\n"
    "  5  argument, range, dimension or integrity error\n";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-scale evidence for tame, null and entropy properties of coded subshifts"};
    app.footer(kExitCodes);
    app.set_version_flag("--version", tamelab::kVersion);

    std::string command, config_path, preset, format = "text";
    const char* env_out = std::getenv("TAMELAB_OUT");
    std::string out_dir = env_out ? env_out : "tamelab-out";
    std::size_t threads = 0;
    bool threads_given = false;
    std::vector<std::string> overrides;
    bool list_presets = false, print_config = false;

    std::string commands;
    for (const auto& c : tamelab::command_names()) commands += (commands.empty() ? "" : "|") + c;
    app.add_option("command", command, "One of " + commands);
    app.add_option("--config", config_path, "Config file (sectioned key = value)");
    app.add_option("--preset", preset, "Bundled preset name");
    app.add_option("--out", out_dir, "Output directory (default: $TAMELAB_OUT or ./tamelab-out)");
    app.add_option_function<std::size_t>(
        "--threads", [&](std::size_t n) { threads = n, threads_given = true; }, "Thread count hint (0 = hardware)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv"}));
    app.add_option("--set", overrides, "Override a config value: section.key=value (repeatable)");
    app.add_flag("--list-presets", list_presets, "Print preset names and exit");
    app.add_flag("--print-config", print_config, "Print the effective config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : tamelab::exit_config;
    }

    try {
        if (list_presets) {
            for (const auto& p : tamelab::preset_names()) std::cout << p << "\n";
            return tamelab::exit_ok;
        }
        if (config_path.empty() == preset.empty()) throw tamelab::ConfigError("give exactly one of --config or --preset");
        tamelab::Config config = preset.empty() ? tamelab::Config::load(config_path) : tamelab::preset_config(preset);
        for (const auto& o : overrides) config.apply_override(o);
        if (print_config) {
            std::cout << config.to_string();
            return tamelab::exit_ok;
        }
        if (command.empty()) throw tamelab::ConfigError("missing command");

        tamelab::RunOptions opts;
        opts.out_dir = out_dir;
        opts.format = config.get_or("run", "format", format);
        if (format != "text") opts.format = format;
        opts.threads = threads_given ? threads : static_cast<std::size_t>(tamelab::detail::parse_i64(config.get_or("run", "threads", "1")));
        opts.threads = tamelab::resolve_threads(opts.threads);

        const auto result = tamelab::execute(command, config, opts);
        tamelab::write_outputs(result, out_dir);
        std::cerr << command << ": wrote " << result.files.size() << " files to " << out_dir << "\n";
        return tamelab::exit_ok;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tamelab::exit_code_for(e);
    }
}
