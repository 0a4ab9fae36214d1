// trilind_main.cpp — command-line front end
//
// trilind <dynamics|steady|sweep|wigner|spectrum|g2tau|validate>
//         (--config <path> | --preset <name>) [--out <dir>] [--jobs <n>]
//         [--presets-dir <dir>]

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "trilind/config.hpp"
#include "trilind/log.hpp"
#include "trilind/runner.hpp"
#include "trilind/version.hpp"

namespace fs = std::filesystem;

namespace {

fs::path executable_dir(const char* argv0) {
    std::error_code ec;
    const fs::path self = fs::canonical("/proc/self/exe", ec);
    if (!ec) return self.parent_path();
    return fs::absolute(fs::path(argv0)).parent_path();
}

std::optional<fs::path> find_preset_file(const std::string& name, const std::string& flag_dir,
                                         const fs::path& exe_dir) {
    std::vector<fs::path> candidates;
    if (!flag_dir.empty()) candidates.emplace_back(flag_dir);
    if (const char* env = std::getenv("TRILIND_PRESETS")) candidates.emplace_back(env);
    candidates.emplace_back("presets");
    candidates.emplace_back(exe_dir / "presets");
    candidates.emplace_back(exe_dir / ".." / "presets");
    candidates.emplace_back(exe_dir / ".." / ".." / "presets");

    for (const auto& dir : candidates) {
        const fs::path file = dir / (name + ".conf");
        if (fs::exists(file)) return file;
    }
    return std::nullopt;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trilind — spin-photon-phonon cavity simulator"};
    app.set_version_flag("--version", std::string(trilind::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    std::string presets_dir;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    const std::vector<std::string> tasks = {"dynamics", "steady",   "sweep",   "wigner",
                                            "spectrum", "g2tau",    "validate"};
    for (const auto& name : tasks) {
        CLI::App* sub = app.add_subcommand(
            name, name == "validate" ? "parse a config and print the resolved keys"
                                     : "run the " + name + " task");
        sub->add_option("--config", config_path, "configuration file (key-value text or JSON)");
        sub->add_option("--preset", preset_name, "named preset (see presets/)");
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--jobs", jobs, "worker threads for sweep grids");
        sub->add_option("--presets-dir", presets_dir, "directory containing preset files");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    try {
        std::string text;
        if (!preset_name.empty()) {
            if (!config_path.empty()) throw trilind::ConfigError("give --config or --preset, not both");
            const auto file = find_preset_file(preset_name, presets_dir, executable_dir(argv[0]));
            if (!file) throw trilind::ConfigError("preset '" + preset_name + "' not found");
            trilind::log::info("preset file " + file->string());
            text = trilind::read_text_file(file->string());
        } else if (!config_path.empty()) {
            text = trilind::read_text_file(config_path);
        } else {
            throw trilind::ConfigError("one of --config or --preset is required");
        }

        const auto runs = trilind::parse_runs(text);

        if (sub == "validate") {
            for (const auto& [label, cfg] : runs) {
                if (!label.empty()) std::cout << "[run " << label << "]\n";
                for (const auto& [key, value] : cfg.flatten()) {
                    std::cout << key << " = " << value << "\n";
                }
            }
            return 0;
        }

        for (const auto& [label, cfg] : runs) {
            if (trilind::task_name(cfg.task) != sub) {
                throw trilind::ConfigError("config task '" +
                                           std::string(trilind::task_name(cfg.task)) +
                                           "' does not match subcommand '" + sub + "'");
            }
        }

        const std::string dir = out_dir.empty() ? runs.front().second.output_dir : out_dir;
        const trilind::RunReport report = trilind::run_config_text(text, dir, jobs);
        for (const auto& e : report.errors) std::cerr << "error: " << e << "\n";
        return report.exit_code;
    } catch (const trilind::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const trilind::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
