#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fene/commands.hpp"

namespace {

int dispatch(const std::string& command, fene::ExperimentConfig cfg) {
    if (command == "verify-constants") return fene::cmd_verify_constants(cfg);
    if (command == "verify-identities") return fene::cmd_verify_identities(cfg);
    if (command == "run") return fene::cmd_run(cfg);
    if (command == "decay-study") return fene::cmd_decay_study(cfg);
    if (command == "spectrum") return fene::cmd_spectrum(cfg);
    std::cerr << "unknown command: " << command << "\n";
    return fene::kValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fene: micro-macro elastic dumbbell simulator and verification suite"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool have_seed = false;

    std::vector<CLI::App*> subs;
    for (const char* name : {"verify-constants", "verify-identities", "run", "decay-study", "spectrum"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { seed = s; have_seed = true; }, "seed override");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        fene::ExperimentConfig cfg =
            config_path.empty() ? fene::parse_config("{}") : fene::load_config_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (have_seed) cfg.seed = seed;
        return dispatch(app.get_subcommands().front()->get_name(), cfg);
    } catch (const fene::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return fene::kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fene::kBreakdown;
    }
}
