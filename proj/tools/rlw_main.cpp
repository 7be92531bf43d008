#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rlw/errors.hpp"
#include "rlw/experiments.hpp"
#include "rlw/run_config.hpp"

namespace {

const char* describe(const std::string& cmd) {
    if (cmd == "converge1d") return "1D solitary-wave temporal convergence table";
    if (cmd == "efficiency") return "error versus wall-clock table on a large 1D grid";
    if (cmd == "two-soliton") return "two interacting solitary waves: invariants + snapshots";
    if (cmd == "converge2d") return "2D temporal convergence table against a fine reference";
    if (cmd == "bore2d") return "2D undular bore evolution snapshots";
    if (cmd == "maxwellian2d") return "2D Gaussian pulse evolution snapshots";
    if (cmd == "custom") return "run any scheme from a saved field file";
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure-preserving pseudo-spectral solver for the regularized long-wave equation"};
    app.name("rlw");
    app.require_subcommand(0, 1);

    std::string config_path;
    std::vector<std::string> overrides;
    for (const std::string& name : rlw::all_experiment_commands()) {
        CLI::App* sub = app.add_subcommand(name, describe(name));
        sub->add_option("--config", config_path, "key=value configuration file");
        sub->add_option("overrides", overrides, "key=value overrides");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (app.get_subcommands().empty()) {
        std::fprintf(stderr, "%s\n", app.help().c_str());
        return 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        rlw::KeyValues kv;
        if (!config_path.empty()) kv = rlw::parse_config_file(config_path);
        for (const std::string& tok : overrides) rlw::apply_override(kv, tok);
        rlw::run_experiment(cmd, kv);
        return 0;
    } catch (const rlw::SolverError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const rlw::DivergenceError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const rlw::StartupError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const rlw::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const rlw::ParseError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const rlw::DimensionError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const rlw::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
}
