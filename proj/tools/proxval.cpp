// proxval: command line front end for the contact-stream toolkit.
#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <map>

#include "proxval/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Badge proximity stream cleaning, validation and criterion statistics"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> settings;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool permissive = false;

    const std::map<std::string_view, std::string> blurbs{
        {"preprocess", "apply the configured pipeline to an rfid edgelist"},
        {"validate", "classify raw and processed rfid seconds against truth"},
        {"sweep", "accuracy curves over strategy parameter grids"},
        {"aggregate", "contact-minute networks with descriptives and rank hit rates"},
        {"regress", "logistic fits of nominations on contact minutes per dataset"},
        {"kappa", "agreement between two raters"},
        {"simulate", "synthetic truth with a degraded rfid log to match"},
    };
    for (auto name : proxval::command_names()) {
        auto* sub = app.add_subcommand(std::string(name), blurbs.at(name));
        sub->add_option("-c,--config", config_path, "key=value config file");
        sub->add_option("-s,--set", settings, "override one setting, key=value (repeatable)");
        sub->add_option("-o,--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "random seed");
        sub->add_flag("--permissive", permissive, "exit 0 even when input rows were rejected");
    }
    CLI11_PARSE(app, argc, argv);

    try {
        proxval::RunConfig config = config_path.empty() ? proxval::RunConfig{} : proxval::load_config(config_path);
        if (const char* env = std::getenv("PROXVAL_OUT_DIR"); env && *env) config.out_dir = env;
        for (const auto& s : settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
            proxval::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
        }
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (app.get_subcommands().front()->count("--seed")) config.seed = seed;
        if (permissive) config.permissive = true;

        const auto name = app.get_subcommands().front()->get_name();
        const auto result = proxval::run_command(name, config);
        std::cout << result.summary;
        std::cout << "wrote " << result.manifest.size() << " files to " << config.out_dir << "\n";
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "proxval: " << e.what() << "\n";
        return 1;
    }
}
