// SPDX-License-Identifier: Apache-2.0
//
// simulate <recipe-file> [--seed U64] [--output PATH] [--workers N]
//          [--override key=value ...]
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure,
// 4 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmimo/errors.hpp"
#include "dmimo/recipe.hpp"
#include "dmimo/version.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw dmimo::io_error("cannot read recipe file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(dmimo::kToolName) + " - D-MIMO uplink Monte Carlo simulator"};
    app.set_version_flag("--version",
                         std::string(dmimo::kToolName) + " " + dmimo::kToolVersion);

    std::string recipe_path;
    app.add_option("recipe", recipe_path, "experiment recipe file (key = value lines)")
        ->required();
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "override the master seed");
    std::string output;
    auto* output_opt = app.add_option("--output", output, "override the output CSV path");
    int workers = -1;
    auto* workers_opt =
        app.add_option("--workers", workers, "parallel worker cap (default: all CPUs)");
    std::vector<std::string> overrides;
    app.add_option("--override", overrides, "recipe overrides as key=value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        dmimo::ExperimentRecipe recipe =
            dmimo::parse_recipe_text(read_file(recipe_path), recipe_path);
        for (const std::string& kv : overrides) {
            dmimo::apply_override(recipe, kv);
        }
        if (*seed_opt) recipe.sim.seed = seed;
        if (*output_opt) recipe.output_path = output;
        if (*workers_opt) recipe.sim.workers = workers;
        dmimo::finalize_recipe(recipe);
        dmimo::run_recipe(recipe);
        std::cout << "wrote " << recipe.resolved_output() << "\n";
        return 0;
    } catch (const dmimo::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const dmimo::io_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const dmimo::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
