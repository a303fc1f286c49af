// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fplab/errors.hpp"
#include "fplab/recipes.hpp"
#include "fplab/runner.hpp"
#include "fplab/version.hpp"

namespace {

// Exit codes: 0 all checks pass, 1 at least one check fails, 2 config or I/O error.
constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw fplab::config_error("cannot open config file '" + path + "'");
    }
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) {
        throw fplab::config_error("failed to read config file '" + path + "'");
    }
    return out.str();
}

int do_run(const std::string& target, const fplab::RunOptions& options) {
    if (const fplab::Recipe* recipe = fplab::find_recipe(target)) {
        fplab::RecipeRunResult result = fplab::run_recipe(*recipe, options);
        return result.all_passed ? kExitPass : kExitCheckFailed;
    }
    if (!std::filesystem::exists(target)) {
        std::string names;
        for (const auto& r : fplab::recipe_catalog()) {
            names += names.empty() ? r.name : ", " + r.name;
        }
        throw fplab::config_error("'" + target +
                                  "' is neither a recipe name nor an existing config file "
                                  "(recipes: " +
                                  names + ")");
    }
    fplab::RunResult result = fplab::run_config_text(read_text_file(target), options);
    return result.all_passed ? kExitPass : kExitCheckFailed;
}

int do_recipes() {
    std::size_t width = 0;
    for (const auto& r : fplab::recipe_catalog()) {
        width = std::max(width, r.name.size());
    }
    for (const auto& r : fplab::recipe_catalog()) {
        std::printf("%-*s  %s\n", static_cast<int>(width), r.name.c_str(),
                    r.description.c_str());
    }
    return kExitPass;
}

int do_explain(const std::string& name) {
    const fplab::Recipe* recipe = fplab::find_recipe(name);
    if (recipe == nullptr) {
        throw fplab::config_error("unknown recipe '" + name + "' (see `fplab recipes`)");
    }
    std::printf("%s\n  %s\n\nparts:\n", recipe->name.c_str(), recipe->description.c_str());
    for (const auto& part : recipe->parts) {
        std::printf("  - %s\n", part.label.c_str());
    }
    std::printf("\n%s\n", recipe->explanation.c_str());
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"favorable-propagation simulation and audit toolkit"};
    app.set_version_flag("--version", std::string(fplab::kToolkitVersion));
    app.require_subcommand(1);

    std::string run_target;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
    unsigned threads = 1;
    bool quiet = false;

    CLI::App* run_cmd = app.add_subcommand("run", "run a recipe by name or a config file");
    run_cmd->add_option("target", run_target, "recipe name or path to a JSON config")
        ->required();
    run_cmd->add_option("--seed", seed_override, "override the master seed");
    run_cmd->add_option("--out", out_override, "override the output directory");
    run_cmd->add_option("--threads", threads, "worker threads (results do not depend on this)")
        ->check(CLI::Range(1u, 256u));
    run_cmd->add_flag("--quiet", quiet, "suppress per-check output");

    CLI::App* recipes_cmd = app.add_subcommand("recipes", "list built-in recipes");

    std::string explain_name;
    CLI::App* explain_cmd = app.add_subcommand("explain", "describe a recipe and its parts");
    explain_cmd->add_option("recipe", explain_name, "recipe name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfigError;
    }

    try {
        if (run_cmd->parsed()) {
            fplab::RunOptions options;
            options.seed_override = seed_override;
            options.out_dir_override = out_override;
            options.threads = threads;
            options.quiet = quiet;
            return do_run(run_target, options);
        }
        if (recipes_cmd->parsed()) {
            return do_recipes();
        }
        if (explain_cmd->parsed()) {
            return do_explain(explain_name);
        }
    } catch (const fplab::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    } catch (const fplab::hypothesis_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfigError;
    }
    return kExitConfigError;
}
