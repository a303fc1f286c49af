// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fplab/config.hpp"
#include "fplab/recipes.hpp"

namespace fplab {

struct RunOptions {
    std::optional<std::uint64_t> seed_override;  // equivalent to editing master_seed
    std::optional<std::string> out_dir_override;
    unsigned threads = 1;
    bool quiet = false;
};

// One evaluated assertion. `observed` and `threshold` are the decimal
// renderings that also appear in summary.json.
struct Verdict {
    std::string check;
    std::string metric;
    bool pass = false;
    std::string observed;
    std::string threshold;
};

struct RunResult {
    std::string out_dir;
    std::vector<std::string> output_files;  // relative to out_dir, sorted
    std::vector<Verdict> verdicts;
    bool all_passed = true;
    std::string config_digest;
    double wall_seconds = 0.0;
};

// Executes every metric in the config, writes one CSV per metric plus
// summary.json and manifest.json under the output directory, then
// evaluates the config's assertions. Wall-clock time appears only in
// manifest.json: every other output byte is a pure function of the
// config bytes, the effective seed and the toolkit version, and is
// independent of the thread count.
RunResult run_experiment(const ExperimentConfig& config, const std::string& config_bytes,
                         const RunOptions& options = {});

// Parses and runs raw JSON config text; the digest covers exactly these
// bytes.
RunResult run_config_text(const std::string& config_text, const RunOptions& options = {});

struct RecipeRunResult {
    std::string out_dir;
    std::vector<std::string> part_labels;
    std::vector<RunResult> parts;
    bool all_passed = true;
};

// Runs every part of a recipe into <out>/<part-label>/ and writes an
// aggregate summary.json at the recipe root.
RecipeRunResult run_recipe(const Recipe& recipe, const RunOptions& options = {});

}  // namespace fplab
