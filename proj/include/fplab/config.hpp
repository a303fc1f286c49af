// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fplab/channel_models.hpp"

namespace fplab {

// One requested statistic. `name` selects the executor:
//   mean-z, cross-term, cross-term-table, decompose, bound-rhs,
//   tail-probability, sweep, enumerate-exact, normalization-check,
//   scalar-sign-mean-tail, cosine-demo
struct MetricSpec {
    std::string name;
    std::size_t user_i = 0;
    std::size_t user_k = 1;
    std::size_t path_r = 0;
    std::size_t path_s = 1;
    std::optional<double> c_alpha;      // bound-rhs; defaults to the ensemble amplitude bound
    std::optional<std::size_t> trials;  // overrides the experiment trial count
    std::string sweep_metric = "mean_z";
    double tol = 1e-9;                  // normalization-check
};

// A pass/fail claim evaluated against the metric results. Every recipe
// encodes its expected outcome this way, so a run's exit status is a
// statement about the statistics, not about the code finishing.
struct AssertionSpec {
    std::string check;
    std::optional<std::size_t> metric_index;  // restrict to one metrics[] entry
    double tol = 0.0;
    double k_se = 4.0;
    std::complex<double> value{0.0, 0.0};
    bool require_zero_se = false;
    double p_min = 0.99;
    double eps = 0.5;
    double slope_max = 0.0;
    std::size_t m_low = 0;
    std::size_t m_high = 0;
};

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t master_seed = 0;
    std::size_t trials = 0;
    ChannelEnsemble ensemble;
    std::vector<MetricSpec> metrics;
    std::vector<std::size_t> m_values;   // element counts for sweep metrics
    std::vector<double> eps_values;      // tail thresholds, default {0.5}
    std::vector<AssertionSpec> assertions;
    std::string output_dir;              // optional; the CLI defaults to out/<experiment>
};

// Parses and validates a JSON experiment description. All problems are
// collected and reported together in the config_error message, each line
// prefixed with the offending field path. Wall-clock seeding does not
// exist: master_seed is required.
ExperimentConfig parse_config(const std::string& json_text);

// Canonical JSON rendering with defaults resolved. Parsing the result
// reproduces the config: parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace fplab
