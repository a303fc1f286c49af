// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fplab/channel_models.hpp"
#include "fplab/fp_metrics.hpp"
#include "fplab/parallel.hpp"
#include "fplab/rng.hpp"
#include "fplab/summation.hpp"

namespace fplab {

enum class SweepMetric {
    MeanZ,
    CrossTerm,
    TailProb,
};

const char* to_string(SweepMetric metric);

struct SweepPoint {
    std::size_t m_value = 0;
    MeanEstimate estimate;
    // Points within 10 standard errors of zero are excluded from the
    // log-log fit: their magnitude is Monte Carlo noise and a slope
    // through them is meaningless.
    bool usable_for_fit = false;
};

struct SweepResult {
    SweepMetric metric = SweepMetric::MeanZ;
    std::vector<SweepPoint> points;
    // Least-squares slope of log|estimate| against log M over the usable
    // points; absent when fewer than three points are usable.
    std::optional<double> fitted_log_slope;
};

// Evaluates one metric across element counts, holding every non-M
// parameter and the master seed fixed so that points share trial
// substreams (paired comparisons across M).
struct SweepRequest {
    ChannelEnsemble base;
    std::vector<std::size_t> m_values;
    SweepMetric metric = SweepMetric::MeanZ;
    std::size_t user_i = 0;
    std::size_t user_k = 1;
    std::size_t path_r = 0;
    std::size_t path_s = 1;
    double eps = 0.5;
    std::size_t trials = 0;
};

SweepResult sweep_over_m(const SweepRequest& request, std::uint64_t master_seed,
                         const RunContext& ctx = {});

// Empirical exceedance probability P(|z| > eps) with binomial standard
// error. Requires at least 100 trials.
struct TailEstimate {
    double probability = 0.0;
    double se = 0.0;
    std::size_t trials = 0;
};
TailEstimate tail_probability(const ChannelEnsemble& ensemble, std::size_t i, std::size_t k,
                              double eps, std::size_t trials, std::uint64_t master_seed,
                              const RunContext& ctx = {});

// Exact mean of z and of the bound-side quantity for the coupled
// counter-example, by enumerating all 2^L sign patterns (L <= 24
// enforced). Every intermediate value is an integer-valued double, so the
// results are exact, not approximations.
struct ExactEnumeration {
    double mean_z = 0.0;
    double bound_rhs = 0.0;
    std::uint64_t outcomes = 0;
};
ExactEnumeration enumerate_exact_mean(std::size_t paths, std::size_t element_count);

// Scalar toy ensemble z = +-1: the mean converges to zero while |z| = 1
// in every realization, separating orthogonality of means from vanishing
// inner products.
double scalar_sign_draw(RngStream& rng);
std::complex<double> scalar_sign_sample(std::uint64_t master_seed, std::uint64_t trial);
MeanEstimate scalar_sign_mean_z(std::size_t trials, std::uint64_t master_seed,
                                const RunContext& ctx = {});
TailEstimate scalar_sign_tail_probability(double eps, std::size_t trials, std::uint64_t master_seed,
                                          const RunContext& ctx = {});

}  // namespace fplab
