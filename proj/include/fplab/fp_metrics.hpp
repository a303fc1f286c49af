// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <armadillo>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

#include "fplab/channel_models.hpp"
#include "fplab/parallel.hpp"
#include "fplab/summation.hpp"

namespace fplab {

// Normalized inner product z = (1/M) g_i^H g_k between two user channels.
// i = k is allowed (it gives the per-user power); the statistics below
// insist on distinct users.
std::complex<double> inner_product_z(const arma::cx_mat& channel, std::size_t i, std::size_t k);

// Monte Carlo mean of z between distinct users i and k.
MeanEstimate estimate_mean_z(const ChannelEnsemble& ensemble, std::size_t i, std::size_t k,
                             std::size_t trials, std::uint64_t master_seed,
                             const RunContext& ctx = {});

// Steering cross-term T_{r,s} = (1/M) w_r^H w_s, averaged over the angle
// ensemble when angles are random. Fixed-angle uncoupled ensembles are
// evaluated in a single deterministic shot (trials = 1, zero SE).
struct CrossTermEstimate {
    MeanEstimate value;
    bool deterministic = false;
};
CrossTermEstimate steering_cross_term(const ChannelEnsemble& ensemble, std::size_t r, std::size_t s,
                                      std::size_t trials, std::uint64_t master_seed,
                                      const RunContext& ctx = {});

// All pairs (r, s) at once, same conventions as steering_cross_term.
struct CrossTermTable {
    arma::cx_mat values;
    arma::mat se_re;
    arma::mat se_im;
    std::size_t trials = 0;
    bool deterministic = false;
};
CrossTermTable steering_cross_term_table(const ChannelEnsemble& ensemble, std::size_t trials,
                                         std::uint64_t master_seed, const RunContext& ctx = {});

// Split of mean z into the same-path part (gain cross-moments times unit
// diagonal cross-terms) and the cross-path part. Valid only when steering
// and gains are statistically independent; coupled ensembles are refused
// with hypothesis_error. total = diag + offdiag and matches
// estimate_mean_z on the same samples up to rounding.
struct Decomposition {
    MeanEstimate diag_part;
    MeanEstimate offdiag_part;
    std::complex<double> total{0.0, 0.0};
    std::size_t trials = 0;
};
Decomposition decompose_mean_z(const ChannelEnsemble& ensemble, std::size_t i, std::size_t k,
                               std::size_t trials, std::uint64_t master_seed,
                               const RunContext& ctx = {});

// Monte Carlo estimate of the bound-side quantity
// (c_alpha^2 / M) * sum_{r,s} w_r^H w_s, accumulated in complex
// arithmetic over ordered path pairs. The same-path part, whose mean is
// c_alpha^2 * L under the norm convention, is reported alongside. Every
// sampled gain magnitude must respect c_alpha, otherwise the estimator
// refuses with hypothesis_error.
struct BoundEstimate {
    MeanEstimate value;
    MeanEstimate same_path_part;
    double c_alpha = 0.0;
};
BoundEstimate bound_rhs_21(const ChannelEnsemble& ensemble, double c_alpha, std::size_t trials,
                           std::uint64_t master_seed, const RunContext& ctx = {});

// Cosine similarity of two real vectors; both must be nonzero.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Aggregated audit record for one ensemble: mean z, the cross-term table,
// the mean decomposition when the ensemble is uncoupled, and the bound
// estimate when the ensemble has a finite amplitude bound.
struct FPReport {
    MeanEstimate mean_z;
    CrossTermTable cross_terms;
    bool has_decomposition = false;
    Decomposition decomposition;
    bool has_bound = false;
    BoundEstimate bound;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
};
FPReport make_fp_report(const ChannelEnsemble& ensemble, std::size_t i, std::size_t k,
                        std::size_t trials, std::uint64_t master_seed, const RunContext& ctx = {});

}  // namespace fplab
