// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <armadillo>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fplab/array_geometry.hpp"
#include "fplab/rng.hpp"

namespace fplab {

enum class GainModel {
    IidComplexGaussian,
    Factorized,
    Rademacher,
    CorrelatedUsers,
    FixedMatrix,
    Counterexample,
};

enum class Coupling {
    Independent,
    SharedAoa,
    CounterexampleCoupled,
};

enum class AoaModel {
    FixedList,
    UniformRandom,
};

const char* to_string(GainModel model);
const char* to_string(Coupling coupling);
const char* to_string(AoaModel model);

// Distribution of the per-user factor b_i in the factorized gain model
// alpha_{r,i} = a_r * b_i. All factorized hypotheses require E{b} = 0, so
// Constant is only valid with value 0 (it exists to exercise the
// rejection path and degenerate ensembles).
struct UserFactorDistribution {
    enum class Kind {
        Rademacher,
        ComplexGaussian,
        UniformPhase,
        Constant,
    };

    Kind kind = Kind::Rademacher;
    double variance = 1.0;
    std::complex<double> value{0.0, 0.0};

    bool zero_mean() const;
    // Largest possible |b|; +inf for the Gaussian case.
    double max_abs() const;
    std::complex<double> sample(RngStream& rng) const;
};

// Path-gain matrix V (path_count x user_count) with a tag naming the model
// that produced it and the tightest a-priori bound on |alpha| (+inf when
// the model is unbounded).
struct GainMatrix {
    arma::cx_mat entries;
    std::string model_tag;
    double amplitude_bound = 0.0;
};

GainMatrix gen_gains_iid(std::size_t paths, std::size_t users, double variance, RngStream& rng);
GainMatrix gen_gains_factorized(const std::vector<std::complex<double>>& path_factors,
                                const UserFactorDistribution& user_factor, std::size_t users,
                                RngStream& rng);
GainMatrix gen_gains_rademacher(std::size_t paths, std::size_t users, RngStream& rng);

// Two-user gains alpha_{r,0} = (u_r*h + v_r*q)/sqrt(2),
// alpha_{r,1} = (u_r*h - v_r*q)/sqrt(2) with h, q iid standard complex
// Gaussian shared across paths. Per path, the user cross-moment is
// (u_r*conj(u_r) - v_r*conj(v_r))/2, so |u_r| = |v_r| gives uncorrelated
// per-path user gains while cross-path moments stay nonzero.
GainMatrix gen_gains_correlated_users(const std::vector<std::complex<double>>& common_weights,
                                      const std::vector<std::complex<double>>& differential_weights,
                                      RngStream& rng);

// Coupled construction with w_{m,r} = alpha_{r,i} = a_r for Rademacher
// a_r: every user shares the gain column a. The steering matrix is
// synthetic (constant over elements) yet satisfies the norm convention.
struct CounterexampleDraw {
    SteeringMatrix steering;
    GainMatrix gains;
};
CounterexampleDraw gen_counterexample(std::size_t paths, std::size_t element_count, RngStream& rng,
                                      std::size_t users = 2);

// Full ensemble description: geometry, path/user counts, angle model,
// gain model and the coupling between steering and gains.
struct ChannelEnsemble {
    ArrayGeometry geometry;
    std::size_t paths = 1;
    std::size_t users = 2;

    AoaModel aoa_model = AoaModel::FixedList;
    std::vector<double> fixed_aoas;

    GainModel gain_model = GainModel::IidComplexGaussian;
    Coupling coupling = Coupling::Independent;

    double iid_variance = 1.0;
    std::vector<std::complex<double>> path_factors;
    UserFactorDistribution user_factor;
    std::vector<std::complex<double>> common_weights;        // correlated-users u_r, default 1
    std::vector<std::complex<double>> differential_weights;  // correlated-users v_r, default (-1)^r
    arma::cx_mat fixed_gains;

    // Throws config_error on an inconsistent description.
    void validate() const;

    // Tightest a-priori bound on |alpha|; +inf for unbounded models.
    double amplitude_bound() const;

    std::vector<std::complex<double>> effective_common_weights() const;
    std::vector<std::complex<double>> effective_differential_weights() const;
};

// One Monte Carlo draw: steering matrix, gain matrix and their product
// G = W * V (element_count x user_count).
struct ChannelSample {
    SteeringMatrix steering;
    GainMatrix gains;
    arma::cx_mat channel;
    std::vector<double> aoas;
};

// Draws trial `trial` of the ensemble. Angles and gains come from
// separate substreams of a per-trial seed, so the same (master_seed,
// trial) pair yields the same sample regardless of which other trials are
// evaluated, in what order, or on how many threads.
ChannelSample sample_channel(const ChannelEnsemble& ensemble, std::uint64_t master_seed,
                             std::uint64_t trial);

// Draws only the steering matrix of the trial (same values the full
// sample would contain). For coupled ensembles this draws the gains too.
SteeringMatrix sample_steering(const ChannelEnsemble& ensemble, std::uint64_t master_seed,
                               std::uint64_t trial);

}  // namespace fplab
