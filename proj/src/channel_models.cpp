// SPDX-License-Identifier: Apache-2.0

#include "fplab/channel_models.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fplab/errors.hpp"

namespace fplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAngleSlack = 1e-9;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_users(std::size_t users) {
    if (users < 2) {
        throw config_error("gain matrix requires at least two users");
    }
}

void check_paths(std::size_t paths) {
    if (paths < 1) {
        throw config_error("gain matrix requires at least one path");
    }
}

}  // namespace

const char* to_string(GainModel model) {
    switch (model) {
        case GainModel::IidComplexGaussian: return "iid-complex-gaussian";
        case GainModel::Factorized: return "factorized";
        case GainModel::Rademacher: return "rademacher";
        case GainModel::CorrelatedUsers: return "correlated-users";
        case GainModel::FixedMatrix: return "fixed-matrix";
        case GainModel::Counterexample: return "counterexample";
    }
    return "unknown";
}

const char* to_string(Coupling coupling) {
    switch (coupling) {
        case Coupling::Independent: return "independent";
        case Coupling::SharedAoa: return "shared-aoa";
        case Coupling::CounterexampleCoupled: return "counterexample-coupled";
    }
    return "unknown";
}

const char* to_string(AoaModel model) {
    switch (model) {
        case AoaModel::FixedList: return "fixed";
        case AoaModel::UniformRandom: return "uniform-random";
    }
    return "unknown";
}

bool UserFactorDistribution::zero_mean() const {
    if (kind == Kind::Constant) {
        return value == std::complex<double>(0.0, 0.0);
    }
    return true;
}

double UserFactorDistribution::max_abs() const {
    switch (kind) {
        case Kind::Rademacher:
        case Kind::UniformPhase:
            return 1.0;
        case Kind::ComplexGaussian:
            return kInf;
        case Kind::Constant:
            return std::abs(value);
    }
    return kInf;
}

std::complex<double> UserFactorDistribution::sample(RngStream& rng) const {
    switch (kind) {
        case Kind::Rademacher:
            return {static_cast<double>(rng.rademacher()), 0.0};
        case Kind::ComplexGaussian:
            return rng.complex_gaussian(variance);
        case Kind::UniformPhase:
            return rng.unit_phase();
        case Kind::Constant:
            return value;
    }
    return {0.0, 0.0};
}

GainMatrix gen_gains_iid(std::size_t paths, std::size_t users, double variance, RngStream& rng) {
    check_paths(paths);
    check_users(users);
    if (!(variance > 0.0)) {
        throw config_error("iid gain model: variance must be > 0");
    }

    GainMatrix v;
    v.entries.set_size(paths, users);
    for (std::size_t i = 0; i < users; ++i) {
        for (std::size_t r = 0; r < paths; ++r) {
            v.entries(r, i) = rng.complex_gaussian(variance);
        }
    }
    v.model_tag = "iid-complex-gaussian";
    v.amplitude_bound = kInf;
    return v;
}

GainMatrix gen_gains_factorized(const std::vector<std::complex<double>>& path_factors,
                                const UserFactorDistribution& user_factor, std::size_t users,
                                RngStream& rng) {
    check_paths(path_factors.size());
    check_users(users);
    if (!user_factor.zero_mean()) {
        throw config_error(
            "factorized gain model: user factor distribution must be zero-mean "
            "(a constant factor must be 0)");
    }

    GainMatrix v;
    v.entries.set_size(path_factors.size(), users);
    double max_a = 0.0;
    for (const auto& a : path_factors) {
        max_a = std::max(max_a, std::abs(a));
    }
    for (std::size_t i = 0; i < users; ++i) {
        const std::complex<double> b = user_factor.sample(rng);
        for (std::size_t r = 0; r < path_factors.size(); ++r) {
            v.entries(r, i) = path_factors[r] * b;
        }
    }
    v.model_tag = "factorized";
    v.amplitude_bound = max_a * user_factor.max_abs();
    return v;
}

GainMatrix gen_gains_rademacher(std::size_t paths, std::size_t users, RngStream& rng) {
    check_paths(paths);
    check_users(users);

    GainMatrix v;
    v.entries.set_size(paths, users);
    for (std::size_t i = 0; i < users; ++i) {
        for (std::size_t r = 0; r < paths; ++r) {
            v.entries(r, i) = {static_cast<double>(rng.rademacher()), 0.0};
        }
    }
    v.model_tag = "rademacher";
    v.amplitude_bound = 1.0;
    return v;
}

GainMatrix gen_gains_correlated_users(const std::vector<std::complex<double>>& common_weights,
                                      const std::vector<std::complex<double>>& differential_weights,
                                      RngStream& rng) {
    check_paths(common_weights.size());
    if (common_weights.size() != differential_weights.size()) {
        throw config_error("correlated-users gain model: weight lists must have equal length");
    }

    const std::complex<double> h = rng.complex_gaussian(1.0);
    const std::complex<double> q = rng.complex_gaussian(1.0);

    GainMatrix v;
    v.entries.set_size(common_weights.size(), 2);
    for (std::size_t r = 0; r < common_weights.size(); ++r) {
        const std::complex<double> common = common_weights[r] * h;
        const std::complex<double> diff = differential_weights[r] * q;
        v.entries(r, 0) = (common + diff) * kInvSqrt2;
        v.entries(r, 1) = (common - diff) * kInvSqrt2;
    }
    v.model_tag = "correlated-users";
    v.amplitude_bound = kInf;
    return v;
}

CounterexampleDraw gen_counterexample(std::size_t paths, std::size_t element_count, RngStream& rng,
                                      std::size_t users) {
    if (paths < 2) {
        throw config_error("counter-example requires L >= 2");
    }
    if (element_count < 1) {
        throw config_error("counter-example requires at least one array element");
    }
    check_users(users);

    std::vector<std::complex<double>> a(paths);
    for (std::size_t r = 0; r < paths; ++r) {
        a[r] = {static_cast<double>(rng.rademacher()), 0.0};
    }

    CounterexampleDraw draw;
    draw.steering.entries.set_size(element_count, paths);
    for (std::size_t r = 0; r < paths; ++r) {
        draw.steering.entries.col(r).fill(a[r]);
    }
    draw.steering.synthetic = true;

    draw.gains.entries.set_size(paths, users);
    for (std::size_t i = 0; i < users; ++i) {
        for (std::size_t r = 0; r < paths; ++r) {
            draw.gains.entries(r, i) = a[r];
        }
    }
    draw.gains.model_tag = "counterexample";
    draw.gains.amplitude_bound = 1.0;
    return draw;
}

void ChannelEnsemble::validate() const {
    geometry.validate();
    if (paths < 1) {
        throw config_error("ensemble: paths must be >= 1");
    }
    if (users < 2) {
        throw config_error("ensemble: users must be >= 2");
    }

    if (aoa_model == AoaModel::FixedList && coupling != Coupling::CounterexampleCoupled) {
        if (fixed_aoas.size() != paths) {
            throw config_error("ensemble: fixed angle list must have one angle per path");
        }
        for (const double aoa : fixed_aoas) {
            if (!(std::abs(aoa) <= std::numbers::pi / 2.0 + kAngleSlack)) {
                throw config_error("ensemble: fixed angle " + std::to_string(aoa) +
                                   " outside [-pi/2, pi/2]");
            }
        }
    }

    if ((gain_model == GainModel::Counterexample) != (coupling == Coupling::CounterexampleCoupled)) {
        throw config_error(
            "ensemble: the counterexample gain model and counterexample-coupled coupling "
            "must be used together");
    }

    switch (gain_model) {
        case GainModel::IidComplexGaussian:
            if (!(iid_variance > 0.0)) {
                throw config_error("iid gain model: variance must be > 0");
            }
            break;
        case GainModel::Factorized:
            if (coupling == Coupling::SharedAoa) {
                if (!path_factors.empty()) {
                    throw config_error(
                        "ensemble: shared-aoa coupling derives path factors from the angles; "
                        "path_factors must be empty");
                }
            } else if (path_factors.size() != paths) {
                throw config_error("factorized gain model: path_factors must have one entry per path");
            }
            if (!user_factor.zero_mean()) {
                throw config_error(
                    "factorized gain model: user factor distribution must be zero-mean "
                    "(a constant factor must be 0)");
            }
            if (user_factor.kind == UserFactorDistribution::Kind::ComplexGaussian &&
                !(user_factor.variance > 0.0)) {
                throw config_error("factorized gain model: user factor variance must be > 0");
            }
            break;
        case GainModel::Rademacher:
            break;
        case GainModel::CorrelatedUsers:
            if (users != 2) {
                throw config_error("correlated-users gain model supports exactly two users");
            }
            if (!common_weights.empty() && common_weights.size() != paths) {
                throw config_error("correlated-users gain model: common_weights must have one entry per path");
            }
            if (!differential_weights.empty() && differential_weights.size() != paths) {
                throw config_error(
                    "correlated-users gain model: differential_weights must have one entry per path");
            }
            break;
        case GainModel::FixedMatrix:
            if (fixed_gains.n_rows != paths || fixed_gains.n_cols != users) {
                throw config_error("fixed-matrix gain model: entries must form a paths x users matrix");
            }
            break;
        case GainModel::Counterexample:
            if (paths < 2) {
                throw config_error("counter-example requires L >= 2");
            }
            break;
    }

    if (coupling == Coupling::SharedAoa && gain_model != GainModel::Factorized) {
        throw config_error("ensemble: shared-aoa coupling requires the factorized gain model");
    }
}

double ChannelEnsemble::amplitude_bound() const {
    switch (gain_model) {
        case GainModel::IidComplexGaussian:
        case GainModel::CorrelatedUsers:
            return kInf;
        case GainModel::Rademacher:
        case GainModel::Counterexample:
            return 1.0;
        case GainModel::Factorized: {
            if (coupling == Coupling::SharedAoa) {
                return user_factor.max_abs();  // |a_r| = 1 by construction
            }
            double max_a = 0.0;
            for (const auto& a : path_factors) {
                max_a = std::max(max_a, std::abs(a));
            }
            return max_a * user_factor.max_abs();
        }
        case GainModel::FixedMatrix: {
            double max_abs = 0.0;
            for (const auto& e : fixed_gains) {
                max_abs = std::max(max_abs, std::abs(e));
            }
            return max_abs;
        }
    }
    return kInf;
}

std::vector<std::complex<double>> ChannelEnsemble::effective_common_weights() const {
    if (!common_weights.empty()) {
        return common_weights;
    }
    return std::vector<std::complex<double>>(paths, {1.0, 0.0});
}

std::vector<std::complex<double>> ChannelEnsemble::effective_differential_weights() const {
    if (!differential_weights.empty()) {
        return differential_weights;
    }
    std::vector<std::complex<double>> v(paths);
    for (std::size_t r = 0; r < paths; ++r) {
        v[r] = {(r % 2 == 0) ? 1.0 : -1.0, 0.0};
    }
    return v;
}

namespace {

std::vector<double> draw_aoas(const ChannelEnsemble& e, RngStream& rng) {
    if (e.aoa_model == AoaModel::FixedList) {
        return e.fixed_aoas;
    }
    std::vector<double> aoas(e.paths);
    for (std::size_t r = 0; r < e.paths; ++r) {
        aoas[r] = rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    }
    return aoas;
}

// Path factors for shared-aoa coupling: the per-path factor carries the
// same phase increment the steering column applies between adjacent
// elements, which correlates gains with steering without breaking the
// factorized form.
std::vector<std::complex<double>> shared_aoa_factors(const ChannelEnsemble& e,
                                                     const std::vector<double>& aoas) {
    std::vector<std::complex<double>> a(aoas.size());
    for (std::size_t r = 0; r < aoas.size(); ++r) {
        a[r] = std::polar(1.0, kTwoPi * e.geometry.spacing_h * std::sin(aoas[r]));
    }
    return a;
}

}  // namespace

ChannelSample sample_channel(const ChannelEnsemble& ensemble, std::uint64_t master_seed,
                             std::uint64_t trial) {
    ensemble.validate();
    const std::uint64_t trial_seed =
        derive_stream_seed(master_seed, "trial:" + std::to_string(trial));

    ChannelSample s;
    if (ensemble.coupling == Coupling::CounterexampleCoupled) {
        RngStream gain_rng(trial_seed, "gains");
        CounterexampleDraw draw = gen_counterexample(ensemble.paths, ensemble.geometry.element_count,
                                                     gain_rng, ensemble.users);
        s.steering = std::move(draw.steering);
        s.gains = std::move(draw.gains);
        s.channel = s.steering.entries * s.gains.entries;
        return s;
    }

    RngStream aoa_rng(trial_seed, "aoa");
    s.aoas = draw_aoas(ensemble, aoa_rng);
    s.steering = steering_matrix(ensemble.geometry, s.aoas);

    RngStream gain_rng(trial_seed, "gains");
    switch (ensemble.gain_model) {
        case GainModel::IidComplexGaussian:
            s.gains = gen_gains_iid(ensemble.paths, ensemble.users, ensemble.iid_variance, gain_rng);
            break;
        case GainModel::Factorized: {
            const auto factors = ensemble.coupling == Coupling::SharedAoa
                                     ? shared_aoa_factors(ensemble, s.aoas)
                                     : ensemble.path_factors;
            s.gains = gen_gains_factorized(factors, ensemble.user_factor, ensemble.users, gain_rng);
            break;
        }
        case GainModel::Rademacher:
            s.gains = gen_gains_rademacher(ensemble.paths, ensemble.users, gain_rng);
            break;
        case GainModel::CorrelatedUsers:
            s.gains = gen_gains_correlated_users(ensemble.effective_common_weights(),
                                                 ensemble.effective_differential_weights(), gain_rng);
            break;
        case GainModel::FixedMatrix:
            s.gains.entries = ensemble.fixed_gains;
            s.gains.model_tag = "fixed-matrix";
            s.gains.amplitude_bound = ensemble.amplitude_bound();
            break;
        case GainModel::Counterexample:
            // validate() rejects this combination.
            throw config_error("counterexample gains require counterexample-coupled coupling");
    }

    s.channel = s.steering.entries * s.gains.entries;
    return s;
}

SteeringMatrix sample_steering(const ChannelEnsemble& ensemble, std::uint64_t master_seed,
                               std::uint64_t trial) {
    ensemble.validate();
    if (ensemble.coupling == Coupling::CounterexampleCoupled) {
        return sample_channel(ensemble, master_seed, trial).steering;
    }
    const std::uint64_t trial_seed =
        derive_stream_seed(master_seed, "trial:" + std::to_string(trial));
    RngStream aoa_rng(trial_seed, "aoa");
    std::vector<double> aoas = draw_aoas(ensemble, aoa_rng);
    return steering_matrix(ensemble.geometry, aoas);
}

}  // namespace fplab
