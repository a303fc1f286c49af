// SPDX-License-Identifier: Apache-2.0

#include "fplab/fp_metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fplab/errors.hpp"

namespace fplab {

namespace {

std::span<const std::complex<double>> column_span(const arma::cx_mat& m, std::size_t col) {
    return {m.colptr(col), m.n_rows};
}

void check_user_pair(const ChannelEnsemble& ensemble, std::size_t i, std::size_t k) {
    if (i >= ensemble.users || k >= ensemble.users) {
        throw std::out_of_range("user index out of range");
    }
    if (i == k) {
        throw std::invalid_argument(
            "favorable-propagation statistics are defined between distinct users (i != k)");
    }
}

void check_trials(std::size_t trials) {
    if (trials < 2) {
        throw std::invalid_argument("at least two trials are required for a standard error");
    }
}

bool deterministic_steering(const ChannelEnsemble& ensemble) {
    return ensemble.aoa_model == AoaModel::FixedList &&
           ensemble.coupling != Coupling::CounterexampleCoupled;
}

}  // namespace

std::complex<double> inner_product_z(const arma::cx_mat& channel, std::size_t i, std::size_t k) {
    if (i >= channel.n_cols || k >= channel.n_cols) {
        throw std::out_of_range("user index out of range");
    }
    if (channel.n_rows == 0) {
        throw std::invalid_argument("inner_product_z: channel matrix has no rows");
    }
    const std::complex<double> dot = dot_conj(column_span(channel, i), column_span(channel, k));
    return dot / static_cast<double>(channel.n_rows);
}

MeanEstimate estimate_mean_z(const ChannelEnsemble& ensemble, std::size_t i, std::size_t k,
                             std::size_t trials, std::uint64_t master_seed, const RunContext& ctx) {
    ensemble.validate();
    check_user_pair(ensemble, i, k);
    check_trials(trials);

    const auto samples = collect_trials<std::complex<double>>(trials, ctx, [&](std::size_t n) {
        const ChannelSample s = sample_channel(ensemble, master_seed, n);
        return inner_product_z(s.channel, i, k);
    });
    return mean_and_se(samples);
}

CrossTermEstimate steering_cross_term(const ChannelEnsemble& ensemble, std::size_t r, std::size_t s,
                                      std::size_t trials, std::uint64_t master_seed,
                                      const RunContext& ctx) {
    ensemble.validate();
    if (r >= ensemble.paths || s >= ensemble.paths) {
        throw std::out_of_range("path index out of range");
    }

    CrossTermEstimate est;
    if (deterministic_steering(ensemble)) {
        const SteeringMatrix w = steering_matrix(ensemble.geometry, ensemble.fixed_aoas);
        const std::complex<double> t =
            dot_conj(column_span(w.entries, r), column_span(w.entries, s)) /
            static_cast<double>(w.entries.n_rows);
        est.value = MeanEstimate{t, 0.0, 0.0, 1};
        est.deterministic = true;
        return est;
    }

    check_trials(trials);
    const auto samples = collect_trials<std::complex<double>>(trials, ctx, [&](std::size_t n) {
        const SteeringMatrix w = sample_steering(ensemble, master_seed, n);
        return dot_conj(column_span(w.entries, r), column_span(w.entries, s)) /
               static_cast<double>(w.entries.n_rows);
    });
    est.value = mean_and_se(samples);
    est.deterministic = false;
    return est;
}

CrossTermTable steering_cross_term_table(const ChannelEnsemble& ensemble, std::size_t trials,
                                         std::uint64_t master_seed, const RunContext& ctx) {
    ensemble.validate();
    const std::size_t l_count = ensemble.paths;

    CrossTermTable table;
    table.values.set_size(l_count, l_count);
    table.se_re.set_size(l_count, l_count);
    table.se_im.set_size(l_count, l_count);

    const auto gram = [l_count](const SteeringMatrix& w) {
        std::vector<std::complex<double>> g(l_count * l_count);
        const double m_count = static_cast<double>(w.entries.n_rows);
        for (std::size_t r = 0; r < l_count; ++r) {
            for (std::size_t s = 0; s < l_count; ++s) {
                g[r * l_count + s] =
                    dot_conj(column_span(w.entries, r), column_span(w.entries, s)) / m_count;
            }
        }
        return g;
    };

    if (deterministic_steering(ensemble)) {
        const auto g = gram(steering_matrix(ensemble.geometry, ensemble.fixed_aoas));
        for (std::size_t r = 0; r < l_count; ++r) {
            for (std::size_t s = 0; s < l_count; ++s) {
                table.values(r, s) = g[r * l_count + s];
                table.se_re(r, s) = 0.0;
                table.se_im(r, s) = 0.0;
            }
        }
        table.trials = 1;
        table.deterministic = true;
        return table;
    }

    check_trials(trials);
    const auto grams = collect_trials<std::vector<std::complex<double>>>(
        trials, ctx,
        [&](std::size_t n) { return gram(sample_steering(ensemble, master_seed, n)); });

    std::vector<std::complex<double>> column(trials);
    for (std::size_t r = 0; r < l_count; ++r) {
        for (std::size_t s = 0; s < l_count; ++s) {
            for (std::size_t n = 0; n < trials; ++n) {
                column[n] = grams[n][r * l_count + s];
            }
            const MeanEstimate est = mean_and_se(column);
            table.values(r, s) = est.value;
            table.se_re(r, s) = est.se_re;
            table.se_im(r, s) = est.se_im;
        }
    }
    table.trials = trials;
    table.deterministic = false;
    return table;
}

Decomposition decompose_mean_z(const ChannelEnsemble& ensemble, std::size_t i, std::size_t k,
                               std::size_t trials, std::uint64_t master_seed,
                               const RunContext& ctx) {
    ensemble.validate();
    check_user_pair(ensemble, i, k);
    check_trials(trials);
    if (ensemble.coupling != Coupling::Independent) {
        throw hypothesis_error(
            std::string("decompose_mean_z: the same-path/cross-path split assumes steering and "
                        "gains are uncorrelated; coupling '") +
            to_string(ensemble.coupling) + "' violates that hypothesis");
    }

    struct Parts {
        std::complex<double> diag;
        std::complex<double> offdiag;
    };
    const auto parts = collect_trials<Parts>(trials, ctx, [&](std::size_t n) {
        const ChannelSample sample = sample_channel(ensemble, master_seed, n);
        const arma::cx_mat& w = sample.steering.entries;
        const arma::cx_mat& v = sample.gains.entries;
        const double m_count = static_cast<double>(w.n_rows);
        const std::size_t l_count = ensemble.paths;

        CompensatedComplexSum diag;
        CompensatedComplexSum offdiag;
        for (std::size_t r = 0; r < l_count; ++r) {
            for (std::size_t s = 0; s < l_count; ++s) {
                const std::complex<double> t =
                    dot_conj(column_span(w, r), column_span(w, s)) / m_count;
                const std::complex<double> c = std::conj(v(r, i)) * v(s, k);
                if (r == s) {
                    diag.add(c * t);
                } else {
                    offdiag.add(c * t);
                }
            }
        }
        return Parts{diag.value(), offdiag.value()};
    });

    std::vector<std::complex<double>> diag_samples(trials);
    std::vector<std::complex<double>> offdiag_samples(trials);
    for (std::size_t n = 0; n < trials; ++n) {
        diag_samples[n] = parts[n].diag;
        offdiag_samples[n] = parts[n].offdiag;
    }

    Decomposition d;
    d.diag_part = mean_and_se(diag_samples);
    d.offdiag_part = mean_and_se(offdiag_samples);
    d.total = d.diag_part.value + d.offdiag_part.value;
    d.trials = trials;
    return d;
}

BoundEstimate bound_rhs_21(const ChannelEnsemble& ensemble, double c_alpha, std::size_t trials,
                           std::uint64_t master_seed, const RunContext& ctx) {
    ensemble.validate();
    if (!(c_alpha > 0.0)) {
        throw std::invalid_argument("bound_rhs_21: c_alpha must be > 0");
    }
    check_trials(trials);

    // Relative slack so unit-modulus gains built from polar() do not trip
    // the check by one ulp.
    const double limit = c_alpha * (1.0 + 1e-12);

    struct Parts {
        std::complex<double> full;
        std::complex<double> same_path;
    };
    const double scale = c_alpha * c_alpha;
    const auto parts = collect_trials<Parts>(trials, ctx, [&](std::size_t n) {
        const ChannelSample sample = sample_channel(ensemble, master_seed, n);
        for (const auto& alpha : sample.gains.entries) {
            const double mag = std::abs(alpha);
            if (mag > limit) {
                throw hypothesis_error("bound_rhs_21: sampled gain magnitude " +
                                       std::to_string(mag) +
                                       " exceeds the stated amplitude bound c_alpha = " +
                                       std::to_string(c_alpha));
            }
        }

        const arma::cx_mat& w = sample.steering.entries;
        const double m_count = static_cast<double>(w.n_rows);
        const std::size_t l_count = ensemble.paths;
        CompensatedComplexSum full;
        CompensatedComplexSum same_path;
        for (std::size_t r = 0; r < l_count; ++r) {
            for (std::size_t s = 0; s < l_count; ++s) {
                const std::complex<double> t =
                    dot_conj(column_span(w, r), column_span(w, s)) / m_count;
                full.add(t);
                if (r == s) {
                    same_path.add(t);
                }
            }
        }
        return Parts{scale * full.value(), scale * same_path.value()};
    });

    std::vector<std::complex<double>> full_samples(trials);
    std::vector<std::complex<double>> same_samples(trials);
    for (std::size_t n = 0; n < trials; ++n) {
        full_samples[n] = parts[n].full;
        same_samples[n] = parts[n].same_path;
    }

    BoundEstimate b;
    b.value = mean_and_se(full_samples);
    b.same_path_part = mean_and_se(same_samples);
    b.c_alpha = c_alpha;
    return b;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine_similarity: vectors must have equal length");
    }
    if (a.empty()) {
        throw std::invalid_argument("cosine_similarity: vectors must be nonempty");
    }
    double amax = 0.0;
    double bmax = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
        amax = std::max(amax, std::abs(a[m]));
        bmax = std::max(bmax, std::abs(b[m]));
    }
    if (!std::isfinite(amax) || !std::isfinite(bmax)) {
        throw std::invalid_argument("cosine_similarity: non-finite entry");
    }
    if (!(amax > 0.0) || !(bmax > 0.0)) {
        throw std::invalid_argument("cosine_similarity: undefined for a zero vector");
    }
    // Entries far outside the comfortable range are scaled by the vector's
    // own peak so the squared norms cannot overflow or underflow; cosine is
    // invariant under per-vector positive scaling.
    const bool scale_a = amax > 1e150 || amax < 1e-150;
    const bool scale_b = bmax > 1e150 || bmax < 1e-150;
    CompensatedSum dot;
    CompensatedSum na;
    CompensatedSum nb;
    for (std::size_t m = 0; m < a.size(); ++m) {
        const double xa = scale_a ? a[m] / amax : a[m];
        const double xb = scale_b ? b[m] / bmax : b[m];
        dot.add(xa * xb);
        na.add(xa * xa);
        nb.add(xb * xb);
    }
    const double c = dot.value() / (std::sqrt(na.value()) * std::sqrt(nb.value()));
    return std::clamp(c, -1.0, 1.0);
}

FPReport make_fp_report(const ChannelEnsemble& ensemble, std::size_t i, std::size_t k,
                        std::size_t trials, std::uint64_t master_seed, const RunContext& ctx) {
    FPReport report;
    report.mean_z = estimate_mean_z(ensemble, i, k, trials, master_seed, ctx);
    report.cross_terms = steering_cross_term_table(ensemble, trials, master_seed, ctx);
    if (ensemble.coupling == Coupling::Independent) {
        report.decomposition = decompose_mean_z(ensemble, i, k, trials, master_seed, ctx);
        report.has_decomposition = true;
    }
    const double bound = ensemble.amplitude_bound();
    if (std::isfinite(bound) && bound > 0.0) {
        report.bound = bound_rhs_21(ensemble, bound, trials, master_seed, ctx);
        report.has_bound = true;
    }
    report.trials = trials;
    report.master_seed = master_seed;
    return report;
}

}  // namespace fplab
