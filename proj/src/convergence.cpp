// SPDX-License-Identifier: Apache-2.0

#include "fplab/convergence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fplab/errors.hpp"

namespace fplab {

namespace {

// Integer square root; returns nullopt when n is not a perfect square.
std::optional<std::size_t> exact_sqrt(std::size_t n) {
    const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    for (std::size_t r = root > 0 ? root - 1 : 0; r <= root + 1; ++r) {
        if (r * r == n) {
            return r;
        }
    }
    return std::nullopt;
}

ChannelEnsemble with_element_count(const ChannelEnsemble& base, std::size_t m) {
    ChannelEnsemble e = base;
    if (e.coupling == Coupling::CounterexampleCoupled) {
        // The coupled construction ignores geometry apart from the element
        // count; pin a linear carrier so any base geometry is sweepable.
        e.geometry = ArrayGeometry::uniform_linear(m, base.geometry.spacing_h > 0.0
                                                          ? base.geometry.spacing_h
                                                          : 0.5);
        return e;
    }
    switch (e.geometry.kind) {
        case GeometryKind::UniformLinear:
            e.geometry.element_count = m;
            return e;
        case GeometryKind::UniformPlanar: {
            const auto side = exact_sqrt(m);
            if (!side) {
                throw config_error(
                    "sweep over a uniform-planar geometry requires square element counts "
                    "(rows = cols), got " +
                    std::to_string(m));
            }
            e.geometry.rows = *side;
            e.geometry.cols = *side;
            e.geometry.element_count = m;
            return e;
        }
        case GeometryKind::ExplicitPositions:
            throw config_error(
                "sweep requires a scalable geometry (uniform-linear or uniform-planar)");
    }
    return e;
}

MeanEstimate evaluate_point(const SweepRequest& request, const ChannelEnsemble& e,
                            std::uint64_t master_seed, const RunContext& ctx) {
    switch (request.metric) {
        case SweepMetric::MeanZ:
            return estimate_mean_z(e, request.user_i, request.user_k, request.trials, master_seed,
                                   ctx);
        case SweepMetric::CrossTerm:
            return steering_cross_term(e, request.path_r, request.path_s, request.trials,
                                       master_seed, ctx)
                .value;
        case SweepMetric::TailProb: {
            const TailEstimate t = tail_probability(e, request.user_i, request.user_k, request.eps,
                                                    request.trials, master_seed, ctx);
            return MeanEstimate{{t.probability, 0.0}, t.se, 0.0, t.trials};
        }
    }
    throw config_error("sweep: unknown metric");
}

}  // namespace

const char* to_string(SweepMetric metric) {
    switch (metric) {
        case SweepMetric::MeanZ: return "mean_z";
        case SweepMetric::CrossTerm: return "cross_term";
        case SweepMetric::TailProb: return "tail_prob";
    }
    return "unknown";
}

SweepResult sweep_over_m(const SweepRequest& request, std::uint64_t master_seed,
                         const RunContext& ctx) {
    if (request.m_values.empty()) {
        throw config_error("sweep: m_values must be nonempty");
    }
    for (std::size_t idx = 0; idx < request.m_values.size(); ++idx) {
        if (request.m_values[idx] < 1) {
            throw config_error("sweep: element counts must be >= 1");
        }
        if (idx > 0 && request.m_values[idx] <= request.m_values[idx - 1]) {
            throw config_error("sweep: m_values must be strictly increasing");
        }
    }

    SweepResult result;
    result.metric = request.metric;
    result.points.reserve(request.m_values.size());
    for (const std::size_t m : request.m_values) {
        const ChannelEnsemble e = with_element_count(request.base, m);
        SweepPoint point;
        point.m_value = m;
        point.estimate = evaluate_point(request, e, master_seed, ctx);
        const double mag = std::abs(point.estimate.value);
        point.usable_for_fit = mag > 0.0 && mag > 10.0 * point.estimate.se_max();
        result.points.push_back(point);
    }

    std::size_t usable = 0;
    for (const auto& p : result.points) {
        if (p.usable_for_fit) {
            ++usable;
        }
    }
    if (usable >= 3) {
        CompensatedSum sx;
        CompensatedSum sy;
        for (const auto& p : result.points) {
            if (!p.usable_for_fit) continue;
            sx.add(std::log(static_cast<double>(p.m_value)));
            sy.add(std::log(std::abs(p.estimate.value)));
        }
        const double xbar = sx.value() / static_cast<double>(usable);
        const double ybar = sy.value() / static_cast<double>(usable);
        CompensatedSum sxy;
        CompensatedSum sxx;
        for (const auto& p : result.points) {
            if (!p.usable_for_fit) continue;
            const double dx = std::log(static_cast<double>(p.m_value)) - xbar;
            const double dy = std::log(std::abs(p.estimate.value)) - ybar;
            sxy.add(dx * dy);
            sxx.add(dx * dx);
        }
        if (sxx.value() > 0.0) {
            result.fitted_log_slope = sxy.value() / sxx.value();
        }
    }
    return result;
}

TailEstimate tail_probability(const ChannelEnsemble& ensemble, std::size_t i, std::size_t k,
                              double eps, std::size_t trials, std::uint64_t master_seed,
                              const RunContext& ctx) {
    ensemble.validate();
    if (i >= ensemble.users || k >= ensemble.users) {
        throw std::out_of_range("user index out of range");
    }
    if (i == k) {
        throw std::invalid_argument(
            "favorable-propagation statistics are defined between distinct users (i != k)");
    }
    if (!(eps > 0.0)) {
        throw std::invalid_argument("tail_probability: eps must be > 0");
    }
    if (trials < 100) {
        throw std::invalid_argument("tail_probability: at least 100 trials are required");
    }

    const auto magnitudes = collect_trials<double>(trials, ctx, [&](std::size_t n) {
        const ChannelSample s = sample_channel(ensemble, master_seed, n);
        return std::abs(inner_product_z(s.channel, i, k));
    });

    std::size_t exceed = 0;
    for (const double mag : magnitudes) {
        if (mag > eps) {
            ++exceed;
        }
    }
    TailEstimate t;
    t.probability = static_cast<double>(exceed) / static_cast<double>(trials);
    t.se = std::sqrt(t.probability * (1.0 - t.probability) / static_cast<double>(trials));
    t.trials = trials;
    return t;
}

ExactEnumeration enumerate_exact_mean(std::size_t paths, std::size_t element_count) {
    if (paths < 2) {
        throw config_error("counter-example requires L >= 2");
    }
    if (paths > 24) {
        throw config_error("enumeration is capped at L <= 24 (2^L sign patterns)");
    }
    if (element_count < 1) {
        throw config_error("counter-example requires at least one array element");
    }

    const std::uint64_t outcomes = 1ull << paths;
    // Per outcome with signs a, every channel row is identical:
    // g_i[m] = sum_r a_r^2 and the bound row sum is (sum_r a_r)^2, so the
    // (1/M) sum over m cancels exactly. All quantities are small integers
    // held in doubles; the enumeration result is exact.
    double z_sum = 0.0;
    double bound_sum = 0.0;
    std::vector<double> a(paths);
    for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
        for (std::size_t r = 0; r < paths; ++r) {
            a[r] = (mask >> r) & 1ull ? -1.0 : 1.0;
        }
        double g1 = 0.0;
        double g2 = 0.0;
        double row = 0.0;
        for (std::size_t r = 0; r < paths; ++r) {
            g1 += a[r] * a[r];
            g2 += a[r] * a[r];
            row += a[r];
        }
        z_sum += g1 * g2;
        bound_sum += row * row;
    }

    ExactEnumeration e;
    e.mean_z = z_sum / static_cast<double>(outcomes);
    e.bound_rhs = bound_sum / static_cast<double>(outcomes);
    e.outcomes = outcomes;
    return e;
}

double scalar_sign_draw(RngStream& rng) {
    return static_cast<double>(rng.rademacher());
}

std::complex<double> scalar_sign_sample(std::uint64_t master_seed, std::uint64_t trial) {
    const std::uint64_t trial_seed =
        derive_stream_seed(master_seed, "trial:" + std::to_string(trial));
    RngStream rng(trial_seed, "signs");
    return {scalar_sign_draw(rng), 0.0};
}

MeanEstimate scalar_sign_mean_z(std::size_t trials, std::uint64_t master_seed, const RunContext& ctx) {
    if (trials < 2) {
        throw std::invalid_argument("at least two trials are required for a standard error");
    }
    const auto samples = collect_trials<std::complex<double>>(
        trials, ctx, [&](std::size_t n) { return scalar_sign_sample(master_seed, n); });
    return mean_and_se(samples);
}

TailEstimate scalar_sign_tail_probability(double eps, std::size_t trials, std::uint64_t master_seed,
                                          const RunContext& ctx) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("tail_probability: eps must be > 0");
    }
    if (trials < 100) {
        throw std::invalid_argument("tail_probability: at least 100 trials are required");
    }
    const auto magnitudes = collect_trials<double>(trials, ctx, [&](std::size_t n) {
        return std::abs(scalar_sign_sample(master_seed, n));
    });
    std::size_t exceed = 0;
    for (const double mag : magnitudes) {
        if (mag > eps) {
            ++exceed;
        }
    }
    TailEstimate t;
    t.probability = static_cast<double>(exceed) / static_cast<double>(trials);
    t.se = std::sqrt(t.probability * (1.0 - t.probability) / static_cast<double>(trials));
    t.trials = trials;
    return t;
}

}  // namespace fplab
