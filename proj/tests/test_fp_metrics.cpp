// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fplab/errors.hpp"
#include "fplab/fp_metrics.hpp"
#include "oracles.hpp"

using namespace fplab;

namespace {

ChannelEnsemble iid_ensemble(std::size_t elements = 16) {
    ChannelEnsemble e;
    e.geometry = ArrayGeometry::uniform_linear(elements, 0.5);
    e.paths = 4;
    e.users = 2;
    e.aoa_model = AoaModel::FixedList;
    e.fixed_aoas = {-0.4, -0.1, 0.2, 0.5};
    e.gain_model = GainModel::IidComplexGaussian;
    e.coupling = Coupling::Independent;
    return e;
}

ChannelEnsemble counterexample_ensemble(std::size_t paths, std::size_t elements) {
    ChannelEnsemble e;
    e.geometry = ArrayGeometry::uniform_linear(elements, 0.5);
    e.paths = paths;
    e.users = 2;
    e.aoa_model = AoaModel::UniformRandom;
    e.gain_model = GainModel::Counterexample;
    e.coupling = Coupling::CounterexampleCoupled;
    return e;
}

}  // namespace

TEST_CASE("inner product matches a long double oracle") {
    const ChannelEnsemble e = iid_ensemble(64);
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
        const ChannelSample s = sample_channel(e, 1000, trial);
        const auto got = inner_product_z(s.channel, 0, 1);
        const auto ref = oracle::inner_product_z(s.channel, 0, 1);
        CHECK(std::abs(got - ref) < 1e-13 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("inner product is conjugate symmetric bit for bit") {
    const ChannelEnsemble e = iid_ensemble(128);
    const ChannelSample s = sample_channel(e, 1001, 0);
    const auto ik = inner_product_z(s.channel, 0, 1);
    const auto ki = inner_product_z(s.channel, 1, 0);
    CHECK(ik.real() == ki.real());
    CHECK(ik.imag() == -ki.imag());
}

TEST_CASE("inner product of a user with itself is its real channel energy") {
    const ChannelEnsemble e = iid_ensemble(32);
    const ChannelSample s = sample_channel(e, 1002, 0);
    const auto z = inner_product_z(s.channel, 1, 1);
    CHECK(z.imag() == 0.0);
    CHECK(z.real() > 0.0);
}

TEST_CASE("inner product validates its user indexes") {
    const ChannelEnsemble e = iid_ensemble(8);
    const ChannelSample s = sample_channel(e, 1003, 0);
    CHECK_THROWS_AS(inner_product_z(s.channel, 0, 2), std::out_of_range);
    CHECK_THROWS_AS(inner_product_z(s.channel, 7, 0), std::out_of_range);
}

TEST_CASE("mean inner product statistics require distinct users and enough trials") {
    const ChannelEnsemble e = iid_ensemble(8);
    CHECK_THROWS_AS(estimate_mean_z(e, 0, 0, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_mean_z(e, 0, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("mean inner product equals the mean of per-trial inner products") {
    const ChannelEnsemble e = iid_ensemble(16);
    const std::size_t trials = 400;
    const std::uint64_t seed = 1004;
    const MeanEstimate got = estimate_mean_z(e, 0, 1, trials, seed);

    std::vector<std::complex<double>> zs(trials);
    for (std::size_t n = 0; n < trials; ++n) {
        zs[n] = inner_product_z(sample_channel(e, seed, n).channel, 0, 1);
    }
    const MeanEstimate ref = mean_and_se(zs);
    CHECK(got.value == ref.value);
    CHECK(got.se_re == ref.se_re);
    CHECK(got.se_im == ref.se_im);
    CHECK(got.trials == trials);
}

TEST_CASE("thread count does not change the mean estimate") {
    const ChannelEnsemble e = iid_ensemble(16);
    RunContext one{1};
    RunContext three{3};
    const MeanEstimate a = estimate_mean_z(e, 0, 1, 500, 1005, one);
    const MeanEstimate b = estimate_mean_z(e, 0, 1, 500, 1005, three);
    CHECK(a.value == b.value);
    CHECK(a.se_re == b.se_re);
    CHECK(a.se_im == b.se_im);
}

TEST_CASE("fixed angle cross-terms are deterministic and match the closed form") {
    const ChannelEnsemble e = iid_ensemble(64);
    const CrossTermEstimate t01 = steering_cross_term(e, 0, 1, 100, 1006);
    CHECK(t01.deterministic);
    CHECK(t01.value.trials == 1);
    CHECK(t01.value.se_re == 0.0);
    CHECK(t01.value.se_im == 0.0);
    const auto ref = oracle::ula_cross_term_closed_form(64, 0.5, -0.4, -0.1);
    CHECK(std::abs(t01.value.value - ref) < 1e-12);
}

TEST_CASE("diagonal cross-terms equal one for every array size") {
    for (std::size_t m_count : {1, 4, 64, 4096}) {
        const ChannelEnsemble e = iid_ensemble(m_count);
        for (std::size_t r = 0; r < e.paths; ++r) {
            const CrossTermEstimate t = steering_cross_term(e, r, r, 10, 1007);
            CHECK(std::abs(t.value.value - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("random angle cross-terms carry Monte Carlo spread") {
    ChannelEnsemble e = iid_ensemble(16);
    e.aoa_model = AoaModel::UniformRandom;
    e.fixed_aoas.clear();
    const CrossTermEstimate t = steering_cross_term(e, 0, 1, 300, 1008);
    CHECK_FALSE(t.deterministic);
    CHECK(t.value.trials == 300);
    CHECK(t.value.se_re > 0.0);
}

TEST_CASE("cross-term table agrees with pairwise estimates and is Hermitian") {
    ChannelEnsemble e = iid_ensemble(32);
    const CrossTermTable table = steering_cross_term_table(e, 10, 1009);
    REQUIRE(table.values.n_rows == 4);
    REQUIRE(table.values.n_cols == 4);
    CHECK(table.deterministic);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t s = 0; s < 4; ++s) {
            const CrossTermEstimate t = steering_cross_term(e, r, s, 10, 1009);
            CHECK(table.values(r, s) == t.value.value);
            CHECK(table.values(r, s) == std::conj(table.values(s, r)));
        }
        CHECK(std::abs(table.values(r, r) - 1.0) <= 1e-12);
    }
}

TEST_CASE("decomposition total reproduces the mean on the same samples") {
    const ChannelEnsemble e = iid_ensemble(16);
    const std::size_t trials = 2000;
    const std::uint64_t seed = 1010;
    const Decomposition d = decompose_mean_z(e, 0, 1, trials, seed);
    const MeanEstimate mean = estimate_mean_z(e, 0, 1, trials, seed);
    const double denom = std::max({1.0, std::abs(d.total), std::abs(mean.value)});
    CHECK(std::abs(d.total - mean.value) / denom <= 1e-12);
    CHECK(std::abs(d.total - (d.diag_part.value + d.offdiag_part.value)) <= 1e-15);
}

TEST_CASE("decomposition refuses coupled ensembles") {
    const ChannelEnsemble e = counterexample_ensemble(3, 8);
    CHECK_THROWS_AS(decompose_mean_z(e, 0, 1, 100, 1011), hypothesis_error);
}

TEST_CASE("single path decomposition has exactly zero cross-path part") {
    ChannelEnsemble e = iid_ensemble(16);
    e.paths = 1;
    e.fixed_aoas = {0.3};
    const Decomposition d = decompose_mean_z(e, 0, 1, 200, 1012);
    CHECK(d.offdiag_part.value == std::complex<double>(0.0, 0.0));
    CHECK(d.offdiag_part.se_re == 0.0);
    CHECK(d.offdiag_part.se_im == 0.0);
}

TEST_CASE("iid gains give a same-path part consistent with zero") {
    const ChannelEnsemble e = iid_ensemble(16);
    const Decomposition d = decompose_mean_z(e, 0, 1, 20000, 1013);
    CHECK(std::abs(d.diag_part.value) <= 4 * d.diag_part.se_max());
}

TEST_CASE("per-path user correlation puts the path count times the moment in the same-path part") {
    // Correlated-user gains with |u| != |v| have per-path cross-moment
    // (|u|^2 - |v|^2)/2 = 0.375, so the same-path part approaches
    // L * 0.375 = 1.5 independent of the element count.
    for (std::size_t elements : {16, 256}) {
        ChannelEnsemble e = iid_ensemble(elements);
        e.gain_model = GainModel::CorrelatedUsers;
        e.common_weights.assign(4, {1.0, 0.0});
        e.differential_weights.assign(4, {0.5, 0.0});
        const Decomposition d = decompose_mean_z(e, 0, 1, 20000, 1014);
        CHECK(std::abs(d.diag_part.value - std::complex<double>(1.5, 0.0)) <=
              4 * d.diag_part.se_max());
    }
}

TEST_CASE("bound side of the coupled ensemble averages to the path count") {
    // Per draw the bound side is |sum of signs|^2, so it fluctuates; its
    // mean is the path count and its imaginary part cancels exactly.
    const ChannelEnsemble e = counterexample_ensemble(3, 8);
    const BoundEstimate b = bound_rhs_21(e, 1.0, 400, 1015);
    CHECK(std::abs(b.value.value.real() - 3.0) <= 4 * b.value.se_re);
    CHECK(b.value.se_re > 0.0);
    CHECK(b.value.value.imag() == 0.0);
    CHECK(b.value.se_im == 0.0);
    CHECK(b.c_alpha == 1.0);
}

TEST_CASE("bound estimator rejects amplitudes above the stated cap") {
    const ChannelEnsemble e = iid_ensemble(8);
    // Gaussian gains exceed any unit cap almost surely across 200 draws.
    CHECK_THROWS_AS(bound_rhs_21(e, 1.0, 200, 1016), hypothesis_error);
}

TEST_CASE("single path bound is the squared amplitude cap exactly") {
    ChannelEnsemble e = iid_ensemble(16);
    e.paths = 1;
    e.fixed_aoas = {0.2};
    e.gain_model = GainModel::Rademacher;
    const BoundEstimate b = bound_rhs_21(e, 2.0, 50, 1017);
    CHECK(b.value.value.real() == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(b.value.value.imag() == 0.0);
    CHECK(b.value.se_re <= 1e-13);
}

TEST_CASE("bound side is real even for random angles") {
    // The double path sum pairs (r, s) with (s, r), so imaginary parts
    // cancel exactly; a complex ordering never actually materializes.
    ChannelEnsemble e = iid_ensemble(16);
    e.aoa_model = AoaModel::UniformRandom;
    e.fixed_aoas.clear();
    e.gain_model = GainModel::Rademacher;
    const BoundEstimate b = bound_rhs_21(e, 1.0, 300, 1018);
    CHECK(std::abs(b.value.value.imag()) <= 1e-13);
    CHECK(b.value.se_im <= 1e-13);
    // The same-path slice alone is the path count on average, pinned at
    // its exact value by the norm convention.
    CHECK(b.same_path_part.value.real() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(b.same_path_part.se_re <= 1e-12);
}

TEST_CASE("mean scale covariance is exact for fixed gain matrices") {
    ChannelEnsemble e = iid_ensemble(16);
    e.gain_model = GainModel::FixedMatrix;
    e.fixed_gains = arma::cx_mat(4, 2);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t i = 0; i < 2; ++i) {
            e.fixed_gains(r, i) = {0.3 * static_cast<double>(r + 1),
                                   -0.2 * static_cast<double>(i + 1)};
        }
    }
    ChannelEnsemble scaled = e;
    scaled.fixed_gains = 2.0 * e.fixed_gains;
    const MeanEstimate base = estimate_mean_z(e, 0, 1, 2, 1019);
    const MeanEstimate four = estimate_mean_z(scaled, 0, 1, 2, 1019);
    CHECK(four.value.real() == 4.0 * base.value.real());
    CHECK(four.value.imag() == 4.0 * base.value.imag());
}

TEST_CASE("mean scale covariance holds exactly for seeded gaussian gains") {
    ChannelEnsemble e = iid_ensemble(16);
    ChannelEnsemble scaled = e;
    scaled.iid_variance = 4.0;
    const MeanEstimate base = estimate_mean_z(e, 0, 1, 300, 1020);
    const MeanEstimate four = estimate_mean_z(scaled, 0, 1, 300, 1020);
    // Doubling every gain multiplies each sampled z by exactly 4, an
    // exponent shift, so even the Monte Carlo estimates scale exactly.
    CHECK(four.value.real() == 4.0 * base.value.real());
    CHECK(four.value.imag() == 4.0 * base.value.imag());
}

TEST_CASE("cosine similarity analytic cases") {
    const std::vector<double> ones4 = {1.0, 1.0, 1.0, 1.0};
    const std::vector<double> twos4 = {2.0, 2.0, 2.0, 2.0};
    CHECK(cosine_similarity(ones4, twos4) == doctest::Approx(1.0).epsilon(1e-15));

    const std::vector<double> e1 = {1.0, 0.0};
    const std::vector<double> e2 = {0.0, 1.0};
    CHECK(cosine_similarity(e1, e2) == 0.0);

    const std::vector<double> diag = {1.0, 1.0};
    CHECK(cosine_similarity(e1, diag) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

    const std::vector<double> anti = {1.0, -1.0};
    CHECK(cosine_similarity(diag, anti) == 0.0);
}

TEST_CASE("cosine similarity validates its inputs and stays in range") {
    const std::vector<double> a = {1.0, 2.0};
    const std::vector<double> zero = {0.0, 0.0};
    const std::vector<double> three = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(cosine_similarity(a, zero), std::invalid_argument);
    CHECK_THROWS_AS(cosine_similarity(a, three), std::invalid_argument);
    CHECK_THROWS_AS(cosine_similarity(std::vector<double>{}, std::vector<double>{}),
                    std::invalid_argument);

    const std::vector<double> big = {1e308, 1e307};
    CHECK(cosine_similarity(big, big) <= 1.0);
    CHECK(cosine_similarity(big, big) >= -1.0);
}

TEST_CASE("full report wires its optional sections by ensemble type") {
    const ChannelEnsemble iid = iid_ensemble(16);
    const FPReport r1 = make_fp_report(iid, 0, 1, 200, 1021);
    CHECK(r1.has_decomposition);
    CHECK_FALSE(r1.has_bound);  // gaussian gains have no finite amplitude cap
    CHECK(r1.trials == 200);

    ChannelEnsemble rad = iid_ensemble(16);
    rad.gain_model = GainModel::Rademacher;
    const FPReport r2 = make_fp_report(rad, 0, 1, 200, 1022);
    CHECK(r2.has_decomposition);
    CHECK(r2.has_bound);
    CHECK(r2.bound.c_alpha == 1.0);

    const ChannelEnsemble ce = counterexample_ensemble(2, 8);
    const FPReport r3 = make_fp_report(ce, 0, 1, 200, 1023);
    CHECK_FALSE(r3.has_decomposition);
    CHECK(r3.has_bound);
    CHECK(r3.mean_z.value == std::complex<double>(4.0, 0.0));
}
