// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "fplab/rng.hpp"

using namespace fplab;

TEST_CASE("stream seed derivation is a pure function of master and label") {
    CHECK(derive_stream_seed(0, "trial:0") == derive_stream_seed(0, "trial:0"));
    CHECK(derive_stream_seed(0, "trial:0") != derive_stream_seed(0, "trial:1"));
    CHECK(derive_stream_seed(0, "trial:0") != derive_stream_seed(1, "trial:0"));
    CHECK(derive_stream_seed(42, "aoa") != derive_stream_seed(42, "gains"));
}

TEST_CASE("stream seed derivation values are frozen") {
    // Golden values: any change here silently invalidates every stored
    // result, so the derivation is pinned exactly.
    CHECK(derive_stream_seed(0, "trial:0") == 7885148300700959947ULL);
    CHECK(derive_stream_seed(42, "aoa") == 1112376508773380421ULL);
    CHECK(derive_stream_seed(42, "gains") == 6465286011512562360ULL);
}

TEST_CASE("draw primitives are frozen for a pinned seed") {
    RngStream s(12345);
    CHECK(s.next_u64() == 10201931350592234856ULL);
    CHECK(s.next_u64() == 3780764549115216544ULL);
    CHECK(s.uniform01() == 0.085123240226364527);
    CHECK(s.gaussian() == -0.060854795023789127);
    const auto c = s.complex_gaussian(1.0);
    CHECK(c.real() == 0.11196562259344481);
    CHECK(c.imag() == 1.1316654537556203);
    CHECK(s.rademacher() == -1);
    CHECK(s.rademacher() == 1);
    CHECK(s.rademacher() == -1);
    CHECK(s.rademacher() == -1);
    const auto p = s.unit_phase();
    CHECK(p.real() == 0.37570774798005929);
    CHECK(p.imag() == 0.92673819825652615);
}

TEST_CASE("same seed reproduces the same sequence") {
    RngStream a(987654321);
    RngStream b(987654321);
    for (int j = 0; j < 100; ++j) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("labelled constructor matches explicit derivation") {
    RngStream a(derive_stream_seed(77, "gains"));
    RngStream b(77, "gains");
    for (int j = 0; j < 10; ++j) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("uniform01 lies in the half-open unit interval with mean one half") {
    RngStream s(1);
    double sum = 0.0;
    const int n = 100000;
    for (int j = 0; j < n; ++j) {
        const double u = s.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("uniform range respects its bounds") {
    RngStream s(2);
    for (int j = 0; j < 1000; ++j) {
        const double x = s.uniform(-1.5, 2.5);
        REQUIRE(x >= -1.5);
        REQUIRE(x < 2.5);
    }
}

TEST_CASE("gaussian has zero mean and unit variance") {
    RngStream s(3);
    long double sum = 0.0L;
    long double sq = 0.0L;
    const int n = 100000;
    for (int j = 0; j < n; ++j) {
        const double g = s.gaussian();
        sum += g;
        sq += static_cast<long double>(g) * g;
    }
    const double mean = static_cast<double>(sum / n);
    const double var = static_cast<double>(sq / n) - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("complex gaussian second moment matches the requested variance") {
    RngStream s(4);
    long double power = 0.0L;
    long double re = 0.0L;
    long double im = 0.0L;
    const int n = 50000;
    for (int j = 0; j < n; ++j) {
        const auto x = s.complex_gaussian(2.5);
        power += std::norm(std::complex<long double>(x.real(), x.imag()));
        re += x.real();
        im += x.imag();
    }
    CHECK(std::abs(static_cast<double>(power / n) - 2.5) < 0.05);
    CHECK(std::abs(static_cast<double>(re / n)) < 0.03);
    CHECK(std::abs(static_cast<double>(im / n)) < 0.03);
}

TEST_CASE("complex gaussian variance scaling is an exact exponent shift") {
    RngStream a(555);
    RngStream b(555);
    for (int j = 0; j < 100; ++j) {
        const auto x = a.complex_gaussian(1.0);
        const auto y = b.complex_gaussian(4.0);
        CHECK(y.real() == 2.0 * x.real());
        CHECK(y.imag() == 2.0 * x.imag());
    }
}

TEST_CASE("rademacher draws only plus and minus one, roughly balanced") {
    RngStream s(5);
    int pos = 0;
    const int n = 100000;
    for (int j = 0; j < n; ++j) {
        const int r = s.rademacher();
        REQUIRE((r == 1 || r == -1));
        pos += (r == 1);
    }
    CHECK(std::abs(pos - n / 2) < 4 * std::sqrt(n / 4.0));
}

TEST_CASE("unit phase draws lie on the unit circle") {
    RngStream s(6);
    for (int j = 0; j < 1000; ++j) {
        CHECK(std::abs(std::abs(s.unit_phase()) - 1.0) < 1e-15);
    }
}

TEST_CASE("distinct labels give uncorrelated-looking streams") {
    RngStream a(9000, "aoa");
    RngStream b(9000, "gains");
    std::set<std::uint64_t> seen;
    int collisions = 0;
    for (int j = 0; j < 1000; ++j) {
        seen.insert(a.next_u64());
    }
    for (int j = 0; j < 1000; ++j) {
        collisions += seen.contains(b.next_u64());
    }
    CHECK(collisions == 0);
}
