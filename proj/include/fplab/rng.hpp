// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string_view>

namespace fplab {

// Derives a child seed from a master seed and a stream label such as
// "trial:17", "aoa" or "gains". Pure function of its inputs, so every
// draw in a run is addressable by (master seed, label path) and results
// do not depend on evaluation order or thread schedule.
std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view label);

// Seeded random stream exposing the draw primitives the ensembles use.
// The generator is xoshiro256++ with splitmix64 state initialization;
// distributions are generated from explicit Box-Muller / inversion forms
// rather than std::*_distribution. Both choices keep a given seed's
// values identical on every platform and make stream construction cheap
// enough to open two fresh streams per Monte Carlo trial.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);
    RngStream(std::uint64_t master, std::string_view label);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01();

    // Uniform on [lo, hi).
    double uniform(double lo, double hi);

    // Standard normal.
    double gaussian();

    // Circularly symmetric complex Gaussian with E{|x|^2} = variance.
    std::complex<double> complex_gaussian(double variance);

    // +1 or -1 with equal probability.
    int rademacher();

    // Unit-modulus value with phase uniform on [0, 2*pi).
    std::complex<double> unit_phase();

  private:
    std::array<std::uint64_t, 4> state_;
};

}  // namespace fplab
