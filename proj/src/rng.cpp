// SPDX-License-Identifier: Apache-2.0

#include "fplab/rng.hpp"

#include <cmath>
#include <numbers>

namespace fplab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view label) {
    // FNV-1a over the label, folded with the master seed and finished with
    // splitmix64 so nearby (master, label) pairs land far apart.
    std::uint64_t h = 14695981039346656037ull;
    for (const char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return splitmix64(h ^ splitmix64(master));
}

RngStream::RngStream(std::uint64_t seed) {
    // Reference initialization for xoshiro256++: four consecutive
    // splitmix64 outputs, which cannot all be zero.
    std::uint64_t x = seed;
    for (auto& word : state_) {
        word = splitmix64(x);
        x += 0x9E3779B97F4A7C15ull;
    }
}

RngStream::RngStream(std::uint64_t master, std::string_view label)
    : RngStream(derive_stream_seed(master, label)) {}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double RngStream::gaussian() {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> RngStream::complex_gaussian(double variance) {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-variance * std::log(u1));
    return std::polar(radius, 2.0 * std::numbers::pi * u2);
}

int RngStream::rademacher() {
    return (next_u64() & 1ull) ? 1 : -1;
}

std::complex<double> RngStream::unit_phase() {
    return std::polar(1.0, 2.0 * std::numbers::pi * uniform01());
}

}  // namespace fplab
