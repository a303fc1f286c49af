// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace fplab {

// Neumaier-compensated accumulator. Callers feed values in a fixed order
// (trial index order), which keeps every reported statistic bit-identical
// across thread counts.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplexSum {
  public:
    void add(std::complex<double> x) {
        re_.add(x.real());
        im_.add(x.imag());
    }

    std::complex<double> value() const { return {re_.value(), im_.value()}; }

  private:
    CompensatedSum re_;
    CompensatedSum im_;
};

// Monte Carlo estimate of a complex mean with per-component standard
// errors (sample standard deviation / sqrt(trials)).
struct MeanEstimate {
    std::complex<double> value{0.0, 0.0};
    double se_re = 0.0;
    double se_im = 0.0;
    std::size_t trials = 0;

    double se_max() const { return se_re > se_im ? se_re : se_im; }
};

// Two-pass compensated mean and standard errors. Requires at least two
// samples; accumulation order is the order of the span.
MeanEstimate mean_and_se(std::span<const std::complex<double>> samples);

// Compensated dot product conj(a) . b over equal-length ranges.
std::complex<double> dot_conj(std::span<const std::complex<double>> a,
                              std::span<const std::complex<double>> b);

}  // namespace fplab
