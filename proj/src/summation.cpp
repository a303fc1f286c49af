// SPDX-License-Identifier: Apache-2.0

#include "fplab/summation.hpp"

#include <stdexcept>

namespace fplab {

MeanEstimate mean_and_se(std::span<const std::complex<double>> samples) {
    const std::size_t n = samples.size();
    if (n < 2) {
        throw std::invalid_argument("mean_and_se: at least two samples are required for a standard error");
    }

    CompensatedComplexSum sum;
    for (const auto& x : samples) {
        sum.add(x);
    }
    const std::complex<double> mean = sum.value() / static_cast<double>(n);

    CompensatedSum ss_re;
    CompensatedSum ss_im;
    for (const auto& x : samples) {
        const double dre = x.real() - mean.real();
        const double dim = x.imag() - mean.imag();
        ss_re.add(dre * dre);
        ss_im.add(dim * dim);
    }
    const double denom = static_cast<double>(n) * static_cast<double>(n - 1);

    MeanEstimate est;
    est.value = mean;
    est.se_re = std::sqrt(ss_re.value() / denom);
    est.se_im = std::sqrt(ss_im.value() / denom);
    est.trials = n;
    return est;
}

std::complex<double> dot_conj(std::span<const std::complex<double>> a,
                              std::span<const std::complex<double>> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot_conj: ranges must have equal length");
    }
    CompensatedComplexSum sum;
    for (std::size_t m = 0; m < a.size(); ++m) {
        sum.add(std::conj(a[m]) * b[m]);
    }
    return sum.value();
}

}  // namespace fplab
