// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace fplab {

// Invalid experiment or model configuration: bad geometry, unknown model
// name, out-of-range parameter. The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A statistical hypothesis required by an estimator does not hold for the
// ensemble or for the sampled data, e.g. coupled steering/gain matrices
// passed to the mean decomposition, or a sampled gain magnitude exceeding
// the amplitude bound an estimator was told to assume.
class hypothesis_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace fplab
