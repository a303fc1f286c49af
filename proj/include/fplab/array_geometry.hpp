// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <armadillo>
#include <array>
#include <cstddef>
#include <vector>

namespace fplab {

enum class GeometryKind {
    UniformLinear,
    UniformPlanar,
    ExplicitPositions,
};

// Antenna array layout. Spacings and positions are in wavelengths, so no
// carrier frequency appears anywhere in the phase model.
struct ArrayGeometry {
    GeometryKind kind = GeometryKind::UniformLinear;
    std::size_t element_count = 0;
    double spacing_h = 0.5;
    double spacing_v = 0.5;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::array<double, 3>> positions;

    static ArrayGeometry uniform_linear(std::size_t elements, double spacing = 0.5);
    static ArrayGeometry uniform_planar(std::size_t rows, std::size_t cols,
                                        double spacing_h = 0.5, double spacing_v = 0.5);
    static ArrayGeometry explicit_positions(std::vector<std::array<double, 3>> positions);

    // Throws config_error on an inconsistent layout.
    void validate() const;
};

// Steering matrix W (element_count x path_count). Columns are steering
// vectors with unit-modulus entries, so every column norm^2 equals the
// element count. `synthetic` flags matrices that do not come from a
// propagation geometry (the coupled counter-example construction).
struct SteeringMatrix {
    arma::cx_mat entries;
    std::vector<double> aoas;
    bool synthetic = false;
};

// Steering vector for one arriving path. Angles are radians; elevation is
// ignored by linear arrays and defaults to broadside. Azimuth and
// elevation must lie in [-pi/2, pi/2].
arma::cx_vec steering_vector(const ArrayGeometry& geometry, double azimuth, double elevation = 0.0);

// Stacks steering vectors for a list of azimuth angles (elevation
// broadside). Requires at least one angle.
SteeringMatrix steering_matrix(const ArrayGeometry& geometry, const std::vector<double>& aoas);

struct NormalizationReport {
    std::vector<double> deviations;  // per column: |norm^2 - M| / M
    double max_deviation = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Checks the per-column norm convention norm(w)^2 = element count.
NormalizationReport check_normalization(const SteeringMatrix& w, double tol = 1e-9);

}  // namespace fplab
