#pragma once

#include <cstddef>
#include <random>

#include "qtherm/equilibrium.hpp"
#include "qtherm/spectral.hpp"

namespace qtherm {

using Rng = std::mt19937_64;

/// Haar-like unitary: Gram-Schmidt (QR) of a complex Gaussian matrix with phases fixed.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

/// Hermitian matrix with independent complex Gaussian entries (GUE-like), scaled by `scale`.
HermitianOperator random_hermitian(std::size_t dim, Rng& rng, double scale = 1.0);

/// Squared-Gaussian spectrum, normalized, conjugated by a random unitary.
DensityOperator random_density(std::size_t dim, Rng& rng);

/// Random normalized pure state.
Eigen::VectorXcd random_state(std::size_t dim, Rng& rng);

}  // namespace qtherm
