#pragma once

#include <cstdint>
#include <random>

#include "rdl/types.hpp"

namespace rdl {

/// All sampling paths take an explicit seed; there is no entropy default.
using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// Complex matrix with i.i.d. standard normal real and imaginary parts.
ComplexMatrix ginibre(Index rows, Index cols, Rng& rng);

ComplexMatrix random_hermitian(Index d, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with the R-diagonal
/// phases divided out).
ComplexMatrix random_unitary(Index d, Rng& rng);

/// G G^dagger / tr(G G^dagger) with G a d x rank Ginibre matrix.
ComplexMatrix random_density_matrix(Index d, Rng& rng, Index rank = -1);

ComplexMatrix random_pure_state(Index d, Rng& rng);

}  // namespace rdl
