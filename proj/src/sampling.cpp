#include "rdl/sampling.hpp"

#include <cmath>

#include "rdl/errors.hpp"

namespace rdl {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ComplexMatrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

ComplexMatrix random_hermitian(Index d, Rng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

ComplexMatrix random_unitary(Index d, Rng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < d; ++k) {
    const Complex z = r(k, k);
    if (std::abs(z) > 0) q.col(k) *= z / std::abs(z);
  }
  return q;
}

ComplexMatrix random_density_matrix(Index d, Rng& rng, Index rank) {
  if (d < 1) throw DimensionError("state dimension must be positive");
  if (rank < 1 || rank > d) rank = d;
  const ComplexMatrix g = ginibre(d, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

ComplexMatrix random_pure_state(Index d, Rng& rng) { return random_density_matrix(d, rng, 1); }

}  // namespace rdl
