#pragma once

#include <random>
#include <vector>

#include "qcoh/hilbert.hpp"
#include "qcoh/linalg.hpp"

namespace qcoh {

using Rng = std::mt19937_64;

inline CVector gaussian_vector(int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v;
}

inline StateVector random_state(int dim, Rng& rng) { return StateVector::normalized(gaussian_vector(dim, rng)); }

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phase convention fixed by the sign of R's diagonal.
inline CMatrix haar_unitary(int dim, Rng& rng) {
  CMatrix g(dim, dim);
  for (int c = 0; c < dim; ++c) g.col(c) = gaussian_vector(dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const Complex diag = r(c, c);
    const double mag = std::abs(diag);
    q.col(c) *= (mag > 0) ? diag / mag : Complex(1.0, 0.0);
  }
  return q;
}

inline std::vector<StateVector> haar_basis(int dim, Rng& rng) {
  const CMatrix u = haar_unitary(dim, rng);
  std::vector<StateVector> basis;
  basis.reserve(static_cast<std::size_t>(dim));
  for (int c = 0; c < dim; ++c) basis.push_back(StateVector::normalized(u.col(c)));
  return basis;
}

/// Hilbert-Schmidt ensemble: G G^dagger normalized to unit trace.
inline DensityOperator random_density(int dim, Rng& rng) {
  CMatrix g(dim, dim);
  for (int c = 0; c < dim; ++c) g.col(c) = gaussian_vector(dim, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()) / 2.0;  // scrub asymmetric roundoff
  return DensityOperator(std::move(rho));
}

}  // namespace qcoh
