#pragma once

#include <Eigen/Dense>

#include <complex>

namespace qcoh {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Structural checks (hermiticity, idempotence, orthogonality) use 1e-9;
// composite identities built from several operations get 1e-8.
inline constexpr double kStructuralTol = 1e-9;
inline constexpr double kCompositeTol = 1e-8;
inline constexpr double kDegeneracyGap = 1e-8;

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const CMatrix& m, double tol = kStructuralTol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

inline CMatrix outer(const CVector& v) { return v * v.adjoint(); }

}  // namespace qcoh
