#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcoh/linalg.hpp"

namespace qcoh {

/// A unit vector in a finite-dimensional complex Hilbert space.
class StateVector {
 public:
  explicit StateVector(CVector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() == 0) throw std::invalid_argument("state vector: empty amplitude list");
    const double norm = amp_.norm();
    if (std::abs(norm - 1.0) > kStructuralTol) {
      throw std::invalid_argument("state vector: norm " + std::to_string(norm) + " is not 1");
    }
  }

  /// Normalizes first; rejects (near-)zero vectors.
  static StateVector normalized(CVector amplitudes) {
    const double norm = amplitudes.norm();
    if (norm < 1e-12) throw std::invalid_argument("state vector: cannot normalize a zero vector");
    return StateVector(amplitudes / norm);
  }

  static StateVector basis_state(int dim, int index) {
    CVector v = CVector::Zero(dim);
    v(index) = 1.0;
    return StateVector(std::move(v));
  }

  int dim() const { return static_cast<int>(amp_.size()); }
  const CVector& amplitudes() const { return amp_; }
  Complex overlap(const StateVector& other) const { return amp_.dot(other.amp_); }

 private:
  CVector amp_;
};

/// Orthogonal projection operator: Hermitian and idempotent within 1e-9.
class Projector {
 public:
  explicit Projector(CMatrix matrix) : m_(std::move(matrix)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
      throw std::invalid_argument("projector: matrix is not square");
    }
    if (!is_hermitian(m_)) throw std::invalid_argument("projector: matrix is not Hermitian");
    if (max_abs(m_ * m_ - m_) > kStructuralTol) {
      throw std::invalid_argument("projector: matrix is not idempotent");
    }
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  int rank() const { return static_cast<int>(std::lround(m_.trace().real())); }

 private:
  CMatrix m_;
};

/// Builds the projector onto the span of mutually orthogonal rays.
inline Projector projector_from_rays(const std::vector<StateVector>& rays) {
  if (rays.empty()) throw std::invalid_argument("projector_from_rays: no rays given");
  const int d = rays.front().dim();
  for (const auto& r : rays) {
    if (r.dim() != d) throw std::invalid_argument("projector_from_rays: mixed dimensions");
  }
  for (std::size_t i = 0; i < rays.size(); ++i) {
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      const double overlap = std::abs(rays[i].overlap(rays[j]));
      if (overlap > kStructuralTol) {
        throw std::invalid_argument("projector_from_rays: rays " + std::to_string(i) + " and " +
                                    std::to_string(j) + " are not orthogonal (|overlap| = " +
                                    std::to_string(overlap) + ")");
      }
    }
  }
  CMatrix p = CMatrix::Zero(d, d);
  for (const auto& r : rays) p += outer(r.amplitudes());
  return Projector(std::move(p));
}

inline bool commute(const Projector& p, const Projector& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("commute: dimension mismatch");
  return max_abs(p.matrix() * q.matrix() - q.matrix() * p.matrix()) <= kStructuralTol;
}

/// Projection Valued Measure: pairwise orthogonal projectors summing to I.
class PVM {
 public:
  PVM(std::vector<Projector> elements, std::vector<std::string> labels)
      : elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.empty()) throw std::invalid_argument("pvm: no elements");
    if (labels_.size() != elements_.size()) throw std::invalid_argument("pvm: label count mismatch");
    const int d = elements_.front().dim();
    CMatrix sum = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (elements_[i].dim() != d) throw std::invalid_argument("pvm: mixed dimensions");
      sum += elements_[i].matrix();
      for (std::size_t j = i + 1; j < elements_.size(); ++j) {
        if (max_abs(elements_[i].matrix() * elements_[j].matrix()) > kStructuralTol) {
          throw std::invalid_argument("pvm: elements " + std::to_string(i) + " and " + std::to_string(j) +
                                      " are not orthogonal");
        }
      }
    }
    if (max_abs(sum - CMatrix::Identity(d, d)) > kStructuralTol) {
      throw std::invalid_argument("pvm: elements do not sum to the identity");
    }
  }

  explicit PVM(std::vector<Projector> elements) : PVM(index_labelled(std::move(elements))) {}

  int dim() const { return elements_.front().dim(); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Projector>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  explicit PVM(std::pair<std::vector<Projector>, std::vector<std::string>> both)
      : PVM(std::move(both.first), std::move(both.second)) {}

  static std::pair<std::vector<Projector>, std::vector<std::string>> index_labelled(std::vector<Projector> els) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < els.size(); ++i) labels.push_back(std::to_string(i));
    return {std::move(els), std::move(labels)};
  }

  std::vector<Projector> elements_;
  std::vector<std::string> labels_;
};

/// Joint fine-graining of two commuting PVMs: the nonzero products
/// Pi_j * Pi'_k, labelled "(j,k)". Coarse-graining the result over either
/// index recovers the corresponding factor.
inline PVM refine(const PVM& a, const PVM& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("refine: dimension mismatch");
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (!commute(a.elements()[j], b.elements()[k])) {
        throw std::invalid_argument("refine: elements " + a.labels()[j] + " and " + b.labels()[k] +
                                    " do not commute; PVMs are not jointly measurable");
      }
    }
  }
  std::vector<Projector> products;
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      CMatrix prod = a.elements()[j].matrix() * b.elements()[k].matrix();
      if (prod.trace().real() < 0.5) continue;  // rank-0 product, dropped
      products.emplace_back(std::move(prod));
      labels.push_back("(" + a.labels()[j] + "," + b.labels()[k] + ")");
    }
  }
  return PVM(std::move(products), std::move(labels));
}

/// Self-adjoint operator; outcome structure comes from spectral_decompose.
class Observable {
 public:
  explicit Observable(CMatrix matrix) : m_(std::move(matrix)) {
    if (!is_hermitian(m_)) throw std::invalid_argument("observable: matrix is not Hermitian");
  }
  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }

 private:
  CMatrix m_;
};

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // sorted descending, degeneracies merged
  PVM pvm;                          // aligned with eigenvalues

  CMatrix reconstruct() const {
    CMatrix m = CMatrix::Zero(pvm.dim(), pvm.dim());
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) m += eigenvalues[i] * pvm.elements()[i].matrix();
    return m;
  }
};

/// Eigenvalues sorted descending; groups closer than the degeneracy gap
/// collapse into a single projector of matching rank. The spectral
/// projectors, not individual eigenvectors, are the meaningful outputs.
inline SpectralDecomposition spectral_decompose(const Observable& obs) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(obs.matrix());
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectral_decompose: eigensolver failed");
  const RVector evals = solver.eigenvalues();  // ascending
  const CMatrix evecs = solver.eigenvectors();
  const int d = obs.dim();

  std::vector<double> merged_values;
  std::vector<Projector> projectors;
  int i = d - 1;
  while (i >= 0) {
    int j = i;
    while (j - 1 >= 0 && evals(j) - evals(j - 1) < kDegeneracyGap) --j;
    CMatrix p = CMatrix::Zero(d, d);
    double sum = 0.0;
    for (int k = j; k <= i; ++k) {
      p += outer(evecs.col(k));
      sum += evals(k);
    }
    merged_values.push_back(sum / static_cast<double>(i - j + 1));
    projectors.emplace_back(std::move(p));
    i = j - 1;
  }
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < projectors.size(); ++k) labels.push_back(std::to_string(k));
  return SpectralDecomposition{std::move(merged_values), PVM(std::move(projectors), std::move(labels))};
}

struct DensityDiagnostic {
  bool ok = false;
  std::vector<std::string> violations;  // each names the condition and its magnitude
};

inline DensityDiagnostic diagnose_density(const CMatrix& m) {
  DensityDiagnostic diag;
  if (m.rows() != m.cols() || m.rows() == 0) {
    diag.violations.push_back("matrix is not square");
    return diag;
  }
  const double herm = max_abs(m - m.adjoint());
  if (herm > kStructuralTol) {
    diag.violations.push_back("not Hermitian: max|M - M^dagger| = " + std::to_string(herm));
  }
  const double trace_dev = std::abs(m.trace().real() - 1.0) + std::abs(m.trace().imag());
  if (trace_dev > kStructuralTol) {
    diag.violations.push_back("trace is not 1: deviation " + std::to_string(trace_dev));
  }
  if (herm <= kStructuralTol) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    const double min_eval = solver.eigenvalues().minCoeff();
    if (min_eval < -kStructuralTol) {
      diag.violations.push_back("negative eigenvalue " + std::to_string(min_eval));
    }
  }
  diag.ok = diag.violations.empty();
  return diag;
}

/// Unit-trace positive semidefinite Hermitian operator.
class DensityOperator {
 public:
  explicit DensityOperator(CMatrix matrix) : m_(std::move(matrix)) {
    const DensityDiagnostic diag = diagnose_density(m_);
    if (!diag.ok) {
      std::string msg = "density operator rejected:";
      for (const auto& v : diag.violations) msg += " [" + v + "]";
      throw std::invalid_argument(msg);
    }
  }

  static DensityOperator pure(const StateVector& psi) { return DensityOperator(outer(psi.amplitudes())); }

  static DensityOperator maximally_mixed(int dim) {
    return DensityOperator(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }

  /// Real spectrum, ascending, with values below -1e-9 impossible by
  /// construction; tiny negatives from roundoff are clamped to zero.
  std::vector<double> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m_);
    std::vector<double> out(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i) out[static_cast<std::size_t>(i)] = std::max(0.0, solver.eigenvalues()(i));
    return out;
  }

 private:
  CMatrix m_;
};

/// Validates a candidate matrix; on failure the diagnostic lists every
/// violated density-operator condition with its magnitude.
struct DensityValidation {
  std::optional<DensityOperator> value;
  DensityDiagnostic diagnostic;
};

inline DensityValidation validate_density(const CMatrix& m) {
  DensityValidation result;
  result.diagnostic = diagnose_density(m);
  if (result.diagnostic.ok) result.value = DensityOperator(m);
  return result;
}

/// Born rule: Tr[P rho], clamped to [0,1].
inline double born(const Projector& p, const DensityOperator& rho) {
  if (p.dim() != rho.dim()) throw std::invalid_argument("born: dimension mismatch");
  const double value = (p.matrix() * rho.matrix()).trace().real();
  if (value < -kStructuralTol || value > 1.0 + kStructuralTol) {
    throw std::runtime_error("born: probability " + std::to_string(value) + " outside [0,1] tolerance band");
  }
  return std::min(1.0, std::max(0.0, value));
}

}  // namespace qcoh
