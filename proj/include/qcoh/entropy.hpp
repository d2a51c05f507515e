#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcoh/hilbert.hpp"
#include "qcoh/random.hpp"

namespace qcoh {

enum class LogBase { E, Two };

/// A finite probability distribution. Entries below zero by at most 1e-12
/// are clamped; anything worse, or a sum off 1 by more than 1e-9, is
/// rejected.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.empty()) throw std::invalid_argument("distribution: empty");
    double sum = 0.0;
    for (double& p : p_) {
      if (p < -1e-12) throw std::invalid_argument("distribution: negative probability " + std::to_string(p));
      p = std::max(0.0, p);
      sum += p;
    }
    if (std::abs(sum - 1.0) > kStructuralTol) {
      throw std::invalid_argument("distribution: probabilities sum to " + std::to_string(sum));
    }
  }

  const std::vector<double>& probs() const { return p_; }
  std::size_t size() const { return p_.size(); }

 private:
  std::vector<double> p_;
};

/// -sum p log p, with 0 log 0 = 0. Natural log internally; base two is the
/// exact division by ln 2.
inline double shannon(const Distribution& dist, LogBase base = LogBase::E) {
  double h = 0.0;
  for (double p : dist.probs()) {
    if (p > 1e-12) h -= p * std::log(p);
  }
  h = std::max(0.0, h);
  return base == LogBase::Two ? h / std::log(2.0) : h;
}

/// von Neumann entropy -Tr[rho log rho]: the Shannon entropy of the spectrum.
inline double von_neumann(const DensityOperator& rho, LogBase base = LogBase::E) {
  return shannon(Distribution(rho.eigenvalues()), base);
}

/// Born probabilities of rho in a measurement basis.
inline std::vector<double> born_probabilities(const DensityOperator& rho, const std::vector<StateVector>& basis) {
  std::vector<double> probs;
  probs.reserve(basis.size());
  for (const auto& b : basis) {
    const CVector& v = b.amplitudes();
    probs.push_back(std::max(0.0, (v.adjoint() * rho.matrix() * v)(0, 0).real()));
  }
  return probs;
}

struct MinContextEntropy {
  double value = 0.0;                   // nats
  std::vector<StateVector> argmin_basis;
  int argmin_index = 0;                 // 0 = the eigenbasis
  bool at_eigenbasis = true;
  int bases_examined = 0;
};

/// Minimizes the Shannon entropy of Born probabilities over measurement
/// bases: the eigenbasis of rho plus n_samples Haar-random bases. The
/// eigenbasis attains the global minimum, which equals the von Neumann
/// entropy, so the sampled bases serve as witnesses of that claim.
inline MinContextEntropy min_context_entropy(const DensityOperator& rho, int n_samples, std::uint64_t seed,
                                             LogBase base = LogBase::E) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix());
  std::vector<StateVector> eigenbasis;
  for (int i = 0; i < rho.dim(); ++i) eigenbasis.push_back(StateVector::normalized(solver.eigenvectors().col(i)));

  MinContextEntropy result;
  result.value = shannon(Distribution(born_probabilities(rho, eigenbasis)), base);
  result.argmin_basis = eigenbasis;
  result.argmin_index = 0;
  result.bases_examined = 1;

  Rng rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    std::vector<StateVector> basis = haar_basis(rho.dim(), rng);
    const double h = shannon(Distribution(born_probabilities(rho, basis)), base);
    ++result.bases_examined;
    if (h < result.value) {
      result.value = h;
      result.argmin_basis = std::move(basis);
      result.argmin_index = s + 1;
      result.at_eigenbasis = false;
    }
  }
  return result;
}

}  // namespace qcoh
