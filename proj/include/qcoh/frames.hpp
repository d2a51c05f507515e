#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcoh/events.hpp"
#include "qcoh/hilbert.hpp"
#include "qcoh/linalg.hpp"

namespace qcoh {

/// A betting context generated by an orthonormal basis: its sample space's
/// atoms are the basis elements, and every event maps to the projector onto
/// the span of its members.
class QuantumContext {
 public:
  QuantumContext(std::string id, std::vector<StateVector> basis, std::vector<std::string> labels = {})
      : id_(std::move(id)), basis_(std::move(basis)) {
    if (basis_.empty()) throw std::invalid_argument("quantum context: empty basis");
    const int d = basis_.front().dim();
    if (static_cast<int>(basis_.size()) != d) {
      throw std::invalid_argument("quantum context \"" + id_ + "\": basis has " +
                                  std::to_string(basis_.size()) + " vectors but dimension is " +
                                  std::to_string(d) + " (incomplete or overcomplete)");
    }
    CMatrix sum = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i].dim() != d) throw std::invalid_argument("quantum context: mixed dimensions");
      for (std::size_t j = i + 1; j < basis_.size(); ++j) {
        const double overlap = std::abs(basis_[i].overlap(basis_[j]));
        if (overlap > kStructuralTol) {
          throw std::invalid_argument("quantum context \"" + id_ + "\": basis vectors " + std::to_string(i) +
                                      " and " + std::to_string(j) + " are not orthogonal (|overlap| = " +
                                      std::to_string(overlap) + ")");
        }
      }
      atom_projectors_.emplace_back(outer(basis_[i].amplitudes()));
      sum += atom_projectors_.back().matrix();
    }
    if (max_abs(sum - CMatrix::Identity(d, d)) > kCompositeTol) {
      throw std::invalid_argument("quantum context \"" + id_ + "\": atom projectors do not resolve the identity");
    }
    if (labels.empty()) {
      for (int i = 0; i < d; ++i) labels.push_back(std::to_string(i));
    }
    if (static_cast<int>(labels.size()) != d) {
      throw std::invalid_argument("quantum context \"" + id_ + "\": label count mismatch");
    }
    space_ = make_space(std::move(labels));
  }

  const std::string& id() const { return id_; }
  int dim() const { return basis_.front().dim(); }
  const std::vector<StateVector>& basis() const { return basis_; }
  const SpacePtr& space() const { return space_; }
  const Projector& atom_projector(int atom) const { return atom_projectors_.at(static_cast<std::size_t>(atom)); }

  CMatrix event_projector(const Event& event) const {
    if (event.space().get() != space_.get()) {
      throw std::invalid_argument("quantum context \"" + id_ + "\": event from a foreign space");
    }
    CMatrix p = CMatrix::Zero(dim(), dim());
    for (int m : event.members()) p += atom_projectors_[static_cast<std::size_t>(m)].matrix();
    return p;
  }

 private:
  std::string id_;
  std::vector<StateVector> basis_;
  std::vector<Projector> atom_projectors_;
  SpacePtr space_;
};

inline QuantumContext context_from_basis(std::string id, std::vector<StateVector> basis,
                                         std::vector<std::string> labels = {}) {
  return QuantumContext(std::move(id), std::move(basis), std::move(labels));
}

/// Per-context probability assignments over a family of quantum contexts.
/// Only atom-level values are stored; composite events inherit probability
/// additively, so finite additivity within a context holds structurally.
class Frame {
 public:
  Frame(std::vector<QuantumContext> contexts, std::vector<std::vector<double>> atom_probs)
      : contexts_(std::move(contexts)), atom_probs_(std::move(atom_probs)) {
    if (contexts_.empty()) throw std::invalid_argument("frame: no contexts");
    if (atom_probs_.size() != contexts_.size()) throw std::invalid_argument("frame: assignment count mismatch");
    const int d = contexts_.front().dim();
    for (std::size_t c = 0; c < contexts_.size(); ++c) {
      if (contexts_[c].dim() != d) throw std::invalid_argument("frame: contexts of mixed dimension");
      auto& probs = atom_probs_[c];
      if (probs.size() != contexts_[c].space()->size()) {
        throw std::invalid_argument("frame: context \"" + contexts_[c].id() + "\" has " +
                                    std::to_string(probs.size()) + " assignments for " +
                                    std::to_string(contexts_[c].space()->size()) + " atoms");
      }
      double sum = 0.0;
      for (double& p : probs) {
        if (p < -1e-12) {
          throw std::invalid_argument("frame: negative probability " + std::to_string(p) + " in context \"" +
                                      contexts_[c].id() + "\"");
        }
        p = std::max(0.0, p);
        sum += p;
      }
      if (std::abs(sum - 1.0) > kStructuralTol) {
        throw std::invalid_argument("frame: probabilities in context \"" + contexts_[c].id() +
                                    "\" sum to " + std::to_string(sum));
      }
    }
  }

  std::size_t n_contexts() const { return contexts_.size(); }
  int dim() const { return contexts_.front().dim(); }
  const QuantumContext& context(int c) const { return contexts_.at(static_cast<std::size_t>(c)); }
  const std::vector<double>& atom_probs(int c) const { return atom_probs_.at(static_cast<std::size_t>(c)); }

  double prob(int c, const Event& event) const {
    const QuantumContext& ctx = context(c);
    if (event.space().get() != ctx.space().get()) {
      throw std::invalid_argument("frame: event does not belong to context \"" + ctx.id() + "\"");
    }
    double p = 0.0;
    for (int m : event.members()) p += atom_probs_[static_cast<std::size_t>(c)][static_cast<std::size_t>(m)];
    return p;
  }

 private:
  std::vector<QuantumContext> contexts_;
  std::vector<std::vector<double>> atom_probs_;
};

/// Born-rule frame p(E|B) = Tr[Pi_E rho]; noncontextual by construction.
inline Frame born_frame(const DensityOperator& rho, std::vector<QuantumContext> contexts) {
  if (contexts.empty()) throw std::invalid_argument("born_frame: no contexts");
  std::vector<std::vector<double>> probs;
  probs.reserve(contexts.size());
  for (const auto& ctx : contexts) {
    if (ctx.dim() != rho.dim()) throw std::invalid_argument("born_frame: dimension mismatch");
    std::vector<double> row;
    row.reserve(ctx.space()->size());
    for (std::size_t a = 0; a < ctx.space()->size(); ++a) {
      row.push_back(born(ctx.atom_projector(static_cast<int>(a)), rho));
    }
    probs.push_back(std::move(row));
  }
  return Frame(std::move(contexts), std::move(probs));
}

struct Violation {
  int context_a;
  Event event_a;
  int context_b;
  Event event_b;
  double delta;  // |p(E|B) - p(F|B')|
};

struct NoncontextualityReport {
  bool noncontextual = true;
  std::vector<Violation> violations;
};

/// Scans every pair of events across distinct contexts whose projectors
/// agree within projector_tol (max-norm) and reports probability gaps
/// exceeding tol. Cost grows as contexts^2 * 4^d; fine at desk scale.
inline NoncontextualityReport check_noncontextual(const Frame& frame, double tol = 1e-8,
                                                  double projector_tol = kStructuralTol) {
  NoncontextualityReport report;
  const int nc = static_cast<int>(frame.n_contexts());

  // Precompute per context: every nonempty subset's projector and probability.
  struct Entry {
    Event event;
    CMatrix projector;
    double prob;
  };
  std::vector<std::vector<Entry>> table(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    const QuantumContext& ctx = frame.context(c);
    const int d = static_cast<int>(ctx.space()->size());
    for (unsigned mask = 1; mask < (1u << d); ++mask) {
      std::vector<int> members;
      for (int i = 0; i < d; ++i) {
        if (mask & (1u << i)) members.push_back(i);
      }
      Event event(ctx.space(), std::move(members));
      CMatrix proj = ctx.event_projector(event);
      const double p = frame.prob(c, event);
      table[static_cast<std::size_t>(c)].push_back({std::move(event), std::move(proj), p});
    }
  }

  for (int a = 0; a < nc; ++a) {
    for (int b = a + 1; b < nc; ++b) {
      for (const Entry& ea : table[static_cast<std::size_t>(a)]) {
        for (const Entry& eb : table[static_cast<std::size_t>(b)]) {
          if (max_abs(ea.projector - eb.projector) > projector_tol) continue;
          const double delta = std::abs(ea.prob - eb.prob);
          if (delta > tol) {
            report.violations.push_back({a, ea.event, b, eb.event, delta});
          }
        }
      }
    }
  }
  report.noncontextual = report.violations.empty();
  return report;
}

struct GleasonFit {
  DensityOperator rho_hat;
  double residual = 0.0;    // RMS over all (context, atom) pairs
  int constraint_rank = 0;  // rank of the atom-projector design matrix
  bool degenerate = false;  // constraint_rank < dim^2: rho not identifiable
  bool dim2_caveat = false; // Gleason's theorem needs dim >= 3
  int iterations = 0;
};

namespace detail {

/// Orthonormal (trace inner product) basis of d x d Hermitian matrices.
inline std::vector<CMatrix> hermitian_basis(int d) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
  for (int p = 0; p < d; ++p) {
    CMatrix e = CMatrix::Zero(d, d);
    e(p, p) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int p = 0; p < d; ++p) {
    for (int q = p + 1; q < d; ++q) {
      CMatrix s = CMatrix::Zero(d, d);
      s(p, q) = inv_sqrt2;
      s(q, p) = inv_sqrt2;
      basis.push_back(std::move(s));
      CMatrix t = CMatrix::Zero(d, d);
      t(p, q) = Complex(0.0, -inv_sqrt2);
      t(q, p) = Complex(0.0, inv_sqrt2);
      basis.push_back(std::move(t));
    }
  }
  return basis;
}

inline CMatrix from_coeffs(const std::vector<CMatrix>& basis, const RVector& x) {
  CMatrix h = CMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (int k = 0; k < x.size(); ++k) h += x(k) * basis[static_cast<std::size_t>(k)];
  return h;
}

inline RVector to_coeffs(const std::vector<CMatrix>& basis, const CMatrix& h) {
  RVector x(static_cast<int>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) x(static_cast<int>(k)) = (basis[k] * h).trace().real();
  return x;
}

/// Nearest density operator in spectral terms: clip negative eigenvalues,
/// renormalize the trace.
inline CMatrix clip_to_density(const CMatrix& h) {
  const int d = static_cast<int>(h.rows());
  CMatrix sym = (h + h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  RVector evals = solver.eigenvalues().cwiseMax(0.0);
  const double total = evals.sum();
  if (total < 1e-15) return CMatrix::Identity(d, d) / static_cast<double>(d);
  evals /= total;
  return solver.eigenvectors() * evals.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace detail

/// Least-squares recovery of a density operator from a frame, Gleason-style:
/// minimize the squared gap between the frame's atom probabilities and
/// Tr[Pi rho] over the density-operator set. Solved by an unconstrained
/// least-squares seed followed by projected gradient steps onto the
/// PSD-unit-trace set, until the residual moves less than 1e-12 or 500
/// iterations are spent.
inline GleasonFit fit_density(const Frame& frame) {
  const int d = frame.dim();
  const int nparams = d * d;
  const std::vector<CMatrix> basis = detail::hermitian_basis(d);

  int n_rows = 0;
  for (std::size_t c = 0; c < frame.n_contexts(); ++c) n_rows += d;
  RMatrix a(n_rows, nparams);
  RVector b(n_rows);
  int row = 0;
  for (std::size_t c = 0; c < frame.n_contexts(); ++c) {
    const QuantumContext& ctx = frame.context(static_cast<int>(c));
    for (int atom = 0; atom < d; ++atom, ++row) {
      const CMatrix& proj = ctx.atom_projector(atom).matrix();
      for (int k = 0; k < nparams; ++k) a(row, k) = (proj * basis[static_cast<std::size_t>(k)]).trace().real();
      b(row) = frame.atom_probs(static_cast<int>(c))[static_cast<std::size_t>(atom)];
    }
  }

  Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma_max = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1e-8 * sigma_max) ++rank;
  }

  RVector x = detail::to_coeffs(basis, detail::clip_to_density(detail::from_coeffs(basis, svd.solve(b))));
  const double step = 1.0 / (2.0 * sigma_max * sigma_max);
  auto rms = [&](const RVector& v) { return std::sqrt((a * v - b).squaredNorm() / static_cast<double>(n_rows)); };

  double residual = rms(x);
  int iterations = 0;
  for (; iterations < 500; ++iterations) {
    const RVector grad = 2.0 * a.transpose() * (a * x - b);
    const RVector next = detail::to_coeffs(basis, detail::clip_to_density(detail::from_coeffs(basis, x - step * grad)));
    const double next_residual = rms(next);
    const double improvement = residual - next_residual;
    x = next;
    residual = next_residual;
    if (std::abs(improvement) < 1e-12) break;
  }

  GleasonFit fit{DensityOperator(detail::clip_to_density(detail::from_coeffs(basis, x))),
                 residual,
                 rank,
                 rank < nparams,
                 d == 2,
                 iterations};
  return fit;
}

/// The two-ticket cross-context book the bookie can run when equal
/// projectors carry unequal prices. Valid only under counterfactual
/// equivalence, which the Kochen-Specker obstruction shows cannot hold
/// globally; the returned note records that hypothesis.
struct CrossContextBook {
  int buy_context;   // bookie buys this (cheaper) ticket from the agent
  Event buy_event;
  double buy_price;
  int sell_context;  // bookie sells this (dearer) ticket to the agent
  Event sell_event;
  double sell_price;
  double sure_loss;  // agent's loss per unit stake
  std::string assumption;
};

inline CrossContextBook cross_context_dutch_book(const Frame& frame, int ctx_e, const Event& e, int ctx_f,
                                                 const Event& f, double price_tol = 1e-9,
                                                 double projector_tol = kStructuralTol) {
  const CMatrix pe = frame.context(ctx_e).event_projector(e);
  const CMatrix pf = frame.context(ctx_f).event_projector(f);
  if (max_abs(pe - pf) > projector_tol) {
    throw std::invalid_argument("cross_context_dutch_book: events have different projectors; "
                                "counterfactual equivalence does not even nominally apply");
  }
  const double p = frame.prob(ctx_e, e);
  const double q = frame.prob(ctx_f, f);
  if (std::abs(p - q) <= price_tol) {
    throw std::invalid_argument("cross_context_dutch_book: no book exists against equal prices");
  }
  CrossContextBook book{ctx_e, e, p, ctx_f, f, q, std::abs(p - q), "conditional on counterfactual equivalence"};
  if (p > q) {
    book = CrossContextBook{ctx_f, f, q, ctx_e, e, p, std::abs(p - q), book.assumption};
  }
  return book;
}

}  // namespace qcoh
