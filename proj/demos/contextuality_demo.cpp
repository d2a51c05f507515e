// The two three-dimensional contexts sharing |2>: the Born rule prices the
// shared ray identically in both, and the density operator is recoverable
// from the atom probabilities alone.
#include <iostream>

#include "qcoh/frames.hpp"

using namespace qcoh;

int main() {
  const double s = 1.0 / std::sqrt(2.0);
  CVector plus(3), minus(3);
  plus << s, s, 0;
  minus << s, -s, 0;
  QuantumContext b("B", {StateVector::basis_state(3, 0), StateVector::basis_state(3, 1),
                         StateVector::basis_state(3, 2)});
  QuantumContext bp("B'", {StateVector(plus), StateVector(minus), StateVector::basis_state(3, 2)});

  const DensityOperator rho = DensityOperator::pure(StateVector::basis_state(3, 0));
  const Frame frame = born_frame(rho, {b, bp});

  std::cout << "p({|2>}|B)  = " << frame.prob(0, Event::from_labels(b.space(), {"2"})) << "\n";
  std::cout << "p({|2>}|B') = " << frame.prob(1, Event::from_labels(bp.space(), {"2"})) << "\n";

  const NoncontextualityReport report = check_noncontextual(frame);
  std::cout << "noncontextual: " << (report.noncontextual ? "yes" : "no") << "\n";

  const GleasonFit fit = fit_density(frame);
  std::cout << "gleason fit residual: " << fit.residual << " (rank " << fit.constraint_rank << ")\n";
  return 0;
}
