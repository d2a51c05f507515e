#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcoh/hilbert.hpp"
#include "qcoh/random.hpp"

namespace qcoh {

/// A family of rays and orthonormal bases over them. Rays are identified up
/// to global phase (|<u|v>| ~ 1 means the same projector, hence the same
/// ray), so inputs are deduplicated at build time.
struct KSInstance {
  int dim = 0;
  std::vector<StateVector> rays;
  std::vector<std::vector<int>> bases;  // each lists dim ray indices
};

inline KSInstance build_instance(int dim, std::vector<StateVector> rays, std::vector<std::vector<int>> bases) {
  if (dim < 2) throw std::invalid_argument("ks instance: dimension must be at least 2");
  if (rays.empty()) throw std::invalid_argument("ks instance: no rays");

  // Deduplicate rays up to global phase.
  std::vector<StateVector> kept;
  std::vector<int> remap(rays.size());
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (rays[i].dim() != dim) throw std::invalid_argument("ks instance: ray dimension mismatch");
    int found = -1;
    for (std::size_t j = 0; j < kept.size(); ++j) {
      if (std::abs(kept[j].overlap(rays[i])) > 1.0 - kStructuralTol) {
        found = static_cast<int>(j);
        break;
      }
    }
    if (found < 0) {
      kept.push_back(rays[i]);
      found = static_cast<int>(kept.size()) - 1;
    }
    remap[i] = found;
  }

  std::vector<char> used(kept.size(), 0);
  for (auto& basis : bases) {
    if (static_cast<int>(basis.size()) != dim) {
      throw std::invalid_argument("ks instance: a basis has " + std::to_string(basis.size()) +
                                  " rays in dimension " + std::to_string(dim));
    }
    for (auto& r : basis) {
      if (r < 0 || static_cast<std::size_t>(r) >= rays.size()) {
        throw std::invalid_argument("ks instance: basis references unknown ray " + std::to_string(r));
      }
      r = remap[static_cast<std::size_t>(r)];
      used[static_cast<std::size_t>(r)] = 1;
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i + 1; j < basis.size(); ++j) {
        if (basis[i] == basis[j]) {
          throw std::invalid_argument("ks instance: basis repeats a ray after phase deduplication");
        }
        const double overlap = std::abs(kept[static_cast<std::size_t>(basis[i])].overlap(
            kept[static_cast<std::size_t>(basis[j])]));
        if (overlap > kStructuralTol) {
          throw std::invalid_argument("ks instance: rays " + std::to_string(basis[i]) + " and " +
                                      std::to_string(basis[j]) + " in one basis are not orthogonal (|overlap| = " +
                                      std::to_string(overlap) + ")");
        }
      }
    }
  }
  for (std::size_t r = 0; r < kept.size(); ++r) {
    if (!used[r]) throw std::invalid_argument("ks instance: ray " + std::to_string(r) + " appears in no basis");
  }
  return KSInstance{dim, std::move(kept), std::move(bases)};
}

struct ParityObstruction {
  std::vector<int> ray_multiplicities;
  int basis_count = 0;
};

struct KSVerdict {
  bool satisfiable = false;
  std::optional<std::vector<int>> assignment;  // 0/1 per ray
  std::uint64_t nodes_explored = 0;
  std::optional<ParityObstruction> parity_obstruction;
};

/// Checks the two noncontextual value-assignment rules directly against the
/// instance: one value per ray, exactly one 1 in every basis.
inline bool verify_assignment(const KSInstance& inst, const std::vector<int>& assignment) {
  if (assignment.size() != inst.rays.size()) return false;
  for (int v : assignment) {
    if (v != 0 && v != 1) return false;
  }
  for (const auto& basis : inst.bases) {
    int ones = 0;
    for (int r : basis) ones += assignment[static_cast<std::size_t>(r)];
    if (ones != 1) return false;
  }
  return true;
}

namespace detail {

class KsSearcher {
 public:
  explicit KsSearcher(const KSInstance& inst) : inst_(inst) {
    const std::size_t nrays = inst.rays.size();
    bases_of_ray_.resize(nrays);
    for (std::size_t b = 0; b < inst.bases.size(); ++b) {
      for (int r : inst.bases[b]) bases_of_ray_[static_cast<std::size_t>(r)].push_back(static_cast<int>(b));
    }
    // Decision order: most constrained rays first, ties by index.
    order_.resize(nrays);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) {
      return bases_of_ray_[static_cast<std::size_t>(x)].size() > bases_of_ray_[static_cast<std::size_t>(y)].size();
    });
    reset();
  }

  void reset() {
    value_.assign(inst_.rays.size(), -1);
    assigned_.assign(inst_.bases.size(), 0);
    ones_.assign(inst_.bases.size(), 0);
    trail_.clear();
    nodes_ = 0;
  }

  /// Seeds the root ray with a fixed value (for branch splitting);
  /// returns false if that alone is contradictory.
  bool seed_root(int value) { return assign(order_.front(), value); }
  int root_ray() const { return order_.front(); }

  bool run() { return dfs(0); }
  std::uint64_t nodes() const { return nodes_; }

  std::vector<int> extract_assignment() const {
    std::vector<int> out(inst_.rays.size());
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = value_[r] == 1 ? 1 : 0;
    return out;
  }

 private:
  bool dfs(std::size_t depth) {
    while (depth < order_.size() && value_[static_cast<std::size_t>(order_[depth])] != -1) ++depth;
    if (depth == order_.size()) return true;
    const int ray = order_[depth];
    for (int v : {1, 0}) {
      ++nodes_;
      const std::size_t mark = trail_.size();
      if (assign(ray, v) && dfs(depth + 1)) return true;
      undo_to(mark);
    }
    return false;
  }

  // Assigns with unit propagation: a 1 zeroes the rest of its bases; a
  // basis down to one unassigned ray with no 1 forces that ray to 1.
  bool assign(int ray, int v) {
    std::vector<std::pair<int, int>> pending{{ray, v}};
    while (!pending.empty()) {
      const auto [r, val] = pending.back();
      pending.pop_back();
      if (value_[static_cast<std::size_t>(r)] != -1) {
        if (value_[static_cast<std::size_t>(r)] != val) return false;
        continue;
      }
      value_[static_cast<std::size_t>(r)] = static_cast<signed char>(val);
      trail_.push_back(r);
      bool ok = true;
      for (int b : bases_of_ray_[static_cast<std::size_t>(r)]) {
        assigned_[static_cast<std::size_t>(b)] += 1;
        ones_[static_cast<std::size_t>(b)] += val;
        const int size = static_cast<int>(inst_.bases[static_cast<std::size_t>(b)].size());
        if (ones_[static_cast<std::size_t>(b)] > 1) {
          ok = false;
        } else if (assigned_[static_cast<std::size_t>(b)] == size && ones_[static_cast<std::size_t>(b)] == 0) {
          ok = false;
        } else if (val == 1) {
          for (int other : inst_.bases[static_cast<std::size_t>(b)]) {
            if (value_[static_cast<std::size_t>(other)] == -1) pending.emplace_back(other, 0);
          }
        } else if (assigned_[static_cast<std::size_t>(b)] == size - 1 && ones_[static_cast<std::size_t>(b)] == 0) {
          for (int other : inst_.bases[static_cast<std::size_t>(b)]) {
            if (value_[static_cast<std::size_t>(other)] == -1) {
              pending.emplace_back(other, 1);
              break;
            }
          }
        }
      }
      if (!ok) return false;
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const int r = trail_.back();
      trail_.pop_back();
      const int val = value_[static_cast<std::size_t>(r)];
      value_[static_cast<std::size_t>(r)] = -1;
      for (int b : bases_of_ray_[static_cast<std::size_t>(r)]) {
        assigned_[static_cast<std::size_t>(b)] -= 1;
        ones_[static_cast<std::size_t>(b)] -= val;
      }
    }
  }

  const KSInstance& inst_;
  std::vector<std::vector<int>> bases_of_ray_;
  std::vector<int> order_;
  std::vector<signed char> value_;
  std::vector<int> assigned_;
  std::vector<int> ones_;
  std::vector<int> trail_;
  std::uint64_t nodes_ = 0;
};

inline std::optional<ParityObstruction> parity_check(const KSInstance& inst) {
  std::vector<int> mult(inst.rays.size(), 0);
  for (const auto& basis : inst.bases) {
    for (int r : basis) mult[static_cast<std::size_t>(r)] += 1;
  }
  const bool all_even = std::all_of(mult.begin(), mult.end(), [](int m) { return m % 2 == 0; });
  if (all_even && inst.bases.size() % 2 == 1) {
    return ParityObstruction{std::move(mult), static_cast<int>(inst.bases.size())};
  }
  return std::nullopt;
}

}  // namespace detail

/// Complete backtracking search for a noncontextual 0/1 assignment.
/// SAT verdicts carry a witness re-verified against the raw instance;
/// UNSAT verdicts carry the node count and, when every ray has even
/// basis-multiplicity with an odd number of bases, the parity obstruction
/// that explains the impossibility by counting alone.
inline KSVerdict search_assignment(const KSInstance& inst, bool parallel = false) {
  KSVerdict verdict;

  auto finish_sat = [&](std::vector<int> assignment, std::uint64_t nodes) {
    if (!verify_assignment(inst, assignment)) {
      throw std::logic_error("ks search: produced assignment failed re-verification");
    }
    verdict.satisfiable = true;
    verdict.assignment = std::move(assignment);
    verdict.nodes_explored = nodes;
  };

  if (!parallel) {
    detail::KsSearcher searcher(inst);
    if (searcher.run()) {
      finish_sat(searcher.extract_assignment(), searcher.nodes());
      return verdict;
    }
    verdict.satisfiable = false;
    verdict.nodes_explored = searcher.nodes();
  } else {
    // Split on the first decision ray; the value-1 branch wins ties so the
    // verdict (and witness) matches the serial search.
    auto branch = [&inst](int value) {
      detail::KsSearcher searcher(inst);
      const bool seeded = searcher.seed_root(value);
      const bool sat = seeded && searcher.run();
      return std::make_tuple(sat, sat ? std::optional<std::vector<int>>(searcher.extract_assignment())
                                      : std::nullopt,
                             searcher.nodes() + 1);
    };
    auto fut1 = std::async(std::launch::async, branch, 1);
    auto fut0 = std::async(std::launch::async, branch, 0);
    auto [sat1, asg1, nodes1] = fut1.get();
    auto [sat0, asg0, nodes0] = fut0.get();
    if (sat1) {
      finish_sat(std::move(*asg1), nodes1 + nodes0);
      return verdict;
    }
    if (sat0) {
      finish_sat(std::move(*asg0), nodes1 + nodes0);
      return verdict;
    }
    verdict.satisfiable = false;
    verdict.nodes_explored = nodes1 + nodes0;
  }

  verdict.parity_obstruction = detail::parity_check(inst);
  return verdict;
}

/// Samples rank-1 projectors until one has a Born probability strictly
/// between 0 and 1 (inside the band), witnessing that no Born frame is
/// outcome-deterministic. The band widens if a cap's worth of draws fails.
struct BornWitness {
  StateVector ray;
  double probability = 0.0;
  std::uint64_t draws = 0;
  double band_low = 0.0;
  double band_high = 1.0;
};

inline BornWitness gleason_implies_ks_demo(const DensityOperator& rho, std::uint64_t seed,
                                           std::uint64_t draws_per_band = 100000) {
  if (rho.dim() < 3) {
    throw std::invalid_argument("gleason_implies_ks_demo: requires dimension 3 or larger");
  }
  Rng rng(seed);
  double lo = 0.05;
  std::uint64_t total_draws = 0;
  while (lo > 1e-7) {
    const double hi = 1.0 - lo;
    for (std::uint64_t i = 0; i < draws_per_band; ++i) {
      StateVector psi = random_state(rho.dim(), rng);
      const double p = born(projector_from_rays({psi}), rho);
      ++total_draws;
      if (p >= lo && p <= hi) {
        return BornWitness{std::move(psi), p, total_draws, lo, hi};
      }
    }
    lo /= 2.0;
  }
  throw std::runtime_error("gleason_implies_ks_demo: no witness found; input is not a valid density operator?");
}

}  // namespace qcoh
