#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcoh/rational.hpp"

namespace qcoh::lp {

enum class Status { Optimal, Infeasible, Unbounded };
enum class Relation { Eq, Le, Ge };

struct Solution {
  Status status = Status::Infeasible;
  std::vector<Rational> values;  // per added variable, valid when Optimal
  Rational objective = 0;        // in the caller's sense (max negated back)
};

/// Exact-rational linear program with a dense two-phase simplex.
///
/// Bland's rule on both the entering and leaving choices guarantees
/// termination; all pivots are exact, so feasibility verdicts are sharp.
/// Intended for desk-scale problems (tens of rows/columns).
class LinearProgram {
 public:
  /// Adds a variable with optional bounds; returns its index.
  int add_variable(std::optional<Rational> lower = Rational(0),
                   std::optional<Rational> upper = std::nullopt) {
    if (lower && upper && *lower > *upper) {
      throw std::invalid_argument("lp: variable lower bound exceeds upper bound");
    }
    vars_.push_back({std::move(lower), std::move(upper)});
    return static_cast<int>(vars_.size()) - 1;
  }

  void add_constraint(std::vector<std::pair<int, Rational>> terms, Relation rel, Rational rhs) {
    for (const auto& [v, coeff] : terms) {
      check_var(v);
      (void)coeff;
    }
    rows_.push_back({std::move(terms), rel, std::move(rhs)});
  }

  void set_objective(std::vector<std::pair<int, Rational>> terms, bool maximize) {
    for (const auto& [v, coeff] : terms) {
      check_var(v);
      (void)coeff;
    }
    objective_ = std::move(terms);
    maximize_ = maximize;
  }

  Solution solve() const {
    Tableau tab = build_standard_form();

    // Phase 1: minimize the sum of artificials from the artificial basis.
    std::vector<Rational> phase1_cost(tab.total_cols(), Rational(0));
    for (int a = 0; a < tab.rows(); ++a) phase1_cost[tab.first_artificial + a] = 1;
    if (!tab.optimize(phase1_cost, /*banned_from=*/-1)) {
      throw std::logic_error("lp: phase 1 cannot be unbounded");
    }
    if (tab.objective_value(phase1_cost) != 0) {
      return {Status::Infeasible, {}, 0};
    }
    tab.purge_artificials();

    // Phase 2: the real objective over structural columns only.
    std::vector<Rational> cost(tab.total_cols(), Rational(0));
    for (const auto& [v, coeff] : objective_) {
      map_var_cost(v, maximize_ ? -coeff : coeff, cost);
    }
    if (!tab.optimize(cost, tab.first_artificial)) {
      return {Status::Unbounded, {}, 0};
    }

    Solution sol;
    sol.status = Status::Optimal;
    sol.values = recover_values(tab);
    for (const auto& [v, coeff] : objective_) sol.objective += coeff * sol.values[static_cast<std::size_t>(v)];
    return sol;
  }

 private:
  struct Var {
    std::optional<Rational> lo, hi;
  };
  struct Row {
    std::vector<std::pair<int, Rational>> terms;
    Relation rel;
    Rational rhs;
  };

  // Column mapping of one user variable into nonnegative standard columns.
  //   Shifted:  x = shift + u            (finite lower bound)
  //   Mirrored: x = shift - u            (upper bound only)
  //   Split:    x = u_pos - u_neg        (free)
  struct ColMap {
    enum Kind { Shifted, Mirrored, Split } kind;
    int col_a = -1;
    int col_b = -1;
    Rational shift = 0;
  };

  struct Tableau {
    std::vector<std::vector<Rational>> a;  // rows x (structural + artificial) columns
    std::vector<Rational> rhs;
    std::vector<int> basis;  // column basic in each row
    int first_artificial = 0;

    int rows() const { return static_cast<int>(a.size()); }
    int total_cols() const { return a.empty() ? 0 : static_cast<int>(a[0].size()); }

    Rational objective_value(const std::vector<Rational>& cost) const {
      Rational v = 0;
      for (int r = 0; r < rows(); ++r) v += cost[static_cast<std::size_t>(basis[r])] * rhs[r];
      return v;
    }

    Rational reduced_cost(int j, const std::vector<Rational>& cost) const {
      Rational rc = cost[static_cast<std::size_t>(j)];
      for (int r = 0; r < rows(); ++r) {
        const Rational& cb = cost[static_cast<std::size_t>(basis[r])];
        if (cb != 0) rc -= cb * a[r][static_cast<std::size_t>(j)];
      }
      return rc;
    }

    void pivot(int r, int j) {
      const Rational piv = a[r][static_cast<std::size_t>(j)];
      for (auto& e : a[r]) e /= piv;
      rhs[r] /= piv;
      for (int i = 0; i < rows(); ++i) {
        if (i == r) continue;
        const Rational factor = a[i][static_cast<std::size_t>(j)];
        if (factor == 0) continue;
        for (int k = 0; k < total_cols(); ++k) a[i][static_cast<std::size_t>(k)] -= factor * a[r][static_cast<std::size_t>(k)];
        rhs[i] -= factor * rhs[r];
      }
      basis[r] = j;
    }

    /// Simplex loop with Bland's rule; false iff unbounded.
    /// Columns at index >= banned_from never enter (-1 bans none).
    bool optimize(const std::vector<Rational>& cost, int banned_from) {
      const int limit = banned_from >= 0 ? banned_from : total_cols();
      for (;;) {
        int entering = -1;
        for (int j = 0; j < limit; ++j) {
          if (reduced_cost(j, cost) < 0) {
            entering = j;
            break;
          }
        }
        if (entering < 0) return true;

        int leave_row = -1;
        Rational best_ratio = 0;
        for (int r = 0; r < rows(); ++r) {
          const Rational& arj = a[r][static_cast<std::size_t>(entering)];
          if (arj <= 0) continue;
          const Rational ratio = rhs[r] / arj;
          if (leave_row < 0 || ratio < best_ratio ||
              (ratio == best_ratio && basis[r] < basis[leave_row])) {
            leave_row = r;
            best_ratio = ratio;
          }
        }
        if (leave_row < 0) return false;
        pivot(leave_row, entering);
      }
    }

    /// After a zero-cost phase 1: pivot artificials out of the basis and
    /// drop rows that turn out redundant.
    void purge_artificials() {
      for (int r = rows() - 1; r >= 0; --r) {
        if (basis[r] < first_artificial) continue;
        int j = -1;
        for (int k = 0; k < first_artificial; ++k) {
          if (a[r][static_cast<std::size_t>(k)] != 0) {
            j = k;
            break;
          }
        }
        if (j >= 0) {
          pivot(r, j);
        } else {
          a.erase(a.begin() + r);
          rhs.erase(rhs.begin() + r);
          basis.erase(basis.begin() + r);
        }
      }
    }
  };

  void check_var(int v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= vars_.size()) {
      throw std::invalid_argument("lp: unknown variable index " + std::to_string(v));
    }
  }

  Tableau build_standard_form() const {
    // Map variables onto nonnegative columns.
    col_maps_.assign(vars_.size(), {});
    int ncols = 0;
    std::vector<std::pair<int, Rational>> bound_rows;  // column <= value
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const Var& var = vars_[v];
      ColMap& cm = col_maps_[v];
      if (var.lo) {
        cm.kind = ColMap::Shifted;
        cm.col_a = ncols++;
        cm.shift = *var.lo;
        if (var.hi) bound_rows.emplace_back(cm.col_a, *var.hi - *var.lo);
      } else if (var.hi) {
        cm.kind = ColMap::Mirrored;
        cm.col_a = ncols++;
        cm.shift = *var.hi;
      } else {
        cm.kind = ColMap::Split;
        cm.col_a = ncols++;
        cm.col_b = ncols++;
      }
    }

    // Assemble equality rows: user rows (Ge negated, Le with slack) plus
    // bound rows, each Le getting its own slack column.
    struct DenseRow {
      std::vector<Rational> coeff;
      Rational rhs;
      bool needs_slack;
    };
    std::vector<DenseRow> dense;
    auto translate = [&](const std::vector<std::pair<int, Rational>>& terms, Relation rel, Rational rhs0) {
      DenseRow dr{std::vector<Rational>(static_cast<std::size_t>(ncols), Rational(0)), std::move(rhs0), false};
      const Rational sign = (rel == Relation::Ge) ? Rational(-1) : Rational(1);
      dr.rhs *= sign;
      for (const auto& [v, c0] : terms) {
        const Rational c = sign * c0;
        const ColMap& cm = col_maps_[static_cast<std::size_t>(v)];
        switch (cm.kind) {
          case ColMap::Shifted:
            dr.coeff[static_cast<std::size_t>(cm.col_a)] += c;
            dr.rhs -= c * cm.shift;
            break;
          case ColMap::Mirrored:
            dr.coeff[static_cast<std::size_t>(cm.col_a)] -= c;
            dr.rhs -= c * cm.shift;
            break;
          case ColMap::Split:
            dr.coeff[static_cast<std::size_t>(cm.col_a)] += c;
            dr.coeff[static_cast<std::size_t>(cm.col_b)] -= c;
            break;
        }
      }
      dr.needs_slack = (rel != Relation::Eq);
      dense.push_back(std::move(dr));
    };
    for (const Row& row : rows_) translate(row.terms, row.rel, row.rhs);
    for (const auto& [col, ub] : bound_rows) {
      DenseRow dr{std::vector<Rational>(static_cast<std::size_t>(ncols), Rational(0)), ub, true};
      dr.coeff[static_cast<std::size_t>(col)] = 1;
      dense.push_back(std::move(dr));
    }

    int nslack = 0;
    for (const auto& dr : dense) nslack += dr.needs_slack ? 1 : 0;

    Tableau tab;
    const int m = static_cast<int>(dense.size());
    tab.first_artificial = ncols + nslack;
    const int total = tab.first_artificial + m;
    tab.a.assign(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(total), Rational(0)));
    tab.rhs.resize(static_cast<std::size_t>(m));
    tab.basis.resize(static_cast<std::size_t>(m));
    int slack_at = ncols;
    for (int r = 0; r < m; ++r) {
      auto& row = tab.a[static_cast<std::size_t>(r)];
      for (int j = 0; j < ncols; ++j) row[static_cast<std::size_t>(j)] = dense[static_cast<std::size_t>(r)].coeff[static_cast<std::size_t>(j)];
      Rational b = dense[static_cast<std::size_t>(r)].rhs;
      if (dense[static_cast<std::size_t>(r)].needs_slack) row[static_cast<std::size_t>(slack_at++)] = 1;
      if (b < 0) {
        for (auto& e : row) e = -e;
        b = -b;
      }
      row[static_cast<std::size_t>(tab.first_artificial + r)] = 1;
      tab.rhs[static_cast<std::size_t>(r)] = std::move(b);
      tab.basis[static_cast<std::size_t>(r)] = tab.first_artificial + r;
    }
    return tab;
  }

  void map_var_cost(int v, const Rational& coeff, std::vector<Rational>& cost) const {
    const ColMap& cm = col_maps_[static_cast<std::size_t>(v)];
    switch (cm.kind) {
      case ColMap::Shifted:
        cost[static_cast<std::size_t>(cm.col_a)] += coeff;
        break;
      case ColMap::Mirrored:
        cost[static_cast<std::size_t>(cm.col_a)] -= coeff;
        break;
      case ColMap::Split:
        cost[static_cast<std::size_t>(cm.col_a)] += coeff;
        cost[static_cast<std::size_t>(cm.col_b)] -= coeff;
        break;
    }
  }

  std::vector<Rational> recover_values(const Tableau& tab) const {
    std::vector<Rational> col_value(static_cast<std::size_t>(tab.total_cols()), Rational(0));
    for (int r = 0; r < tab.rows(); ++r) col_value[static_cast<std::size_t>(tab.basis[r])] = tab.rhs[r];
    std::vector<Rational> out(vars_.size(), Rational(0));
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      const ColMap& cm = col_maps_[v];
      switch (cm.kind) {
        case ColMap::Shifted:
          out[v] = cm.shift + col_value[static_cast<std::size_t>(cm.col_a)];
          break;
        case ColMap::Mirrored:
          out[v] = cm.shift - col_value[static_cast<std::size_t>(cm.col_a)];
          break;
        case ColMap::Split:
          out[v] = col_value[static_cast<std::size_t>(cm.col_a)] - col_value[static_cast<std::size_t>(cm.col_b)];
          break;
      }
    }
    return out;
  }

  std::vector<Var> vars_;
  std::vector<Row> rows_;
  std::vector<std::pair<int, Rational>> objective_;
  bool maximize_ = false;
  mutable std::vector<ColMap> col_maps_;
};

}  // namespace qcoh::lp
