#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcoh/events.hpp"
#include "qcoh/rational.hpp"
#include "qcoh/simplex.hpp"

namespace qcoh {

/// An agent's fair prices for events of one betting context.
/// Prices are exact rationals and unrestricted at construction; whether
/// they are rationally tenable is the checker's job, not the container's.
class PriceBook {
 public:
  explicit PriceBook(BettingContext context) : context_(std::move(context)) {}

  void set_price(const Event& event, Rational price) {
    if (event.space().get() != context_.space.get()) {
      throw std::invalid_argument("price book \"" + context_.id +
                                  "\": event belongs to a foreign space");
    }
    for (const auto& [e, p] : prices_) {
      if (e == event) {
        throw std::invalid_argument("price book \"" + context_.id + "\": event priced twice");
      }
    }
    prices_.emplace_back(event, std::move(price));
  }

  const BettingContext& context() const { return context_; }
  const std::vector<std::pair<Event, Rational>>& prices() const { return prices_; }
  bool empty() const { return prices_.empty(); }

  const Rational* find_price(const Event& event) const {
    for (const auto& [e, p] : prices_) {
      if (e == event) return &p;
    }
    return nullptr;
  }

 private:
  BettingContext context_;
  std::vector<std::pair<Event, Rational>> prices_;  // insertion order, deterministic output
};

/// Signed stakes per event; positive buys tickets at the listed price,
/// negative sells.
struct BetPortfolio {
  std::vector<std::pair<Event, Rational>> stakes;
};

struct ProbabilityMeasure {
  BettingContext context;
  std::vector<Rational> atom_probs;  // aligned with context.space->atoms()

  Rational prob(const Event& event) const {
    if (event.space().get() != context.space.get()) {
      throw std::invalid_argument("measure: event from a foreign space");
    }
    Rational p = 0;
    for (int m : event.members()) p += atom_probs[static_cast<std::size_t>(m)];
    return p;
  }
};

struct CoherenceVerdict {
  bool coherent = false;
  std::optional<BetPortfolio> witness;       // present iff incoherent
  std::optional<Rational> guaranteed_loss;   // > 0 iff incoherent
  std::optional<ProbabilityMeasure> extension;  // present iff coherent
};

class IncoherentBookError : public std::runtime_error {
 public:
  IncoherentBookError(BetPortfolio witness, Rational loss)
      : std::runtime_error("book is incoherent: a Dutch book guarantees loss " + format_rational(loss)),
        witness_(std::move(witness)),
        guaranteed_loss_(std::move(loss)) {}

  const BetPortfolio& witness() const { return witness_; }
  const Rational& guaranteed_loss() const { return guaranteed_loss_; }

 private:
  BetPortfolio witness_;
  Rational guaranteed_loss_;
};

/// Agent's net payoff of a settled portfolio at a given outcome atom:
/// sum of stake * (indicator(outcome in E) - price(E)).
inline Rational settle(const BetPortfolio& portfolio, const PriceBook& book, int outcome_atom) {
  const auto& space = book.context().space;
  if (outcome_atom < 0 || static_cast<std::size_t>(outcome_atom) >= space->size()) {
    throw std::invalid_argument("settle: outcome atom outside the context space");
  }
  Rational payoff = 0;
  for (const auto& [event, stake] : portfolio.stakes) {
    const Rational* price = book.find_price(event);
    if (price == nullptr) {
      throw std::invalid_argument("settle: stake on an unpriced event");
    }
    const Rational indicator = event.contains(outcome_atom) ? 1 : 0;
    payoff += stake * (indicator - *price);
  }
  return payoff;
}

inline Rational settle(const BetPortfolio& portfolio, const PriceBook& book, const std::string& outcome_label) {
  return settle(portfolio, book, book.context().space->index_of(outcome_label));
}

namespace detail {

// Feasibility program: atom probabilities mu >= 0, sum(mu) = 1, and every
// priced event's mass pinned to its listed price.
inline lp::LinearProgram measure_program(const PriceBook& book, std::vector<int>& mu_vars) {
  const int n = static_cast<int>(book.context().space->size());
  lp::LinearProgram prog;
  mu_vars.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) mu_vars[static_cast<std::size_t>(i)] = prog.add_variable(Rational(0));
  std::vector<std::pair<int, Rational>> total;
  for (int i = 0; i < n; ++i) total.emplace_back(mu_vars[static_cast<std::size_t>(i)], Rational(1));
  prog.add_constraint(total, lp::Relation::Eq, Rational(1));
  for (const auto& [event, price] : book.prices()) {
    std::vector<std::pair<int, Rational>> terms;
    for (int m : event.members()) terms.emplace_back(mu_vars[static_cast<std::size_t>(m)], Rational(1));
    prog.add_constraint(terms, lp::Relation::Eq, price);
  }
  return prog;
}

// Deterministic extension: lexicographically minimal atom-probability
// vector among all measures agreeing with the book. One LP per atom.
inline ProbabilityMeasure lexmin_extension(const PriceBook& book) {
  const int n = static_cast<int>(book.context().space->size());
  std::vector<Rational> pinned;
  for (int i = 0; i < n; ++i) {
    std::vector<int> mu;
    lp::LinearProgram prog = measure_program(book, mu);
    for (int j = 0; j < static_cast<int>(pinned.size()); ++j) {
      prog.add_constraint({{mu[static_cast<std::size_t>(j)], Rational(1)}}, lp::Relation::Eq, pinned[static_cast<std::size_t>(j)]);
    }
    prog.set_objective({{mu[static_cast<std::size_t>(i)], Rational(1)}}, /*maximize=*/false);
    lp::Solution sol = prog.solve();
    if (sol.status != lp::Status::Optimal) {
      throw std::logic_error("coherence: lexmin step lost feasibility");
    }
    pinned.push_back(sol.values[static_cast<std::size_t>(mu[static_cast<std::size_t>(i)])]);
  }
  return ProbabilityMeasure{book.context(), std::move(pinned)};
}

// Dual search for the most punishing unit-stake book: stakes y_k in [-1,1],
// one per priced event, maximizing the guaranteed loss
//   min over atoms of (sum_k y_k q_k - sum_{k: atom in E_k} y_k).
// The auxiliary free variable y0 tracks -max over atoms of the payout part,
// so the optimum value is exactly the loss guaranteed at every atom.
inline std::pair<BetPortfolio, Rational> best_dutch_book(const PriceBook& book) {
  const int n = static_cast<int>(book.context().space->size());
  const auto& prices = book.prices();
  lp::LinearProgram prog;
  const int y0 = prog.add_variable(std::nullopt, std::nullopt);
  std::vector<int> y(prices.size());
  for (std::size_t k = 0; k < prices.size(); ++k) y[k] = prog.add_variable(Rational(-1), Rational(1));

  for (int atom = 0; atom < n; ++atom) {
    std::vector<std::pair<int, Rational>> row{{y0, Rational(1)}};
    for (std::size_t k = 0; k < prices.size(); ++k) {
      if (prices[k].first.contains(atom)) row.emplace_back(y[k], Rational(1));
    }
    prog.add_constraint(row, lp::Relation::Le, Rational(0));
  }
  std::vector<std::pair<int, Rational>> obj{{y0, Rational(1)}};
  for (std::size_t k = 0; k < prices.size(); ++k) obj.emplace_back(y[k], prices[k].second);
  prog.set_objective(obj, /*maximize=*/true);

  lp::Solution sol = prog.solve();
  if (sol.status != lp::Status::Optimal || sol.objective <= 0) {
    throw std::logic_error("coherence: infeasible book yielded no Dutch book certificate");
  }
  BetPortfolio witness;
  for (std::size_t k = 0; k < prices.size(); ++k) {
    const Rational& stake = sol.values[static_cast<std::size_t>(y[k])];
    if (stake != 0) witness.stakes.emplace_back(prices[k].first, stake);
  }
  return {std::move(witness), sol.objective};
}

}  // namespace detail

/// Decides Dutch-book coherence of a price book by exact linear feasibility
/// over atom probabilities. Incoherent books come with a witness portfolio
/// (stakes normalized to max |stake| = 1) that loses at every atom; coherent
/// books come with the lexicographically minimal extending measure.
inline CoherenceVerdict check_coherence(const PriceBook& book) {
  if (book.empty()) {
    throw std::invalid_argument("check_coherence: empty price book");
  }
  std::vector<int> mu;
  lp::LinearProgram feas = detail::measure_program(book, mu);
  const lp::Solution sol = feas.solve();

  CoherenceVerdict verdict;
  if (sol.status == lp::Status::Optimal) {
    verdict.coherent = true;
    verdict.extension = detail::lexmin_extension(book);
  } else {
    auto [witness, loss] = detail::best_dutch_book(book);
    verdict.coherent = false;
    verdict.witness = std::move(witness);
    verdict.guaranteed_loss = std::move(loss);
  }
  return verdict;
}

/// The lexicographically minimal measure consistent with the book;
/// throws IncoherentBookError (carrying the witness) otherwise.
inline ProbabilityMeasure extend_to_measure(const PriceBook& book) {
  CoherenceVerdict verdict = check_coherence(book);
  if (!verdict.coherent) {
    throw IncoherentBookError(std::move(*verdict.witness), std::move(*verdict.guaranteed_loss));
  }
  return std::move(*verdict.extension);
}

}  // namespace qcoh
