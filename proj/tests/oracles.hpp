// Test-side oracles, independent of the library's decision paths.
#pragma once

#include <optional>
#include <random>
#include <vector>

#include "qcoh/coherence.hpp"
#include "qcoh/events.hpp"
#include "qcoh/kochen_specker.hpp"
#include "qcoh/rational.hpp"
#include "qcoh/twenty_questions.hpp"

namespace oracles {

using qcoh::Rational;

/// Exact Gaussian elimination: a particular solution of M x = rhs with free
/// variables at zero, or nullopt when inconsistent.
inline std::optional<std::vector<Rational>> gauss_solve(std::vector<std::vector<Rational>> m,
                                                        std::vector<Rational> rhs) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::vector<int> pivot_col_of_row;
  std::size_t rank_row = 0;
  for (std::size_t col = 0; col < cols && rank_row < rows; ++col) {
    std::size_t piv = rank_row;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank_row]);
    std::swap(rhs[piv], rhs[rank_row]);
    const Rational lead = m[rank_row][col];
    for (std::size_t c = col; c < cols; ++c) m[rank_row][c] /= lead;
    rhs[rank_row] /= lead;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank_row || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank_row][c];
      rhs[r] -= f * rhs[rank_row];
    }
    pivot_col_of_row.push_back(static_cast<int>(col));
    ++rank_row;
  }
  for (std::size_t r = rank_row; r < rows; ++r) {
    if (rhs[r] != 0) return std::nullopt;
  }
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t r = 0; r < rank_row; ++r) x[static_cast<std::size_t>(pivot_col_of_row[r])] = rhs[r];
  return x;
}

/// de Finetti's characterization, decided by brute force: prices are
/// coherent iff the price vector lies in the convex hull of the 0/1
/// valuation vectors of the atoms. Every atom subset is tried as a
/// Caratheodory support; a consistent solution with nonnegative weights
/// summing to one certifies membership.
inline bool hull_coherent(const qcoh::PriceBook& book) {
  const std::size_t n = book.context().space->size();
  const auto& prices = book.prices();
  const std::size_t m = prices.size();

  std::vector<std::vector<Rational>> valuation(n, std::vector<Rational>(m));
  for (std::size_t atom = 0; atom < n; ++atom) {
    for (std::size_t k = 0; k < m; ++k) {
      valuation[atom][k] = prices[k].first.contains(static_cast<int>(atom)) ? 1 : 0;
    }
  }

  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> support;
    for (std::size_t atom = 0; atom < n; ++atom) {
      if (mask & (1u << atom)) support.push_back(atom);
    }
    // Rows: one per priced event, plus the affine row sum(lambda) = 1.
    std::vector<std::vector<Rational>> sys(m + 1, std::vector<Rational>(support.size()));
    std::vector<Rational> rhs(m + 1);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t s = 0; s < support.size(); ++s) sys[k][s] = valuation[support[s]][k];
      rhs[k] = prices[k].second;
    }
    for (std::size_t s = 0; s < support.size(); ++s) sys[m][s] = 1;
    rhs[m] = 1;

    const auto lambda = gauss_solve(std::move(sys), std::move(rhs));
    if (!lambda) continue;
    bool nonneg = true;
    for (const Rational& l : *lambda) {
      if (l < 0) {
        nonneg = false;
        break;
      }
    }
    if (nonneg) return true;
  }
  return false;
}

/// Exhaustive 0/1 assignment search over all 2^R ray valuations.
inline bool ks_brute_force_satisfiable(const qcoh::KSInstance& inst) {
  const std::size_t r = inst.rays.size();
  if (r > 24) throw std::invalid_argument("brute force oracle: too many rays");
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << r); ++mask) {
    bool ok = true;
    for (const auto& basis : inst.bases) {
      int ones = 0;
      for (int ray : basis) ones += (mask >> ray) & 1;
      if (ones != 1) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

/// Settles one bet by enumerating every lexicon word against the transcript
/// prefix the bet's respondent witnessed: everything up to and including
/// their final answer, or the whole transcript if they never departed.
inline qcoh::BetStatus resolve_by_enumeration(const qcoh::Lexicon& lex,
                                              const std::vector<qcoh::TranscriptEntry>& transcript,
                                              const qcoh::Bet& bet, bool depart_after_answer) {
  std::size_t horizon = transcript.size();
  if (depart_after_answer) {
    for (std::size_t t = 0; t < transcript.size(); ++t) {
      if (transcript[t].respondent == bet.respondent) horizon = t + 1;
    }
  }
  bool any_true = false;
  bool any_false = false;
  for (std::size_t w = 0; w < lex.words.size(); ++w) {
    bool compatible = true;
    for (std::size_t t = 0; t < horizon; ++t) {
      if (lex.table[w][static_cast<std::size_t>(transcript[t].attribute)] != transcript[t].answer) {
        compatible = false;
        break;
      }
    }
    if (!compatible) continue;
    bool holds;
    if (bet.proposition.kind == qcoh::Proposition::Kind::WordIs) {
      holds = lex.words[w] == bet.proposition.word;
    } else {
      holds = lex.table[w][static_cast<std::size_t>(bet.proposition.attribute)] == bet.proposition.value;
    }
    (holds ? any_true : any_false) = true;
  }
  if (any_true && !any_false) return qcoh::BetStatus::Won;
  if (any_false && !any_true) return qcoh::BetStatus::Lost;
  return qcoh::BetStatus::Void;
}

inline Rational random_rational(std::mt19937_64& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return Rational(num(rng), den(rng));
}

/// Random price book over a small space. Half the time prices come from an
/// exact random measure (coherent by construction is then likely), half the
/// time they are unconstrained rationals in and around [0,1].
inline qcoh::PriceBook random_price_book(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> natoms_dist(2, 4);
  const int n = natoms_dist(rng);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
  auto space = qcoh::make_space(labels);
  qcoh::PriceBook book(qcoh::BettingContext("random", space));

  std::uniform_int_distribution<int> nevents_dist(1, 4);
  std::uniform_int_distribution<unsigned> mask_dist(1, (1u << n) - 1);
  const int m = nevents_dist(rng);

  const bool from_measure = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  std::vector<Rational> measure(static_cast<std::size_t>(n));
  if (from_measure) {
    Rational total = 0;
    std::uniform_int_distribution<int> weight(0, 6);
    for (auto& w : measure) {
      w = weight(rng);
      total += w;
    }
    if (total == 0) {
      measure[0] = 1;
      total = 1;
    }
    for (auto& w : measure) w /= total;
  }

  std::vector<unsigned> used;
  for (int k = 0; k < m; ++k) {
    unsigned mask = mask_dist(rng);
    if (std::find(used.begin(), used.end(), mask) != used.end()) continue;
    used.push_back(mask);
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) members.push_back(i);
    }
    qcoh::Event event(space, std::move(members));
    Rational price;
    if (from_measure) {
      for (int i = 0; i < n; ++i) {
        if (event.contains(i)) price += measure[static_cast<std::size_t>(i)];
      }
    } else {
      price = random_rational(rng, 6, 5);
    }
    book.set_price(event, price);
  }
  if (book.empty()) {
    book.set_price(qcoh::Event::full(space), Rational(1));
  }
  return book;
}

}  // namespace oracles
