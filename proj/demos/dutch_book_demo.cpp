// Prices the halves of a dice roll inconsistently and shows the bookie's
// guaranteed-win portfolio.
#include <iostream>

#include "qcoh/coherence.hpp"

using namespace qcoh;

int main() {
  auto space = make_space({"1", "2", "3", "4", "5", "6"});
  PriceBook book(BettingContext("dice", space));
  book.set_price(Event::from_labels(space, {"1", "3", "5"}), Rational(1, 2));
  book.set_price(Event::from_labels(space, {"2", "4", "6"}), Rational(3, 5));

  const CoherenceVerdict verdict = check_coherence(book);
  if (verdict.coherent) {
    std::cout << "book is coherent\n";
    return 0;
  }
  std::cout << "book is incoherent; guaranteed loss " << format_rational(*verdict.guaranteed_loss)
            << " per unit stake\n";
  for (const auto& [event, stake] : verdict.witness->stakes) {
    std::cout << "  stake " << format_rational(stake) << " on {";
    for (const auto& label : atoms_of(event)) std::cout << " " << label;
    std::cout << " }\n";
  }
  for (int atom = 0; atom < 6; ++atom) {
    std::cout << "  outcome " << space->label(atom) << ": agent payoff "
              << format_rational(settle(*verdict.witness, book, atom)) << "\n";
  }
  return 0;
}
