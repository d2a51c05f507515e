#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "qcoh/coherence.hpp"

using namespace qcoh;

namespace {

SpacePtr dice_space() { return make_space({"1", "2", "3", "4", "5", "6"}); }

PriceBook dice_book() {
  auto d = dice_space();
  PriceBook book(BettingContext("dice", d));
  book.set_price(Event::from_labels(d, {"1", "3", "5"}), Rational(1, 2));
  book.set_price(Event::from_labels(d, {"2", "4", "6"}), Rational(3, 5));
  return book;
}

}  // namespace

TEST_CASE("overpriced odd/even dice book admits the classic Dutch book") {
  PriceBook book = dice_book();
  CoherenceVerdict verdict = check_coherence(book);

  REQUIRE_FALSE(verdict.coherent);
  REQUIRE(verdict.witness.has_value());
  REQUIRE(verdict.guaranteed_loss.has_value());
  CHECK(*verdict.guaranteed_loss == Rational(1, 10));
  CHECK_FALSE(verdict.extension.has_value());

  // Buy one ticket on each half: cost 11/10, payout exactly 1 at every atom.
  REQUIRE(verdict.witness->stakes.size() == 2);
  for (const auto& [event, stake] : verdict.witness->stakes) CHECK(stake == Rational(1));
  for (int atom = 0; atom < 6; ++atom) {
    CHECK(settle(*verdict.witness, book, atom) == Rational(-1, 10));
  }
}

TEST_CASE("negative price is punished by selling, exactly") {
  auto d = dice_space();
  PriceBook book(BettingContext("dice", d));
  book.set_price(Event::from_labels(d, {"1", "3", "5"}), Rational(-1, 5));

  CoherenceVerdict verdict = check_coherence(book);
  REQUIRE_FALSE(verdict.coherent);
  CHECK(*verdict.guaranteed_loss == Rational(1, 5));
  REQUIRE(verdict.witness->stakes.size() == 1);
  CHECK(verdict.witness->stakes[0].second == Rational(-1));
  for (int atom = 0; atom < 6; ++atom) {
    CHECK(settle(*verdict.witness, book, atom) <= Rational(-1, 5));
  }
}

TEST_CASE("coherent book extends to the uniform measure") {
  auto s = make_space({"a", "b"});
  PriceBook book(BettingContext("coin", s));
  book.set_price(Event::full(s), Rational(1));
  book.set_price(Event::empty(s), Rational(0));
  book.set_price(Event::from_labels(s, {"a"}), Rational(1, 2));

  CoherenceVerdict verdict = check_coherence(book);
  REQUIRE(verdict.coherent);
  REQUIRE(verdict.extension.has_value());
  CHECK_FALSE(verdict.witness.has_value());
  CHECK(verdict.extension->atom_probs == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
}

TEST_CASE("extension fills in the complement forced by additivity") {
  auto s = make_space({"H", "T"});
  PriceBook book(BettingContext("coin", s));
  book.set_price(Event::from_labels(s, {"H"}), Rational(3, 10));
  ProbabilityMeasure measure = extend_to_measure(book);
  CHECK(measure.atom_probs == std::vector<Rational>{Rational(3, 10), Rational(7, 10)});
}

TEST_CASE("extension picks the lexicographically minimal measure") {
  auto d = dice_space();
  PriceBook book(BettingContext("dice", d));
  book.set_price(Event::from_labels(d, {"1", "3", "5"}), Rational(1, 2));
  ProbabilityMeasure measure = extend_to_measure(book);
  CHECK(measure.atom_probs == std::vector<Rational>{0, 0, 0, 0, Rational(1, 2), Rational(1, 2)});
  CHECK(measure.prob(Event::from_labels(d, {"1", "3", "5"})) == Rational(1, 2));
}

TEST_CASE("certain event priced below one is incoherent with exact loss") {
  auto s = make_space({"H", "T"});
  PriceBook book(BettingContext("coin", s));
  book.set_price(Event::full(s), Rational(9, 10));
  CHECK_THROWS_AS(extend_to_measure(book), IncoherentBookError);
  try {
    extend_to_measure(book);
  } catch (const IncoherentBookError& e) {
    CHECK(e.guaranteed_loss() == Rational(1, 10));
    CHECK(e.witness().stakes.size() == 1);
    CHECK(e.witness().stakes[0].second == Rational(-1));
  }
}

TEST_CASE("settlement of single tickets") {
  auto s = make_space({"H", "T"});
  PriceBook book(BettingContext("coin", s));
  const Event heads = Event::from_labels(s, {"H"});
  book.set_price(heads, Rational(1, 2));

  BetPortfolio buy_one{{{heads, Rational(1)}}};
  CHECK(settle(buy_one, book, "H") == Rational(1, 2));
  CHECK(settle(buy_one, book, "T") == Rational(-1, 2));

  BetPortfolio stray{{{Event::from_labels(s, {"T"}), Rational(1)}}};
  CHECK_THROWS_AS(settle(stray, book, "H"), std::invalid_argument);
  CHECK_THROWS_AS(settle(buy_one, book, 7), std::invalid_argument);
}

TEST_CASE("each axiom violation is caught on its own") {
  auto s = make_space({"a", "b", "c"});

  SECTION("A1: negative price") {
    PriceBook book(BettingContext("x", s));
    book.set_price(Event::from_labels(s, {"a"}), Rational(-1, 7));
    CHECK_FALSE(check_coherence(book).coherent);
  }
  SECTION("A1: price above one") {
    PriceBook book(BettingContext("x", s));
    book.set_price(Event::from_labels(s, {"a", "b"}), Rational(6, 5));
    CHECK_FALSE(check_coherence(book).coherent);
  }
  SECTION("A2: certain event mispriced") {
    PriceBook book(BettingContext("x", s));
    book.set_price(Event::full(s), Rational(99, 100));
    CHECK_FALSE(check_coherence(book).coherent);
  }
  SECTION("A3: additivity broken on disjoint events") {
    PriceBook book(BettingContext("x", s));
    book.set_price(Event::from_labels(s, {"a"}), Rational(1, 3));
    book.set_price(Event::from_labels(s, {"b"}), Rational(1, 3));
    book.set_price(Event::from_labels(s, {"a", "b"}), Rational(3, 4));
    CHECK_FALSE(check_coherence(book).coherent);
  }
  SECTION("the same book with additivity intact is coherent") {
    PriceBook book(BettingContext("x", s));
    book.set_price(Event::from_labels(s, {"a"}), Rational(1, 3));
    book.set_price(Event::from_labels(s, {"b"}), Rational(1, 3));
    book.set_price(Event::from_labels(s, {"a", "b"}), Rational(2, 3));
    CHECK(check_coherence(book).coherent);
  }
}

TEST_CASE("input validation") {
  auto s = make_space({"a", "b"});
  auto other = make_space({"a", "b"});
  PriceBook book(BettingContext("x", s));
  CHECK_THROWS_AS(book.set_price(Event::from_labels(other, {"a"}), Rational(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(check_coherence(book), std::invalid_argument);  // empty book
  book.set_price(Event::from_labels(s, {"a"}), Rational(1, 2));
  CHECK_THROWS_AS(book.set_price(Event::from_labels(s, {"a"}), Rational(1, 3)), std::invalid_argument);
}

TEST_CASE("check_coherence agrees with the convex-hull oracle") {
  std::mt19937_64 rng(20130815);
  int incoherent_seen = 0;
  int coherent_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    PriceBook book = oracles::random_price_book(rng);
    CoherenceVerdict verdict = check_coherence(book);
    const bool oracle = oracles::hull_coherent(book);
    INFO("trial " << trial);
    REQUIRE(verdict.coherent == oracle);

    if (!verdict.coherent) {
      ++incoherent_seen;
      REQUIRE(*verdict.guaranteed_loss > 0);
      for (std::size_t atom = 0; atom < book.context().space->size(); ++atom) {
        const Rational payoff = settle(*verdict.witness, book, static_cast<int>(atom));
        REQUIRE(payoff < 0);
        REQUIRE(payoff <= -*verdict.guaranteed_loss);
      }
    } else {
      ++coherent_seen;
      const ProbabilityMeasure& ext = *verdict.extension;
      Rational total = 0;
      for (const Rational& p : ext.atom_probs) {
        REQUIRE(p >= 0);
        total += p;
      }
      REQUIRE(total == 1);
      for (const auto& [event, price] : book.prices()) {
        REQUIRE(ext.prob(event) == price);
      }
    }
  }
  CHECK(incoherent_seen > 20);
  CHECK(coherent_seen > 20);
}

TEST_CASE("no portfolio beats a coherent book") {
  std::mt19937_64 rng(424242);
  int coherent_books = 0;
  while (coherent_books < 20) {
    PriceBook book = oracles::random_price_book(rng);
    CoherenceVerdict verdict = check_coherence(book);
    if (!verdict.coherent) continue;
    ++coherent_books;
    for (int trial = 0; trial < 500; ++trial) {
      BetPortfolio portfolio;
      for (const auto& [event, price] : book.prices()) {
        const Rational stake = oracles::random_rational(rng, 4, 3);
        if (stake != 0) portfolio.stakes.emplace_back(event, stake);
      }
      if (portfolio.stakes.empty()) continue;
      Rational best = settle(portfolio, book, 0);
      for (std::size_t atom = 1; atom < book.context().space->size(); ++atom) {
        best = std::max(best, settle(portfolio, book, static_cast<int>(atom)));
      }
      // The bookie cannot lock in a gain: some outcome pays the agent >= 0.
      REQUIRE(best >= 0);
    }
  }
}
