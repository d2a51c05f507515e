#include <catch2/catch_amalgamated.hpp>

#include "qcoh/events.hpp"

using namespace qcoh;

namespace {

SpacePtr dice() { return make_space({"1", "2", "3", "4", "5", "6"}); }

Event from_mask(const SpacePtr& s, unsigned mask) {
  std::vector<int> members;
  for (std::size_t i = 0; i < s->size(); ++i) {
    if (mask & (1u << i)) members.push_back(static_cast<int>(i));
  }
  return Event(s, std::move(members));
}

}  // namespace

TEST_CASE("sample space construction") {
  auto d = dice();
  CHECK(d->size() == 6);
  CHECK(d->label(0) == "1");
  CHECK(d->index_of("6") == 5);

  CHECK(make_space({"H", "T"})->size() == 2);

  CHECK_THROWS_AS(make_space({}), std::invalid_argument);
  CHECK_THROWS_AS(make_space({"a", "a"}), std::invalid_argument);
  CHECK_THROWS_AS(make_space({"a", ""}), std::invalid_argument);
}

TEST_CASE("boolean operations on dice events") {
  auto d = dice();
  const Event odd = Event::from_labels(d, {"1", "3", "5"});
  const Event low = Event::from_labels(d, {"1", "2"});

  CHECK(atoms_of(event_and(odd, low)) == std::vector<std::string>{"1"});
  CHECK(atoms_of(event_not(odd)) == std::vector<std::string>{"2", "4", "6"});
  CHECK(event_or(odd, event_not(odd)) == Event::full(d));

  CHECK(boolean_combine(BoolOp::And, odd, low) == event_and(odd, low));
  CHECK(boolean_combine(BoolOp::Not, odd) == event_not(odd));
  CHECK_THROWS_AS(boolean_combine(BoolOp::Not, odd, low), std::invalid_argument);
  CHECK_THROWS_AS(boolean_combine(BoolOp::And, odd), std::invalid_argument);
}

TEST_CASE("atoms_of enumerates labels in space order") {
  auto d = dice();
  CHECK(atoms_of(Event::full(d)) == d->atoms());
  CHECK(atoms_of(Event::empty(d)).empty());
  CHECK(atoms_of(Event(d, {5, 1, 3})) == std::vector<std::string>{"2", "4", "6"});
}

TEST_CASE("boolean algebra laws hold exhaustively") {
  auto d = dice();
  const unsigned total = 1u << d->size();
  for (unsigned a = 0; a < total; ++a) {
    const Event ea = from_mask(d, a);
    CHECK(event_not(event_not(ea)) == ea);
    for (unsigned b = 0; b < total; ++b) {
      const Event eb = from_mask(d, b);
      CHECK(event_not(event_and(ea, eb)) == event_or(event_not(ea), event_not(eb)));
      CHECK(event_not(event_or(ea, eb)) == event_and(event_not(ea), event_not(eb)));
    }
  }

  // Distributivity over all triples on a 4-atom space.
  auto s4 = make_space({"a", "b", "c", "d"});
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      for (unsigned c = 0; c < 16; ++c) {
        const Event ea = from_mask(s4, a), eb = from_mask(s4, b), ec = from_mask(s4, c);
        CHECK(event_and(ea, event_or(eb, ec)) == event_or(event_and(ea, eb), event_and(ea, ec)));
        CHECK(event_or(ea, event_and(eb, ec)) == event_and(event_or(ea, eb), event_or(ea, ec)));
      }
    }
  }
}

TEST_CASE("events from different spaces never combine") {
  auto d1 = dice();
  auto d2 = dice();  // identical labels, distinct algebra
  const Event e1 = Event::from_labels(d1, {"1"});
  const Event e2 = Event::from_labels(d2, {"2"});
  CHECK_THROWS_AS(event_and(e1, e2), std::invalid_argument);
  CHECK_THROWS_AS(event_or(e1, e2), std::invalid_argument);
  CHECK(e1 != Event::from_labels(d2, {"1"}));
  CHECK(e1 == Event::from_labels(d1, {"1"}));
}

TEST_CASE("event membership validation") {
  auto d = dice();
  CHECK_THROWS_AS(Event(d, {6}), std::invalid_argument);
  CHECK_THROWS_AS(Event(d, {-1}), std::invalid_argument);
  CHECK(Event(d, {2, 2, 0}).members() == std::vector<int>{0, 2});
}
