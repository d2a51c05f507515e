#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcoh/rational.hpp"

namespace qcoh {

/// Word/attribute table for the twenty-questions game. Every word must be
/// distinguishable by its attribute row.
struct Lexicon {
  std::vector<std::string> words;
  std::vector<std::string> attributes;
  std::vector<std::vector<bool>> table;  // table[word][attribute]

  int word_index(const std::string& w) const {
    const auto it = std::find(words.begin(), words.end(), w);
    if (it == words.end()) throw std::invalid_argument("lexicon: unknown word \"" + w + "\"");
    return static_cast<int>(it - words.begin());
  }

  int attribute_index(const std::string& a) const {
    const auto it = std::find(attributes.begin(), attributes.end(), a);
    if (it == attributes.end()) throw std::invalid_argument("lexicon: unknown attribute \"" + a + "\"");
    return static_cast<int>(it - attributes.begin());
  }
};

inline Lexicon make_lexicon(std::vector<std::string> words, std::vector<std::string> attributes,
                            std::vector<std::vector<bool>> table) {
  if (words.empty()) throw std::invalid_argument("lexicon: no words");
  if (attributes.empty()) throw std::invalid_argument("lexicon: no attributes");
  if (table.size() != words.size()) throw std::invalid_argument("lexicon: table row count mismatch");
  for (std::size_t w = 0; w < table.size(); ++w) {
    if (table[w].size() != attributes.size()) {
      throw std::invalid_argument("lexicon: table row for \"" + words[w] + "\" has wrong width");
    }
    for (std::size_t v = 0; v < w; ++v) {
      if (table[v] == table[w]) {
        throw std::invalid_argument("lexicon: words \"" + words[v] + "\" and \"" + words[w] +
                                    "\" are indistinguishable by attributes");
      }
    }
  }
  return Lexicon{std::move(words), std::move(attributes), std::move(table)};
}

struct Proposition {
  enum class Kind { WordIs, AttributeIs };
  Kind kind = Kind::WordIs;
  std::string word;
  int attribute = -1;
  bool value = true;

  static Proposition word_is(std::string w) {
    Proposition p;
    p.kind = Kind::WordIs;
    p.word = std::move(w);
    return p;
  }
  static Proposition attribute_is(int attribute, bool value) {
    Proposition p;
    p.kind = Kind::AttributeIs;
    p.attribute = attribute;
    p.value = value;
    return p;
  }
};

enum class BetStatus { Open, Won, Lost, Void };

inline const char* to_string(BetStatus s) {
  switch (s) {
    case BetStatus::Open: return "open";
    case BetStatus::Won: return "won";
    case BetStatus::Lost: return "lost";
    case BetStatus::Void: return "void";
  }
  return "open";
}

struct Bet {
  int id = 0;
  int respondent = 0;
  Proposition proposition;
  Rational price;
  BetStatus status = BetStatus::Open;
};

/// Net cash for the agent once a bet's status is final: a won ticket pays 1,
/// a lost one pays nothing, a void one is refunded in full.
inline Rational bet_net(const Bet& bet) {
  switch (bet.status) {
    case BetStatus::Won: return Rational(1) - bet.price;
    case BetStatus::Lost: return -bet.price;
    default: return Rational(0);
  }
}

struct TranscriptEntry {
  int respondent;
  int attribute;
  bool answer;
};

/// Twenty questions, surprise version. Respondents never commit to a word;
/// each answer only has to leave some word compatible with everything said
/// so far. In the default mode a respondent departs immediately after
/// answering, freezing what can ever be known about "their" word; bets are
/// settled against exactly that horizon, so propositions the transcript
/// neither entails nor refutes come out void.
class Game {
 public:
  Game(Lexicon lexicon, int n_respondents, std::uint64_t seed, int question_budget = 20,
       bool depart_after_answer = true)
      : lex_(std::move(lexicon)),
        rng_(seed),
        budget_(question_budget),
        depart_after_answer_(depart_after_answer) {
    if (n_respondents < 1) throw std::invalid_argument("game: need at least one respondent");
    if (budget_ < 1) throw std::invalid_argument("game: question budget must be positive");
    const std::vector<char> full(lex_.words.size(), 1);
    respondents_.assign(static_cast<std::size_t>(n_respondents), {full, false});
    consistent_ = full;
  }

  const Lexicon& lexicon() const { return lex_; }
  int n_respondents() const { return static_cast<int>(respondents_.size()); }
  bool departed(int r) const { return respondent(r).departed; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  const std::vector<Bet>& bets() const { return bets_; }

  /// Words compatible with the whole transcript so far.
  std::vector<std::string> consistent_words() const { return words_in(consistent_); }

  /// Words compatible with everything respondent r heard before departing.
  std::vector<std::string> knowable_words(int r) const { return words_in(respondent(r).compatible); }

  bool ended() const {
    if (static_cast<int>(transcript_.size()) >= budget_) return true;
    if (!depart_after_answer_) return false;
    return std::all_of(respondents_.begin(), respondents_.end(), [](const Respondent& r) { return r.departed; });
  }

  bool ask(int respondent_idx, const std::string& attribute) { return ask(respondent_idx, lex_.attribute_index(attribute)); }

  bool ask(int respondent_idx, int attribute) {
    Respondent& resp = respondent(respondent_idx);
    if (resp.departed) {
      throw std::invalid_argument("game: respondent " + std::to_string(respondent_idx) +
                                  " has departed and is outside our reach");
    }
    if (attribute < 0 || static_cast<std::size_t>(attribute) >= lex_.attributes.size()) {
      throw std::invalid_argument("game: unknown attribute index " + std::to_string(attribute));
    }
    if (static_cast<int>(transcript_.size()) >= budget_) {
      throw std::invalid_argument("game: question budget exhausted");
    }

    // An answer is viable iff some word stays compatible with the whole
    // transcript; with two viable answers the respondent flips a seeded coin.
    const bool yes_viable = any_surviving(consistent_, attribute, true);
    const bool no_viable = any_surviving(consistent_, attribute, false);
    bool answer;
    if (yes_viable && no_viable) {
      answer = std::uniform_int_distribution<int>(0, 1)(rng_) == 1;
    } else if (yes_viable || no_viable) {
      answer = yes_viable;
    } else {
      throw std::logic_error("game: consistent word set emptied; invariant broken");
    }

    filter(consistent_, attribute, answer);
    for (auto& r : respondents_) {
      if (!r.departed) filter(r.compatible, attribute, answer);
    }
    transcript_.push_back({respondent_idx, attribute, answer});
    if (depart_after_answer_) resp.departed = true;
    return answer;
  }

  Bet& place_bet(int respondent_idx, Proposition proposition, Rational price) {
    respondent(respondent_idx);  // existence check
    if (price < 0 || price > 1) {
      throw std::invalid_argument("game: bet price " + format_rational(price) + " outside [0,1]");
    }
    if (proposition.kind == Proposition::Kind::WordIs) {
      lex_.word_index(proposition.word);
    } else if (proposition.attribute < 0 || static_cast<std::size_t>(proposition.attribute) >= lex_.attributes.size()) {
      throw std::invalid_argument("game: bet on unknown attribute");
    }
    Bet bet;
    bet.id = static_cast<int>(bets_.size());
    bet.respondent = respondent_idx;
    bet.proposition = std::move(proposition);
    bet.price = std::move(price);
    bets_.push_back(std::move(bet));
    return bets_.back();
  }

  /// Settles every bet against what is knowable about its respondent's
  /// word: won if the proposition holds for every knowable word, lost if
  /// for none, void (refund) otherwise. Answers never given are never
  /// consulted.
  std::vector<Bet> resolve_bets() {
    if (!ended()) {
      throw std::invalid_argument("game: cannot settle bets before the game ends");
    }
    for (Bet& bet : bets_) {
      if (bet.status != BetStatus::Open) continue;
      bet.status = evaluate(bet, respondent(bet.respondent).compatible);
    }
    return bets_;
  }

 private:
  struct Respondent {
    std::vector<char> compatible;
    bool departed = false;
  };

  Respondent& respondent(int r) {
    if (r < 0 || static_cast<std::size_t>(r) >= respondents_.size()) {
      throw std::invalid_argument("game: no respondent " + std::to_string(r));
    }
    return respondents_[static_cast<std::size_t>(r)];
  }
  const Respondent& respondent(int r) const { return const_cast<Game*>(this)->respondent(r); }

  bool any_surviving(const std::vector<char>& set, int attribute, bool answer) const {
    for (std::size_t w = 0; w < set.size(); ++w) {
      if (set[w] && lex_.table[w][static_cast<std::size_t>(attribute)] == answer) return true;
    }
    return false;
  }

  void filter(std::vector<char>& set, int attribute, bool answer) const {
    for (std::size_t w = 0; w < set.size(); ++w) {
      if (set[w] && lex_.table[w][static_cast<std::size_t>(attribute)] != answer) set[w] = 0;
    }
  }

  std::vector<std::string> words_in(const std::vector<char>& set) const {
    std::vector<std::string> out;
    for (std::size_t w = 0; w < set.size(); ++w) {
      if (set[w]) out.push_back(lex_.words[w]);
    }
    return out;
  }

  BetStatus evaluate(const Bet& bet, const std::vector<char>& knowable) const {
    bool any_true = false;
    bool any_false = false;
    for (std::size_t w = 0; w < knowable.size(); ++w) {
      if (!knowable[w]) continue;
      bool holds;
      if (bet.proposition.kind == Proposition::Kind::WordIs) {
        holds = lex_.words[w] == bet.proposition.word;
      } else {
        holds = lex_.table[w][static_cast<std::size_t>(bet.proposition.attribute)] == bet.proposition.value;
      }
      (holds ? any_true : any_false) = true;
    }
    if (any_true && !any_false) return BetStatus::Won;
    if (any_false && !any_true) return BetStatus::Lost;
    return BetStatus::Void;
  }

  Lexicon lex_;
  std::vector<Respondent> respondents_;
  std::vector<char> consistent_;
  std::vector<TranscriptEntry> transcript_;
  std::vector<Bet> bets_;
  std::mt19937_64 rng_;
  int budget_;
  bool depart_after_answer_;
};

struct AdversaryRound {
  std::string agent_context;
  std::string adversary_context;
  Rational paid;
};

struct AdversaryReport {
  std::vector<AdversaryRound> rounds;
  Rational cumulative_loss = 0;
};

/// The context-pricing refutation: an agent prices the betting contexts and
/// each round buys the ticket on the context they rate highest; an adversary
/// who picks the context after bets are laid always picks another one, so
/// the ticket never pays and the agent forfeits the price every round.
inline AdversaryReport adversarial_context_demo(const std::vector<std::pair<std::string, Rational>>& context_prices,
                                                int n_rounds, std::uint64_t seed) {
  if (context_prices.size() < 2) {
    throw std::invalid_argument("adversarial demo: with a single context the adversary has no freedom");
  }
  if (n_rounds < 1) throw std::invalid_argument("adversarial demo: need at least one round");
  for (const auto& [name, price] : context_prices) {
    if (price < 0 || price > 1) {
      throw std::invalid_argument("adversarial demo: price " + format_rational(price) + " for \"" + name +
                                  "\" outside [0,1]");
    }
  }

  std::size_t agent_pick = 0;
  for (std::size_t i = 1; i < context_prices.size(); ++i) {
    if (context_prices[i].second > context_prices[agent_pick].second) agent_pick = i;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> other(0, context_prices.size() - 2);
  AdversaryReport report;
  for (int round = 0; round < n_rounds; ++round) {
    std::size_t adv = other(rng);
    if (adv >= agent_pick) ++adv;
    const auto& [agent_name, agent_price] = context_prices[agent_pick];
    report.rounds.push_back({agent_name, context_prices[adv].first, agent_price});
    report.cumulative_loss += agent_price;
  }
  return report;
}

}  // namespace qcoh
