#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcoh/coherence.hpp"
#include "qcoh/entropy.hpp"
#include "qcoh/events.hpp"
#include "qcoh/frames.hpp"
#include "qcoh/hilbert.hpp"
#include "qcoh/kochen_specker.hpp"
#include "qcoh/rational.hpp"
#include "qcoh/twenty_questions.hpp"

namespace qcoh::io {

using json = nlohmann::json;

/// Rounds to 12 significant digits; every float we emit passes through here.
inline double round_sig(double x, int digits = 12) {
  if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in \"" + path + "\": " + e.what());
  }
  return j;
}

// ---------------------------------------------------------------------------
// scalar decoding: numbers may arrive as JSON numbers or "num/den" strings

inline Rational rational_from(const json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) {
    throw std::invalid_argument(what + ": expects an exact rational (\"num/den\" or integer), got a float");
  }
  throw std::invalid_argument(what + ": expected a rational");
}

inline double number_from(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
  throw std::invalid_argument(what + ": expected a number or \"num/den\" string");
}

inline Complex complex_from(const json& j, const std::string& what) {
  if (j.is_array()) {
    if (j.size() != 2) throw std::invalid_argument(what + ": complex entries are [re, im] pairs");
    return Complex(number_from(j[0], what), number_from(j[1], what));
  }
  return Complex(number_from(j, what), 0.0);
}

inline CVector vector_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument(what + ": expected a nonempty amplitude array");
  CVector v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = complex_from(j[i], what);
  return v;
}

inline CMatrix matrix_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument(what + ": expected a nonempty row-major matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() && !j[0].empty() && (j[0][0].is_array() || j[0][0].is_number() || j[0][0].is_string())
                               ? j[0].size()
                               : 0;
  if (cols == 0) throw std::invalid_argument(what + ": rows must be arrays of entries");
  CMatrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw std::invalid_argument(what + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<int>(r), static_cast<int>(c)) = complex_from(j[r][c], what);
  }
  return m;
}

// ---------------------------------------------------------------------------
// scalar encoding

inline json rational_json(const Rational& q) { return format_rational(q); }

inline json complex_json(const Complex& z) { return json::array({round_sig(z.real()), round_sig(z.imag())}); }

inline json vector_json(const CVector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

inline json matrix_json(const CMatrix& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

inline json event_json(const Event& e, const std::string& space_id) {
  return json{{"space", space_id}, {"atoms", atoms_of(e)}};
}

// ---------------------------------------------------------------------------
// domain objects

inline DensityOperator load_density(const json& j) {
  if (!j.contains("matrix")) throw std::invalid_argument("density file: missing \"matrix\"");
  CMatrix m = matrix_from(j["matrix"], "density matrix");
  if (j.contains("dim") && j["dim"].get<int>() != m.rows()) {
    throw std::invalid_argument("density file: declared dim disagrees with the matrix");
  }
  const DensityValidation v = validate_density(m);
  if (!v.value) {
    std::string msg = "density file rejected:";
    for (const auto& viol : v.diagnostic.violations) msg += " [" + viol + "]";
    throw std::invalid_argument(msg);
  }
  return *v.value;
}

inline std::vector<QuantumContext> load_contexts(const json& j) {
  if (!j.contains("contexts") || !j["contexts"].is_array() || j["contexts"].empty()) {
    throw std::invalid_argument("contexts file: missing nonempty \"contexts\" array");
  }
  std::vector<QuantumContext> out;
  for (const auto& jc : j["contexts"]) {
    if (!jc.contains("id") || !jc.contains("basis")) {
      throw std::invalid_argument("contexts file: each context needs \"id\" and \"basis\"");
    }
    std::vector<StateVector> basis;
    for (const auto& row : jc["basis"]) {
      basis.push_back(StateVector::normalized(vector_from(row, "basis vector")));
    }
    std::vector<std::string> labels;
    if (jc.contains("labels")) labels = jc["labels"].get<std::vector<std::string>>();
    out.emplace_back(jc["id"].get<std::string>(), std::move(basis), std::move(labels));
  }
  return out;
}

inline json contexts_json(const std::vector<QuantumContext>& contexts) {
  json arr = json::array();
  for (const auto& ctx : contexts) {
    json basis = json::array();
    for (const auto& b : ctx.basis()) basis.push_back(vector_json(b.amplitudes()));
    arr.push_back(json{{"id", ctx.id()}, {"basis", basis}, {"labels", ctx.space()->atoms()}});
  }
  return arr;
}

/// Frame files carry contexts plus one singleton-event assignment per atom;
/// probabilities of composite events are derived additively, so only atom
/// assignments are accepted.
inline Frame load_frame(const json& j) {
  std::vector<QuantumContext> contexts = load_contexts(j);
  if (!j.contains("assignments") || !j["assignments"].is_array()) {
    throw std::invalid_argument("frame file: missing \"assignments\" array");
  }
  std::vector<std::vector<double>> probs(contexts.size());
  std::vector<std::vector<char>> seen(contexts.size());
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    probs[c].assign(contexts[c].space()->size(), 0.0);
    seen[c].assign(contexts[c].space()->size(), 0);
  }
  for (const auto& ja : j["assignments"]) {
    if (!ja.contains("context") || !ja.contains("atoms") || !ja.contains("prob")) {
      throw std::invalid_argument("frame file: assignments need \"context\", \"atoms\", \"prob\"");
    }
    const std::string id = ja["context"].get<std::string>();
    int ctx_index = -1;
    for (std::size_t c = 0; c < contexts.size(); ++c) {
      if (contexts[c].id() == id) ctx_index = static_cast<int>(c);
    }
    if (ctx_index < 0) throw std::invalid_argument("frame file: assignment for unknown context \"" + id + "\"");
    const auto atoms = ja["atoms"].get<std::vector<std::string>>();
    if (atoms.size() != 1) {
      throw std::invalid_argument("frame file: assignments are atom-level; composite events derive additively");
    }
    const int atom = contexts[static_cast<std::size_t>(ctx_index)].space()->index_of(atoms[0]);
    if (seen[static_cast<std::size_t>(ctx_index)][static_cast<std::size_t>(atom)]) {
      throw std::invalid_argument("frame file: atom \"" + atoms[0] + "\" of context \"" + id + "\" assigned twice");
    }
    seen[static_cast<std::size_t>(ctx_index)][static_cast<std::size_t>(atom)] = 1;
    probs[static_cast<std::size_t>(ctx_index)][static_cast<std::size_t>(atom)] = number_from(ja["prob"], "assignment prob");
  }
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    for (std::size_t a = 0; a < seen[c].size(); ++a) {
      if (!seen[c][a]) {
        throw std::invalid_argument("frame file: atom \"" + contexts[c].space()->label(static_cast<int>(a)) +
                                    "\" of context \"" + contexts[c].id() + "\" has no assignment");
      }
    }
  }
  return Frame(std::move(contexts), std::move(probs));
}

inline json frame_json(const Frame& frame) {
  std::vector<QuantumContext> contexts;
  for (std::size_t c = 0; c < frame.n_contexts(); ++c) contexts.push_back(frame.context(static_cast<int>(c)));
  json assignments = json::array();
  for (std::size_t c = 0; c < frame.n_contexts(); ++c) {
    const auto& ctx = frame.context(static_cast<int>(c));
    for (std::size_t a = 0; a < ctx.space()->size(); ++a) {
      assignments.push_back(json{{"context", ctx.id()},
                                 {"atoms", json::array({ctx.space()->label(static_cast<int>(a))})},
                                 {"prob", round_sig(frame.atom_probs(static_cast<int>(c))[a])}});
    }
  }
  return json{{"contexts", contexts_json(contexts)}, {"assignments", assignments}};
}

/// Price book: the context's sample space is declared by "atoms"; each price
/// attaches to the event whose member atoms are listed.
inline PriceBook load_price_book(const json& j) {
  if (!j.contains("context") || !j.contains("atoms") || !j.contains("prices")) {
    throw std::invalid_argument("price book: needs \"context\", \"atoms\", \"prices\"");
  }
  SpacePtr space = make_space(j["atoms"].get<std::vector<std::string>>());
  BettingContext ctx(j["context"].get<std::string>(), space);
  PriceBook book(ctx);
  if (!j["prices"].is_array() || j["prices"].empty()) {
    throw std::invalid_argument("price book: \"prices\" must be a nonempty array");
  }
  for (const auto& jp : j["prices"]) {
    if (!jp.contains("atoms") || !jp.contains("price")) {
      throw std::invalid_argument("price book: each price needs \"atoms\" and \"price\"");
    }
    Event event = Event::from_labels(space, jp["atoms"].get<std::vector<std::string>>());
    book.set_price(event, rational_from(jp["price"], "price"));
  }
  return book;
}

inline json portfolio_json(const BetPortfolio& portfolio, const std::string& space_id) {
  json stakes = json::array();
  for (const auto& [event, stake] : portfolio.stakes) {
    stakes.push_back(json{{"event", event_json(event, space_id)}, {"stake", rational_json(stake)}});
  }
  return stakes;
}

inline json measure_json(const ProbabilityMeasure& measure) {
  json atoms = json::object();
  const auto& labels = measure.context.space->atoms();
  for (std::size_t i = 0; i < labels.size(); ++i) atoms[labels[i]] = rational_json(measure.atom_probs[i]);
  return json{{"context", measure.context.id}, {"atom_probs", atoms}};
}

inline KSInstance load_ks_instance(const json& j) {
  if (!j.contains("dim") || !j.contains("rays") || !j.contains("bases")) {
    throw std::invalid_argument("ks instance: needs \"dim\", \"rays\", \"bases\"");
  }
  const int dim = j["dim"].get<int>();
  std::vector<StateVector> rays;
  for (const auto& row : j["rays"]) rays.push_back(StateVector::normalized(vector_from(row, "ray")));
  std::vector<std::vector<int>> bases;
  for (const auto& b : j["bases"]) bases.push_back(b.get<std::vector<int>>());
  return build_instance(dim, std::move(rays), std::move(bases));
}

inline Lexicon load_lexicon(const json& j) {
  if (!j.contains("words") || !j.contains("attributes") || !j.contains("table")) {
    throw std::invalid_argument("lexicon: needs \"words\", \"attributes\", \"table\"");
  }
  return make_lexicon(j["words"].get<std::vector<std::string>>(),
                      j["attributes"].get<std::vector<std::string>>(),
                      j["table"].get<std::vector<std::vector<bool>>>());
}

inline Distribution load_distribution(const json& j) {
  if (!j.contains("probs") || !j["probs"].is_array()) {
    throw std::invalid_argument("distribution: needs a \"probs\" array");
  }
  std::vector<double> probs;
  for (const auto& p : j["probs"]) probs.push_back(number_from(p, "prob"));
  return Distribution(std::move(probs));
}

struct ScriptBet {
  int respondent = 0;
  std::optional<std::string> word;
  std::optional<std::string> attribute;
  bool value = true;
  Rational price;
};

struct GameScript {
  int respondents = 1;
  std::optional<std::uint64_t> seed;
  int budget = 20;
  bool classic = false;
  std::vector<std::pair<int, std::string>> questions;  // (respondent, attribute)
  std::vector<ScriptBet> bets;
};

inline GameScript load_script(const json& j) {
  GameScript script;
  if (!j.contains("respondents")) throw std::invalid_argument("script: missing \"respondents\"");
  script.respondents = j["respondents"].get<int>();
  if (j.contains("seed")) script.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("budget")) script.budget = j["budget"].get<int>();
  if (j.contains("classic")) script.classic = j["classic"].get<bool>();
  if (j.contains("questions")) {
    for (const auto& q : j["questions"]) {
      if (!q.contains("respondent") || !q.contains("attribute")) {
        throw std::invalid_argument("script: questions need \"respondent\" and \"attribute\"");
      }
      script.questions.emplace_back(q["respondent"].get<int>(), q["attribute"].get<std::string>());
    }
  }
  if (j.contains("bets")) {
    for (const auto& b : j["bets"]) {
      ScriptBet bet;
      if (!b.contains("respondent") || !b.contains("price")) {
        throw std::invalid_argument("script: bets need \"respondent\" and \"price\"");
      }
      bet.respondent = b["respondent"].get<int>();
      bet.price = rational_from(b["price"], "bet price");
      if (b.contains("word")) {
        bet.word = b["word"].get<std::string>();
      } else if (b.contains("attribute")) {
        bet.attribute = b["attribute"].get<std::string>();
        bet.value = b.value("value", true);
      } else {
        throw std::invalid_argument("script: a bet needs either \"word\" or \"attribute\"");
      }
      script.bets.push_back(std::move(bet));
    }
  }
  return script;
}

inline std::vector<std::pair<std::string, Rational>> load_context_prices(const json& j) {
  if (!j.contains("prices") || !j["prices"].is_object() || j["prices"].size() < 1) {
    throw std::invalid_argument("context prices: needs a \"prices\" object");
  }
  std::vector<std::pair<std::string, Rational>> out;
  for (const auto& [name, value] : j["prices"].items()) {
    out.emplace_back(name, rational_from(value, "context price"));
  }
  return out;
}

}  // namespace qcoh::io
