#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace qcoh {

/// Finite sample space: an ordered list of distinct atom labels.
///
/// Spaces have identity. Two spaces built from the same labels are still
/// distinct algebras; events are only combinable when they share the same
/// owning space instance. Betting contexts do not share a global algebra.
class SampleSpace {
 public:
  explicit SampleSpace(std::vector<std::string> atom_labels) : atoms_(std::move(atom_labels)) {
    if (atoms_.empty()) {
      throw std::invalid_argument("sample space: atom list is empty");
    }
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (atoms_[i].empty()) {
        throw std::invalid_argument("sample space: empty atom label at position " + std::to_string(i));
      }
      auto [it, inserted] = index_.emplace(atoms_[i], static_cast<int>(i));
      if (!inserted) {
        throw std::invalid_argument("sample space: duplicate atom label \"" + atoms_[i] + "\"");
      }
    }
  }

  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& label(int i) const { return atoms_.at(static_cast<std::size_t>(i)); }

  int index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) {
      throw std::invalid_argument("sample space: unknown atom label \"" + label + "\"");
    }
    return it->second;
  }

  bool has_label(const std::string& label) const { return index_.count(label) > 0; }

  /// Label-level equality; instance identity is what gates event algebra.
  bool same_labels(const SampleSpace& other) const { return atoms_ == other.atoms_; }

 private:
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, int> index_;
};

using SpacePtr = std::shared_ptr<const SampleSpace>;

inline SpacePtr make_space(std::vector<std::string> atom_labels) {
  return std::make_shared<const SampleSpace>(std::move(atom_labels));
}

/// An event is a subset of one space's atoms, held as sorted unique indices.
class Event {
 public:
  Event(SpacePtr space, std::vector<int> members) : space_(std::move(space)), members_(std::move(members)) {
    if (!space_) {
      throw std::invalid_argument("event: null space");
    }
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (int m : members_) {
      if (m < 0 || static_cast<std::size_t>(m) >= space_->size()) {
        throw std::invalid_argument("event: atom index " + std::to_string(m) + " outside space of size " +
                                    std::to_string(space_->size()));
      }
    }
  }

  static Event from_labels(const SpacePtr& space, const std::vector<std::string>& labels) {
    std::vector<int> members;
    members.reserve(labels.size());
    for (const auto& l : labels) members.push_back(space->index_of(l));
    return Event(space, std::move(members));
  }

  static Event empty(const SpacePtr& space) { return Event(space, {}); }

  static Event full(const SpacePtr& space) {
    std::vector<int> all(space->size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return Event(space, std::move(all));
  }

  const SpacePtr& space() const { return space_; }
  const std::vector<int>& members() const { return members_; }
  std::size_t cardinality() const { return members_.size(); }
  bool is_empty() const { return members_.empty(); }
  bool is_full() const { return members_.size() == space_->size(); }

  bool contains(int atom) const { return std::binary_search(members_.begin(), members_.end(), atom); }

  /// Same owning space instance and same member set.
  bool operator==(const Event& other) const {
    return space_.get() == other.space_.get() && members_ == other.members_;
  }
  bool operator!=(const Event& other) const { return !(*this == other); }

 private:
  SpacePtr space_;
  std::vector<int> members_;
};

/// A betting context: an id plus its own sample space.
struct BettingContext {
  std::string id;
  SpacePtr space;

  BettingContext(std::string context_id, SpacePtr context_space)
      : id(std::move(context_id)), space(std::move(context_space)) {
    if (!space) throw std::invalid_argument("betting context: null space");
  }
};

enum class BoolOp { And, Or, Not };

namespace detail {
inline void require_same_space(const Event& a, const Event& b) {
  if (a.space().get() != b.space().get()) {
    throw std::invalid_argument(
        "events from different spaces cannot be combined: no common algebra across betting contexts");
  }
}
}  // namespace detail

inline Event event_and(const Event& a, const Event& b) {
  detail::require_same_space(a, b);
  std::vector<int> out;
  std::set_intersection(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                        std::back_inserter(out));
  return Event(a.space(), std::move(out));
}

inline Event event_or(const Event& a, const Event& b) {
  detail::require_same_space(a, b);
  std::vector<int> out;
  std::set_union(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                 std::back_inserter(out));
  return Event(a.space(), std::move(out));
}

inline Event event_not(const Event& a) {
  std::vector<int> out;
  for (std::size_t i = 0; i < a.space()->size(); ++i) {
    if (!a.contains(static_cast<int>(i))) out.push_back(static_cast<int>(i));
  }
  return Event(a.space(), std::move(out));
}

inline Event boolean_combine(BoolOp op, const Event& e1, const std::optional<Event>& e2 = std::nullopt) {
  switch (op) {
    case BoolOp::And:
      if (!e2) throw std::invalid_argument("AND takes two events");
      return event_and(e1, *e2);
    case BoolOp::Or:
      if (!e2) throw std::invalid_argument("OR takes two events");
      return event_or(e1, *e2);
    case BoolOp::Not:
      if (e2) throw std::invalid_argument("NOT takes one event");
      return event_not(e1);
  }
  throw std::invalid_argument("unknown boolean operation");
}

/// Labels of the member atoms, in space order.
inline std::vector<std::string> atoms_of(const Event& e) {
  std::vector<std::string> labels;
  labels.reserve(e.cardinality());
  for (int m : e.members()) labels.push_back(e.space()->label(m));
  return labels;
}

}  // namespace qcoh
