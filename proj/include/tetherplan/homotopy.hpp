#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "tetherplan/curve.hpp"
#include "tetherplan/gridmap.hpp"

namespace tetherplan {

/// One signed crossing of an obstacle component's ray.
struct Letter {
  int component = 0;
  int sign = 1;  // +1: crossed left to right, -1: right to left

  Letter inverse() const { return {component, -sign}; }
  friend constexpr auto operator<=>(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

/// Free-group reduction: cancels adjacent inverse pairs until none remain.
Word reduce(Word word);

/// Reduced word of signed ray crossings; equal signatures on equal-endpoint curves
/// in the obstacle-free space mean the curves are homotopic.
///
/// Each obstacle component casts a ray from its representative cell towards y = -inf
/// (the top of the map). Coincident rays are separated by a symbolic +x perturbation
/// that grows with the component id, so a vertex lying exactly on a ray's column
/// counts as left of it.
class HSignature {
 public:
  HSignature() = default;
  /// Reduces the given word.
  explicit HSignature(Word word);

  const Word& word() const { return word_; }
  bool empty() const { return word_.empty(); }

  friend bool operator==(const HSignature&, const HSignature&) = default;
  friend std::strong_ordering operator<=>(const HSignature& a, const HSignature& b) {
    return std::lexicographical_compare_three_way(a.word_.begin(), a.word_.end(), b.word_.begin(),
                                                  b.word_.end());
  }

 private:
  Word word_;
};

/// Appends the crossing letters of segment a->b, in traversal order, to out.
/// Does not check that the segment is obstacle-free.
void append_crossings(const GridWorld& world, Cell a, Cell b, Word& out);

/// Crossing letters of a vertex sequence; unreduced.
Word crossings(const GridWorld& world, std::span<const Cell> points);

/// Throws PreconditionError if any segment touches an obstacle cell.
HSignature signature(const Polyline& p, const GridWorld& world);

HSignature compose(const HSignature& a, const HSignature& b);
HSignature invert(const HSignature& s);

/// Throws PreconditionError when the endpoints differ.
bool homotopic(const Polyline& a, const Polyline& b, const GridWorld& world);

/// Interns reduced words as nodes of a trie so search states can carry a word by id.
/// Appending a letter that cancels the last one returns the parent node.
class WordTrie {
 public:
  using Id = std::uint32_t;
  static constexpr Id kEmpty = 0;

  WordTrie();

  Id append(Id word, Letter letter);
  Id append(Id word, std::span<const Letter> letters);
  /// True when append(word, letters) would return `to`. Does not intern anything.
  bool extends_to(Id word, std::span<const Letter> letters, Id to) const;
  Word word(Id id) const;
  HSignature signature(Id id) const { return HSignature(word(id)); }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Id parent;
    Letter last;
  };

  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, Id> children_;
};

}  // namespace tetherplan
