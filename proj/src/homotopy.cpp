#include "tetherplan/homotopy.hpp"

#include <algorithm>
#include <iterator>
#include <vector>

#include "tetherplan/errors.hpp"

namespace tetherplan {

Word reduce(Word word) {
  Word out;
  out.reserve(word.size());
  for (const Letter& l : word) {
    if (!out.empty() && out.back() == l.inverse()) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

HSignature::HSignature(Word word) : word_(reduce(std::move(word))) {}

void append_crossings(const GridWorld& world, Cell a, Cell b, Word& out) {
  if (a.x == b.x) return;
  const auto& comps = world.components();
  const int lo = std::min(a.x, b.x);
  const int hi = std::max(a.x, b.x);
  // Components are stored in (x, y) order of their representatives, which is also id order.
  auto it = std::lower_bound(comps.begin(), comps.end(), lo,
                             [](const ObstacleComponent& c, int x) { return c.representative.x < x; });
  const long long dx = b.x - a.x;
  const long long dy = b.y - a.y;
  const std::size_t first = out.size();
  for (; it != comps.end() && it->representative.x < hi; ++it) {
    const long long rx = it->representative.x;
    const long long ry = it->representative.y;
    // (y(rx) - ry) * dx; the crossing counts only on the ray side (y < ry).
    const long long num = (a.y - ry) * dx + dy * (rx - a.x);
    const bool above = dx > 0 ? (num < 0 || (num == 0 && dy < 0)) : (num > 0 || (num == 0 && dy > 0));
    if (above) out.push_back({it->id, dx > 0 ? 1 : -1});
  }
  if (dx < 0) std::reverse(out.begin() + static_cast<long>(first), out.end());
}

Word crossings(const GridWorld& world, std::span<const Cell> points) {
  Word out;
  for (std::size_t i = 1; i < points.size(); ++i) append_crossings(world, points[i - 1], points[i], out);
  return out;
}

HSignature signature(const Polyline& p, const GridWorld& world) {
  const auto& pts = p.points();
  if (!world.is_free(pts.front())) throw PreconditionError("signature: curve starts inside an obstacle");
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!segment_free(world, pts[i - 1], pts[i], Mask::Free)) {
      throw PreconditionError("signature: curve segment " + std::to_string(i - 1) + " intersects an obstacle");
    }
  }
  return HSignature(crossings(world, pts));
}

HSignature compose(const HSignature& a, const HSignature& b) {
  Word w = a.word();
  w.insert(w.end(), b.word().begin(), b.word().end());
  return HSignature(std::move(w));
}

HSignature invert(const HSignature& s) {
  Word w;
  w.reserve(s.word().size());
  for (auto it = s.word().rbegin(); it != s.word().rend(); ++it) w.push_back(it->inverse());
  return HSignature(std::move(w));
}

bool homotopic(const Polyline& a, const Polyline& b, const GridWorld& world) {
  if (a.front() != b.front() || a.back() != b.back()) {
    throw PreconditionError("homotopic: curves do not share both endpoints");
  }
  return signature(a, world) == signature(b, world);
}

namespace {

std::uint64_t child_key(WordTrie::Id parent, Letter l) {
  const auto code = static_cast<std::uint32_t>(2 * l.component + (l.sign < 0 ? 1 : 0));
  return (static_cast<std::uint64_t>(parent) << 32) | code;
}

}  // namespace

WordTrie::WordTrie() { nodes_.push_back({kEmpty, Letter{-1, 0}}); }

WordTrie::Id WordTrie::append(Id word, Letter letter) {
  if (word != kEmpty && nodes_[word].last == letter.inverse()) return nodes_[word].parent;
  const auto key = child_key(word, letter);
  if (auto it = children_.find(key); it != children_.end()) return it->second;
  const auto id = static_cast<Id>(nodes_.size());
  nodes_.push_back({word, letter});
  children_.emplace(key, id);
  return id;
}

WordTrie::Id WordTrie::append(Id word, std::span<const Letter> letters) {
  for (const Letter& l : letters) word = append(word, l);
  return word;
}

bool WordTrie::extends_to(Id word, std::span<const Letter> letters, Id to) const {
  // Letters that cancel into `word` walk up the trie; the rest pile up on a stack.
  Letter local[16];
  std::vector<Letter> spill;
  Letter* stack = local;
  if (letters.size() > std::size(local)) {
    spill.resize(letters.size());
    stack = spill.data();
  }
  std::size_t top = 0;
  for (const Letter& l : letters) {
    if (top > 0) {
      if (stack[top - 1] == l.inverse()) {
        --top;
      } else {
        stack[top++] = l;
      }
    } else if (word != kEmpty && nodes_[word].last == l.inverse()) {
      word = nodes_[word].parent;
    } else {
      stack[top++] = l;
    }
  }
  for (; top > 0; --top) {
    if (to == kEmpty || nodes_[to].last != stack[top - 1]) return false;
    to = nodes_[to].parent;
  }
  return to == word;
}

Word WordTrie::word(Id id) const {
  Word w;
  while (id != kEmpty) {
    w.push_back(nodes_[id].last);
    id = nodes_[id].parent;
  }
  std::reverse(w.begin(), w.end());
  return w;
}

}  // namespace tetherplan
