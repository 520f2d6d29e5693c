#pragma once

// Partitions of a labelled multipartite system and the coarsening calculus on them.
//
// A Partition is an ordered set of disjoint, nonempty blocks of labels drawn from
// a fixed universe. It need not cover the universe: a partition such as B|D of the
// universe {A,B,C,D} describes the subsystem BD split into two parties. Labels are
// ordered by their position in the universe, which is the insertion order of the
// state that defines them.

#include <bit>
#include <cctype>
#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "entmono/common.hpp"

namespace entmono {

using Block = std::vector<std::string>;

class Partition {
 public:
  Partition() = default;

  // Builds a partition from label blocks. Throws InvalidInput on unknown or
  // duplicate labels and on empty blocks.
  Partition(const std::vector<Block>& blocks, std::vector<std::string> universe)
      : universe_(std::move(universe)) {
    check_universe(universe_);
    std::uint64_t seen = 0;
    for (const auto& b : blocks) {
      if (b.empty()) throw InvalidInput("partition: empty block");
      std::uint64_t m = 0;
      for (const auto& label : b) {
        int i = index_of(label);
        if (i < 0) throw InvalidInput("partition: unknown label '" + label + "'");
        std::uint64_t bit = std::uint64_t{1} << i;
        if ((seen & bit) != 0) throw InvalidInput("partition: duplicate label '" + label + "'");
        seen |= bit;
        m |= bit;
      }
      masks_.push_back(m);
    }
    canonicalize();
  }

  // Builds a partition from bit masks over the universe positions.
  static Partition from_masks(std::vector<std::string> universe, std::vector<std::uint64_t> masks) {
    Partition p;
    p.universe_ = std::move(universe);
    check_universe(p.universe_);
    std::uint64_t seen = 0;
    std::uint64_t valid = p.universe_.size() == 64 ? ~std::uint64_t{0}
                                                   : (std::uint64_t{1} << p.universe_.size()) - 1;
    for (auto m : masks) {
      if (m == 0) throw InvalidInput("partition: empty block");
      if ((m & ~valid) != 0) throw InvalidInput("partition: block outside universe");
      if ((m & seen) != 0) throw InvalidInput("partition: overlapping blocks");
      seen |= m;
    }
    p.masks_ = std::move(masks);
    p.canonicalize();
    return p;
  }

  // The partition of `universe` into singletons.
  static Partition singletons(const std::vector<std::string>& universe) {
    std::vector<std::uint64_t> masks;
    for (std::size_t i = 0; i < universe.size(); ++i) masks.push_back(std::uint64_t{1} << i);
    return from_masks(universe, masks);
  }

  const std::vector<std::string>& universe() const { return universe_; }
  const std::vector<std::uint64_t>& masks() const { return masks_; }
  std::size_t size() const { return masks_.size(); }

  std::uint64_t support_mask() const {
    std::uint64_t s = 0;
    for (auto m : masks_) s |= m;
    return s;
  }

  // Universe positions of block `i`, ascending.
  std::vector<int> block_indices(std::size_t i) const {
    std::vector<int> out;
    for (std::uint64_t m = masks_.at(i); m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  Block block(std::size_t i) const {
    Block out;
    for (int k : block_indices(i)) out.push_back(universe_[k]);
    return out;
  }

  std::vector<Block> blocks() const {
    std::vector<Block> out;
    for (std::size_t i = 0; i < masks_.size(); ++i) out.push_back(block(i));
    return out;
  }

  // Labels of the support in universe order.
  std::vector<std::string> support() const {
    std::vector<std::string> out;
    for (std::uint64_t m = support_mask(); m != 0; m &= m - 1) out.push_back(universe_[std::countr_zero(m)]);
    return out;
  }

  bool covers_universe() const { return std::popcount(support_mask()) == static_cast<int>(universe_.size()); }

  int index_of(std::string_view label) const {
    for (std::size_t i = 0; i < universe_.size(); ++i)
      if (universe_[i] == label) return static_cast<int>(i);
    return -1;
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.universe_ == b.universe_ && a.masks_ == b.masks_;
  }
  friend bool operator<(const Partition& a, const Partition& b) {
    if (a.universe_ != b.universe_) return a.universe_ < b.universe_;
    if (a.masks_.size() != b.masks_.size()) return a.masks_.size() > b.masks_.size();
    return a.order_key() < b.order_key();
  }

 private:
  static void check_universe(const std::vector<std::string>& u) {
    if (u.size() > 64) throw DimensionGuard("partition: universe larger than 64 labels");
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].empty()) throw InvalidInput("partition: empty label in universe");
      for (std::size_t j = 0; j < i; ++j)
        if (u[i] == u[j]) throw InvalidInput("partition: duplicate label '" + u[i] + "' in universe");
    }
  }

  void canonicalize() {
    std::sort(masks_.begin(), masks_.end(),
              [](std::uint64_t a, std::uint64_t b) { return std::countr_zero(a) < std::countr_zero(b); });
  }

  std::vector<std::vector<int>> order_key() const {
    std::vector<std::vector<int>> key;
    for (std::size_t i = 0; i < masks_.size(); ++i) key.push_back(block_indices(i));
    return key;
  }

  std::vector<std::string> universe_;
  std::vector<std::uint64_t> masks_;
};

enum class CoarseningKind { DiscardBlocks, CombineBlocks, DiscardWithinBlock, Any };

inline constexpr std::size_t kMaxEnumerationLabels = 8;

namespace detail {

inline bool all_single_char(const std::vector<std::string>& labels) {
  return std::all_of(labels.begin(), labels.end(), [](const std::string& s) { return s.size() == 1; });
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Splits a block written without separators into universe labels. The
// segmentation must be unique.
inline Block segment_block(const std::string& text, const std::vector<std::string>& universe) {
  std::size_t n = text.size();
  std::vector<long> ways(n + 1, 0);
  std::vector<int> choice(n + 1, -1);
  ways[n] = 1;
  for (std::size_t pos = n; pos-- > 0;) {
    for (std::size_t u = 0; u < universe.size(); ++u) {
      const auto& label = universe[u];
      if (pos + label.size() <= n && text.compare(pos, label.size(), label) == 0 && ways[pos + label.size()] > 0) {
        ways[pos] = std::min<long>(2, ways[pos] + ways[pos + label.size()]);
        choice[pos] = static_cast<int>(u);
      }
    }
  }
  if (ways[0] == 0) throw InvalidInput("partition: unknown label in block '" + text + "'");
  if (ways[0] > 1) throw InvalidInput("partition: ambiguous block '" + text + "'; separate labels with commas");
  Block out;
  for (std::size_t pos = 0; pos < n;) {
    const auto& label = universe[choice[pos]];
    out.push_back(label);
    pos += label.size();
  }
  return out;
}

inline bool subset(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }

inline void require_same_universe(const Partition& x, const Partition& y) {
  if (x.universe() != y.universe()) throw InvalidInput("partition: universe mismatch");
}

inline void require_enumerable(const Partition& x) {
  if (x.universe().size() > kMaxEnumerationLabels)
    throw DimensionGuard("partition: enumeration limited to " + std::to_string(kMaxEnumerationLabels) + " labels");
}

// Masks of all set partitions of `mask`.
inline void set_partitions(std::uint64_t mask, std::vector<std::uint64_t>& current,
                           std::vector<std::vector<std::uint64_t>>& out) {
  if (mask == 0) {
    out.push_back(current);
    return;
  }
  std::uint64_t lowest = mask & (~mask + 1);
  std::uint64_t rest = mask & ~lowest;
  // Every block containing the lowest remaining label: lowest plus a subset of rest.
  for (std::uint64_t sub = rest;; sub = (sub - 1) & rest) {
    current.push_back(lowest | sub);
    set_partitions(rest & ~sub, current, out);
    current.pop_back();
    if (sub == 0) break;
  }
}

}  // namespace detail

// Parses "AB|C|DE". Within a block, labels are either comma separated or
// concatenated; concatenations are split against the universe.
inline Partition parse_partition(std::string_view text, const std::vector<std::string>& universe) {
  std::vector<Block> blocks;
  std::string_view rest = text;
  for (;;) {
    std::size_t bar = rest.find('|');
    std::string piece = detail::trim(rest.substr(0, bar));
    if (piece.empty()) throw InvalidInput("partition: empty block in '" + std::string(text) + "'");
    Block b;
    if (piece.find(',') != std::string::npos) {
      std::string_view pv = piece;
      for (;;) {
        std::size_t comma = pv.find(',');
        std::string label = detail::trim(pv.substr(0, comma));
        if (label.empty()) throw InvalidInput("partition: empty label in '" + std::string(text) + "'");
        b.push_back(label);
        if (comma == std::string_view::npos) break;
        pv = pv.substr(comma + 1);
      }
    } else {
      b = detail::segment_block(piece, universe);
    }
    blocks.push_back(std::move(b));
    if (bar == std::string_view::npos) break;
    rest = rest.substr(bar + 1);
  }
  return Partition(blocks, universe);
}

inline std::string format_partition(const Partition& p) {
  bool compact = detail::all_single_char(p.universe());
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += '|';
    auto b = p.block(i);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (j > 0 && !compact) out += ',';
      out += b[j];
    }
  }
  return out;
}

// Whether `y` is strictly coarser than `x` under the given move class.
inline bool is_coarser(const Partition& x, const Partition& y, CoarseningKind kind) {
  detail::require_same_universe(x, y);
  if (y.size() == 0 || x == y) return false;
  const auto& xm = x.masks();
  const auto& ym = y.masks();
  switch (kind) {
    case CoarseningKind::DiscardBlocks: {
      if (ym.size() >= xm.size()) return false;
      for (auto m : ym)
        if (std::find(xm.begin(), xm.end(), m) == xm.end()) return false;
      return true;
    }
    case CoarseningKind::CombineBlocks: {
      if (x.support_mask() != y.support_mask()) return false;
      for (auto m : xm) {
        bool inside = false;
        for (auto b : ym) inside = inside || detail::subset(m, b);
        if (!inside) return false;
      }
      return true;
    }
    case CoarseningKind::DiscardWithinBlock: {
      if (ym.size() != xm.size()) return false;
      std::vector<bool> used(xm.size(), false);
      for (auto b : ym) {
        bool found = false;
        for (std::size_t i = 0; i < xm.size() && !found; ++i) {
          if (!used[i] && detail::subset(b, xm[i])) {
            used[i] = true;
            found = true;
          }
        }
        if (!found) return false;
      }
      return true;
    }
    case CoarseningKind::Any: {
      if (!detail::subset(y.support_mask(), x.support_mask())) return false;
      for (auto m : xm) {
        int touched = 0;
        for (auto b : ym) touched += (m & b) != 0 ? 1 : 0;
        if (touched > 1) return false;
      }
      return true;
    }
  }
  return false;
}

// All partitions strictly coarser than `x` under the move class, in canonical
// order. Single-block results are included.
inline std::vector<Partition> enumerate_coarsenings(const Partition& x, CoarseningKind kind) {
  detail::require_enumerable(x);
  const bool discard = kind == CoarseningKind::DiscardBlocks || kind == CoarseningKind::Any;
  const bool combine = kind == CoarseningKind::CombineBlocks || kind == CoarseningKind::Any;
  const bool within = kind == CoarseningKind::DiscardWithinBlock || kind == CoarseningKind::Any;
  std::set<Partition> seen;
  std::deque<Partition> queue{x};
  auto visit = [&](std::vector<std::uint64_t> masks) {
    Partition p = Partition::from_masks(x.universe(), std::move(masks));
    if (seen.insert(p).second) queue.push_back(std::move(p));
  };
  while (!queue.empty()) {
    Partition p = std::move(queue.front());
    queue.pop_front();
    const auto& m = p.masks();
    const std::size_t k = m.size();
    if (discard && k >= 2) {
      for (std::size_t i = 0; i < k; ++i) {
        auto next = m;
        next.erase(next.begin() + static_cast<long>(i));
        visit(std::move(next));
      }
    }
    if (combine) {
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
          std::vector<std::uint64_t> next;
          for (std::size_t t = 0; t < k; ++t)
            if (t != i && t != j) next.push_back(m[t]);
          next.push_back(m[i] | m[j]);
          visit(std::move(next));
        }
    }
    if (within) {
      for (std::size_t i = 0; i < k; ++i) {
        if (std::popcount(m[i]) < 2) continue;
        for (std::uint64_t bits = m[i]; bits != 0; bits &= bits - 1) {
          auto next = m;
          next[i] &= ~(bits & (~bits + 1));
          visit(std::move(next));
        }
      }
    }
  }
  seen.erase(x);
  return {seen.begin(), seen.end()};
}

// Every partition of every nonempty subset of `universe` with at least
// `min_blocks` blocks, in canonical order.
inline std::vector<Partition> all_partitions(const std::vector<std::string>& universe, std::size_t min_blocks = 1) {
  if (universe.size() > kMaxEnumerationLabels)
    throw DimensionGuard("partition: enumeration limited to " + std::to_string(kMaxEnumerationLabels) + " labels");
  std::set<Partition> out;
  std::uint64_t full = (std::uint64_t{1} << universe.size()) - 1;
  for (std::uint64_t s = 1; s <= full; ++s) {
    std::vector<std::vector<std::uint64_t>> parts;
    std::vector<std::uint64_t> current;
    detail::set_partitions(s, current, parts);
    for (auto& masks : parts)
      if (masks.size() >= min_blocks) out.insert(Partition::from_masks(universe, std::move(masks)));
  }
  return {out.begin(), out.end()};
}

enum class XiRule {
  // y arises from x by discards alone or by a mixture of moves.
  General,
  // y arises from x purely by merging blocks; the zero targets are the merged
  // groups of x-blocks and everything coarser than them.
  MergedGroups,
};

inline XiRule xi_rule(const Partition& x, const Partition& y) {
  return is_coarser(x, y, CoarseningKind::CombineBlocks) ? XiRule::MergedGroups : XiRule::General;
}

// The set of partitions on which a completely monogamous measure must vanish
// whenever it takes equal values on x and on its coarsening y.
inline std::vector<Partition> xi_set(const Partition& x, const Partition& y) {
  if (!is_coarser(x, y, CoarseningKind::Any))
    throw InvalidInput("xi_set: '" + format_partition(y) + "' is not coarser than '" + format_partition(x) + "'");
  detail::require_enumerable(x);

  auto related_to_y = [&](const Partition& c) {
    return c == y || is_coarser(c, y, CoarseningKind::Any) || is_coarser(y, c, CoarseningKind::Any);
  };

  std::set<Partition> out;
  const auto& xm = x.masks();
  const auto& ym = y.masks();

  if (xi_rule(x, y) == XiRule::MergedGroups) {
    for (auto b : ym) {
      std::vector<std::uint64_t> group;
      for (auto m : xm)
        if (detail::subset(m, b)) group.push_back(m);
      if (group.size() < 2) continue;
      Partition g = Partition::from_masks(x.universe(), group);
      std::vector<Partition> family = enumerate_coarsenings(g, CoarseningKind::Any);
      family.push_back(g);
      for (auto& c : family)
        if (c.size() >= 2 && !related_to_y(c)) out.insert(c);
    }
    return {out.begin(), out.end()};
  }

  const std::uint64_t ysupp = y.support_mask();
  auto owner = [&](std::uint64_t bit) -> int {
    for (std::size_t i = 0; i < xm.size(); ++i)
      if ((xm[i] & bit) != 0) return static_cast<int>(i);
    return -1;
  };

  for (const auto& c : enumerate_coarsenings(x, CoarseningKind::Any)) {
    if (c.size() < 2 || related_to_y(c)) continue;
    const auto& cm = c.masks();
    std::uint64_t touched = 0;
    int touched_count = 0;
    for (auto b : ym) {
      if ((c.support_mask() & b) != 0) {
        touched |= b;
        ++touched_count;
      }
    }
    bool ok = true;
    if (touched_count <= 1) {
      std::vector<int> owners;
      for (auto m : cm) {
        int o = owner(m & (~m + 1));
        if (o < 0 || !detail::subset(m, xm[o]) || std::find(owners.begin(), owners.end(), o) != owners.end()) {
          ok = false;
          break;
        }
        owners.push_back(o);
      }
    } else {
      int merged = 0;
      for (auto m : cm) {
        if (m == touched) {
          ++merged;
          continue;
        }
        if ((m & ysupp) != 0) {
          ok = false;
          break;
        }
        for (auto xb : xm)
          if ((xb & m) != 0 && !detail::subset(xb, m)) ok = false;
        if (!ok) break;
      }
      ok = ok && merged == 1;
    }
    if (ok) out.insert(c);
  }
  return {out.begin(), out.end()};
}

}  // namespace entmono
