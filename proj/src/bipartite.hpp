#pragma once

#include <cstddef>
#include <vector>

namespace walras::detail {

inline constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);

/// Kuhn-style augmenting-path matching. Vertices are visited in index order,
/// so results are deterministic for a given graph.
class BipartiteMatcher {
 public:
  BipartiteMatcher(std::size_t left, std::size_t right)
      : adj_(left), mate_left_(left, kUnmatched), mate_right_(right, kUnmatched) {}

  void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

  /// Tries to match `l` via an augmenting path. Previously matched vertices stay matched.
  bool augment(std::size_t l) {
    seen_.assign(mate_right_.size(), false);
    return dfs(l);
  }

  /// Left vertices reachable by alternating paths from `roots` (unmatched left vertices),
  /// and the right vertices visited on the way. On a maximum matching this is a Hall violator.
  void alternating_reach(const std::vector<std::size_t>& roots, std::vector<bool>& left_reached,
                         std::vector<bool>& right_reached) const {
    left_reached.assign(adj_.size(), false);
    right_reached.assign(mate_right_.size(), false);
    std::vector<std::size_t> stack(roots);
    for (std::size_t r : roots) left_reached[r] = true;
    while (!stack.empty()) {
      const std::size_t l = stack.back();
      stack.pop_back();
      for (std::size_t r : adj_[l]) {
        if (right_reached[r]) continue;
        right_reached[r] = true;
        const std::size_t next = mate_right_[r];
        if (next != kUnmatched && !left_reached[next]) {
          left_reached[next] = true;
          stack.push_back(next);
        }
      }
    }
  }

  const std::vector<std::size_t>& adjacency(std::size_t l) const { return adj_[l]; }
  std::size_t mate_of_left(std::size_t l) const { return mate_left_[l]; }
  std::size_t mate_of_right(std::size_t r) const { return mate_right_[r]; }
  void set_pair(std::size_t l, std::size_t r) {
    mate_left_[l] = r;
    mate_right_[r] = l;
  }
  void unmatch_right(std::size_t r) { mate_right_[r] = kUnmatched; }

 private:
  bool dfs(std::size_t l) {
    for (std::size_t r : adj_[l]) {
      if (seen_[r]) continue;
      seen_[r] = true;
      if (mate_right_[r] == kUnmatched || dfs(mate_right_[r])) {
        set_pair(l, r);
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> mate_left_;
  std::vector<std::size_t> mate_right_;
  std::vector<bool> seen_;
};

}  // namespace walras::detail
