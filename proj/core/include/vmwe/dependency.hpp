#pragma once

#include <vector>

#include "vmwe/corpus.hpp"

namespace vmwe {

/// Undirected view of a sentence's dependency tree over word tokens.
class DependencyTree {
 public:
  explicit DependencyTree(const Sentence& sentence);

  /// Number of edges on the path between two tokens; -1 if disconnected.
  int distance(int from, int to) const;
  /// Tokens whose head is `id`.
  const std::vector<int>& dependents(int id) const { return children_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(children_.size()) - 1; }

 private:
  std::vector<std::vector<int>> neighbours_;  // index 0 unused
  std::vector<std::vector<int>> children_;
};

}  // namespace vmwe
