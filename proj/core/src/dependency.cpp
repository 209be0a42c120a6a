#include "vmwe/dependency.hpp"

#include <deque>

#include "vmwe/error.hpp"

namespace vmwe {

DependencyTree::DependencyTree(const Sentence& sentence)
    : neighbours_(sentence.tokens.size() + 1), children_(sentence.tokens.size() + 1) {
  if (!sentence.has_dependencies)
    throw StructuralError(sentence.sent_id, "sentence has no dependency annotation");
  for (const auto& t : sentence.tokens) {
    if (t.head <= 0) continue;
    neighbours_[static_cast<std::size_t>(t.id)].push_back(t.head);
    neighbours_[static_cast<std::size_t>(t.head)].push_back(t.id);
    children_[static_cast<std::size_t>(t.head)].push_back(t.id);
  }
}

int DependencyTree::distance(int from, int to) const {
  if (from == to) return 0;
  std::vector<int> dist(neighbours_.size(), -1);
  std::deque<int> queue{from};
  dist[static_cast<std::size_t>(from)] = 0;
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    for (int next : neighbours_[static_cast<std::size_t>(cur)]) {
      auto& d = dist[static_cast<std::size_t>(next)];
      if (d >= 0) continue;
      d = dist[static_cast<std::size_t>(cur)] + 1;
      if (next == to) return d;
      queue.push_back(next);
    }
  }
  return -1;
}

}  // namespace vmwe
