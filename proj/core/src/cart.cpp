#include "vmwe/cart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vmwe/error.hpp"

namespace vmwe {
namespace {

__extension__ using Wide = __int128;

struct Pending {
  std::size_t node;
  std::vector<std::uint32_t> rows;
};

}  // namespace

double gini(double positive, double negative) {
  const double total = positive + negative;
  if (total <= 0.0) return 0.0;
  const double p = positive / total;
  const double q = negative / total;
  return 1.0 - p * p - q * q;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

CartTree::CartTree(std::vector<TreeNode> nodes, std::size_t num_columns)
    : nodes_(std::move(nodes)), num_columns_(num_columns) {
  for (const auto& n : nodes_) {
    if (n.leaf()) continue;
    const auto bad = [&](int child) { return child < 0 || static_cast<std::size_t>(child) >= nodes_.size(); };
    if (static_cast<std::size_t>(n.column) >= num_columns_ || bad(n.left) || bad(n.right))
      throw ValidationError("malformed decision tree");
  }
}

CartTree CartTree::fit(const EncodedMatrix& matrix, const std::vector<bool>& labels,
                       std::span<const double> weights, const CartOptions& options, std::mt19937_64* rng) {
  if (labels.size() != matrix.num_rows()) throw ValidationError("label count does not match matrix rows");
  if (!weights.empty() && weights.size() != matrix.num_rows())
    throw ValidationError("weight count does not match matrix rows");
  const std::size_t d = matrix.num_columns;
  const bool subsample = options.max_features > 0 && options.max_features < d;
  if (subsample && !rng) throw ValidationError("column subsampling needs a random generator");

  const auto weight = [&](std::uint32_t r) { return weights.empty() ? 1.0 : weights[r]; };
  const bool integral = std::all_of(weights.begin(), weights.end(), [](double w) {
    return w == std::floor(w) && w < 1e6;
  });

  CartTree tree;
  tree.num_columns_ = d;
  std::vector<Pending> stack;
  {
    Pending root{0, {}};
    for (std::uint32_t r = 0; r < matrix.num_rows(); ++r)
      if (weight(r) > 0.0) root.rows.push_back(r);
    tree.nodes_.emplace_back();
    stack.push_back(std::move(root));
  }

  std::vector<double> active_pos(d), active_neg(d);
  std::vector<std::size_t> order(d);

  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();

    double pos = 0.0, neg = 0.0;
    for (auto r : cur.rows) (labels[r] ? pos : neg) += weight(r);
    tree.nodes_[cur.node].positive = pos;
    tree.nodes_[cur.node].negative = neg;
    if (pos == 0.0 || neg == 0.0) continue;

    std::fill(active_pos.begin(), active_pos.end(), 0.0);
    std::fill(active_neg.begin(), active_neg.end(), 0.0);
    for (auto r : cur.rows)
      for (auto c : matrix.rows[r]) (labels[r] ? active_pos : active_neg)[c] += weight(r);

    const double total = pos + neg;
    const auto splits = [&](std::size_t c) {
      const double rw = active_pos[c] + active_neg[c];
      return rw > 0.0 && rw < total;
    };

    // Maximizing the Gini decrease minimizes sum over children of p*n/w.
    // With integral weights that sum is compared exactly, so equal splits
    // tie and the lowest column wins.
    struct Score {
      Wide num = 0, den = 1;
      double approx = std::numeric_limits<double>::infinity();
    };
    const auto score = [&](std::size_t c) {
      const double rp = active_pos[c], rn = active_neg[c];
      const double lp = pos - rp, ln = neg - rn;
      const double rw = rp + rn, lw = lp + ln;
      Score s;
      s.approx = rp * rn / rw + lp * ln / lw;
      if (integral) {
        const auto i = [](double v) { return static_cast<Wide>(std::llround(v)); };
        s.num = i(rp) * i(rn) * i(lw) + i(lp) * i(ln) * i(rw);
        s.den = i(rw) * i(lw);
      }
      return s;
    };
    const auto better = [&](const Score& a, const Score& b) {
      if (integral) return a.num * b.den < b.num * a.den;
      return a.approx < b.approx - 1e-12 * std::max(1.0, b.approx);
    };

    int best = -1;
    Score best_score;
    const auto consider = [&](std::size_t c) {
      const Score s = score(c);
      if (best < 0 || better(s, best_score) || (!better(best_score, s) && static_cast<int>(c) < best)) {
        best_score = s;
        best = static_cast<int>(c);
      }
    };

    if (!subsample) {
      for (std::size_t c = 0; c < d; ++c)
        if (splits(c)) consider(c);
    } else {
      // Draw columns without replacement until enough non-constant ones are seen.
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::size_t examined = 0;
      for (std::size_t i = 0; i < d && examined < options.max_features; ++i) {
        const std::size_t j = i + uniform_index(*rng, d - i);
        std::swap(order[i], order[j]);
        if (!splits(order[i])) continue;
        ++examined;
        consider(order[i]);
      }
    }
    if (best < 0) continue;

    Pending left{tree.nodes_.size(), {}};
    Pending right{tree.nodes_.size() + 1, {}};
    for (auto r : cur.rows) {
      const auto& row = matrix.rows[r];
      const bool active = std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(best));
      (active ? right : left).rows.push_back(r);
    }
    tree.nodes_[cur.node].column = best;
    tree.nodes_[cur.node].left = static_cast<int>(left.node);
    tree.nodes_[cur.node].right = static_cast<int>(right.node);
    tree.nodes_.emplace_back();
    tree.nodes_.emplace_back();
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }
  return tree;
}

const TreeNode& CartTree::leaf_for(std::span<const std::uint32_t> row) const {
  if (nodes_.empty()) throw ValidationError("empty decision tree");
  const TreeNode* n = &nodes_.front();
  while (!n->leaf()) {
    const bool active = std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(n->column));
    n = &nodes_[static_cast<std::size_t>(active ? n->right : n->left)];
  }
  return *n;
}

std::vector<double> CartTree::impurity_decrease() const {
  std::vector<double> out(num_columns_, 0.0);
  if (nodes_.empty()) return out;
  const double root = nodes_.front().positive + nodes_.front().negative;
  if (root <= 0.0) return out;
  for (const auto& n : nodes_) {
    if (n.leaf()) continue;
    const auto& l = nodes_[static_cast<std::size_t>(n.left)];
    const auto& r = nodes_[static_cast<std::size_t>(n.right)];
    const double w = n.positive + n.negative;
    const double lw = l.positive + l.negative;
    const double rw = r.positive + r.negative;
    const double dec = gini(n.positive, n.negative) - (lw / w) * gini(l.positive, l.negative) -
                       (rw / w) * gini(r.positive, r.negative);
    out[static_cast<std::size_t>(n.column)] += (w / root) * dec;
  }
  return out;
}

}  // namespace vmwe
