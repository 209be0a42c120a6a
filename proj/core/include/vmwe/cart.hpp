#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "vmwe/features.hpp"

namespace vmwe {

/// Node of a binary CART tree over 0/1 columns. Internal nodes send rows
/// with the column inactive left and active right.
struct TreeNode {
  int column = -1;  // -1 for leaves
  int left = -1;
  int right = -1;
  double positive = 0.0;  // weighted class counts reaching the node
  double negative = 0.0;

  bool leaf() const noexcept { return column < 0; }
};

struct CartOptions {
  /// Columns examined per split; 0 examines all of them.
  std::size_t max_features = 0;
};

/// Gini impurity of a two-class weighted count.
double gini(double positive, double negative);

/// Unbounded-depth CART with Gini impurity. Splits continue until a node is
/// pure or no examined column separates its rows; ties in impurity decrease
/// go to the lowest column index.
class CartTree {
 public:
  CartTree() = default;
  CartTree(std::vector<TreeNode> nodes, std::size_t num_columns);

  /// `weights` may be empty (all ones); zero-weight rows are ignored. `rng`
  /// is only consulted when options.max_features limits the examined columns.
  static CartTree fit(const EncodedMatrix& matrix, const std::vector<bool>& labels,
                      std::span<const double> weights, const CartOptions& options,
                      std::mt19937_64* rng = nullptr);

  const TreeNode& leaf_for(std::span<const std::uint32_t> row) const;
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }
  std::size_t num_columns() const noexcept { return num_columns_; }

  /// Per column: sum over its splits of (node weight / root weight) times the
  /// impurity decrease. Not normalized.
  std::vector<double> impurity_decrease() const;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t num_columns_ = 0;
};

/// Index uniformly drawn from [0, n) by rejection; stable across standard
/// library implementations.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

}  // namespace vmwe
