#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wavelink/modwt.hpp"

namespace wavelink {

/// Dense row-major square matrix.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t size, double fill = 0.0) : n(size), data(size * size, fill) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// F(i, l) = mean over levels j1..j2 of the wavelet correlation of series i
/// and l. A pair is converged when its correlations span less than
/// `tolerance` over the range.
struct ConnectivityResult {
  SquareMatrix F;
  int j1 = 0;
  int j2 = 0;
  double tolerance = 0.0;
  std::vector<std::vector<std::uint8_t>> converged;
  /// rho(i, l) at each level of the range, indexed [level - j1].
  std::vector<SquareMatrix> per_level;
};

ConnectivityResult fractal_connectivity(std::span<const Decomposition> decs, int j1, int j2,
                                        double tolerance = 0.1);

/// One agglomeration step. Leaves are 0..n-1 and merge i creates cluster
/// n + i.
struct Merge {
  std::size_t a = 0;
  std::size_t b = 0;
  double height = 0.0;
  std::size_t size = 0;
};

struct Dendrogram {
  std::size_t n_leaves = 0;
  std::vector<Merge> merges;
  /// Leaves in dendrogram drawing order.
  std::vector<std::size_t> leaf_order() const;
};

/// Average-linkage clustering on d = 1 - F. Equal distances merge the pair
/// with the lowest cluster ids first.
Dendrogram cluster_markets(const SquareMatrix& F);

/// Flat labels numbered by first appearance in leaf order 0..n-1.
std::vector<int> cut_tree_k(const Dendrogram& tree, std::size_t k);
/// Applies every merge with height <= threshold.
std::vector<int> cut_tree_height(const Dendrogram& tree, double threshold);

}  // namespace wavelink
