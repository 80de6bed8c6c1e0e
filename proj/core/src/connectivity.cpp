#include "wavelink/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "wavelink/dependence.hpp"
#include "wavelink/error.hpp"

namespace wavelink {

ConnectivityResult fractal_connectivity(std::span<const Decomposition> decs, int j1, int j2, double tolerance) {
  require(decs.size() >= 2, ErrorCode::InvalidArgument, "connectivity needs at least 2 series");
  require(j1 >= 1 && j2 - j1 >= 1, ErrorCode::InvalidArgument, "connectivity needs a range of at least 2 levels");
  require(j2 <= decs[0].levels, ErrorCode::InvalidArgument,
          "level " + std::to_string(j2) + " exceeds the decomposition depth " + std::to_string(decs[0].levels));
  require(tolerance > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  const std::size_t n = decs[0].length();
  require((n >> j2) >= 8, ErrorCode::InsufficientData,
          "level " + std::to_string(j2) + " has fewer than 8 coefficients per octave for n = " + std::to_string(n));

  const std::size_t p = decs.size();
  ConnectivityResult r;
  r.j1 = j1;
  r.j2 = j2;
  r.tolerance = tolerance;
  r.F = SquareMatrix(p, 1.0);
  r.converged.assign(p, std::vector<std::uint8_t>(p, 1));
  for (int j = j1; j <= j2; ++j) r.per_level.emplace_back(p, 1.0);

  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) {
      const auto corr = wavelet_correlation(decs[a], decs[b]);
      double sum = 0.0, lo = 1.0, hi = -1.0;
      for (int j = j1; j <= j2; ++j) {
        const double rho = corr.estimate[static_cast<std::size_t>(j - 1)];
        r.per_level[static_cast<std::size_t>(j - j1)](a, b) = rho;
        r.per_level[static_cast<std::size_t>(j - j1)](b, a) = rho;
        sum += rho;
        lo = std::min(lo, rho);
        hi = std::max(hi, rho);
      }
      const double f = sum / (j2 - j1 + 1);
      r.F(a, b) = r.F(b, a) = f;
      r.converged[a][b] = r.converged[b][a] = (hi - lo) < tolerance;
    }
  return r;
}

Dendrogram cluster_markets(const SquareMatrix& F) {
  const std::size_t n = F.n;
  require(n >= 1 && F.data.size() == n * n, ErrorCode::InvalidArgument, "connectivity matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      require(std::isfinite(F(i, j)) && std::abs(F(i, j) - F(j, i)) <= 1e-12, ErrorCode::InvalidArgument,
              "connectivity matrix must be finite and symmetric");

  // Distances between active clusters, keyed by cluster id.
  const std::size_t total = 2 * n - 1;
  std::vector<std::vector<double>> dist(total, std::vector<double>(total, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = 1.0 - F(i, j);
  std::vector<std::size_t> size(total, 1);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back(i);

  Dendrogram tree;
  tree.n_leaves = n;
  while (active.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t x = 0; x < active.size(); ++x)
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const double d = dist[active[x]][active[y]];
        // Strictly smaller (beyond rounding) wins; `active` stays sorted, so the
        // first pair found among ties has the lowest ids.
        if (d < best - 1e-12) {
          best = d;
          ba = active[x];
          bb = active[y];
        }
      }
    const std::size_t id = n + tree.merges.size();
    size[id] = size[ba] + size[bb];
    for (std::size_t c : active) {
      if (c == ba || c == bb) continue;
      const double d = (static_cast<double>(size[ba]) * dist[ba][c] + static_cast<double>(size[bb]) * dist[bb][c]) /
                       static_cast<double>(size[id]);
      dist[id][c] = dist[c][id] = d;
    }
    tree.merges.push_back({ba, bb, best, size[id]});
    std::erase(active, ba);
    std::erase(active, bb);
    active.push_back(id);
  }
  return tree;
}

std::vector<std::size_t> Dendrogram::leaf_order() const {
  std::vector<std::size_t> order;
  if (n_leaves == 0) return order;
  std::function<void(std::size_t)> walk = [&](std::size_t id) {
    if (id < n_leaves) {
      order.push_back(id);
      return;
    }
    const auto& m = merges[id - n_leaves];
    walk(m.a);
    walk(m.b);
  };
  walk(merges.empty() ? 0 : n_leaves + merges.size() - 1);
  return order;
}

namespace {

std::vector<int> labels_after(const Dendrogram& tree, std::size_t applied) {
  const std::size_t n = tree.n_leaves;
  std::vector<std::size_t> parent(2 * n, 0);
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = root(parent[v]);
  };
  for (std::size_t i = 0; i < applied; ++i) {
    const auto& m = tree.merges[i];
    parent[root(m.a)] = n + i;
    parent[root(m.b)] = n + i;
  }
  std::vector<int> labels(n, -1);
  std::vector<std::pair<std::size_t, int>> seen;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    const std::size_t r = root(leaf);
    auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& e) { return e.first == r; });
    if (it == seen.end()) {
      seen.emplace_back(r, static_cast<int>(seen.size()));
      labels[leaf] = seen.back().second;
    } else {
      labels[leaf] = it->second;
    }
  }
  return labels;
}

}  // namespace

std::vector<int> cut_tree_k(const Dendrogram& tree, std::size_t k) {
  require(k >= 1 && k <= tree.n_leaves, ErrorCode::InvalidArgument,
          "cluster count " + std::to_string(k) + " outside [1, " + std::to_string(tree.n_leaves) + "]");
  return labels_after(tree, tree.n_leaves - k);
}

std::vector<int> cut_tree_height(const Dendrogram& tree, double threshold) {
  std::size_t applied = 0;
  while (applied < tree.merges.size() && tree.merges[applied].height <= threshold) ++applied;
  return labels_after(tree, applied);
}

}  // namespace wavelink
