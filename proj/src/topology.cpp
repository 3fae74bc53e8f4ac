#include <algorithm>
#include <numeric>
#include <ostream>

#include "psox/kernels.hpp"
#include "psox/topology.hpp"

namespace psox {

uint64_t delannoy(int m, int n) {
  require(m >= 0 && n >= 0, "delannoy arguments must be nonnegative");
  std::vector<uint64_t> row(n + 1, 1);  // D(0, j)
  for (int i = 1; i <= m; ++i) {
    uint64_t diag = row[0];  // D(i-1, j-1)
    for (int j = 1; j <= n; ++j) {
      uint64_t up = row[j];
      uint64_t s;
      bool over = __builtin_add_overflow(up, row[j - 1], &s);
      over |= __builtin_add_overflow(s, diag, &s);
      row[j] = over ? UINT64_MAX : s;
      diag = up;
    }
  }
  return row[n];
}

int von_neumann_k(int dim, int r, int n_particles) {
  require(dim >= 1, "dim must be >= 1");
  require(r >= 0, "r must be >= 0");
  require(n_particles >= 1, "n_particles must be >= 1");
  uint64_t d = delannoy(dim, r);
  return d < static_cast<uint64_t>(n_particles) ? static_cast<int>(d) : n_particles;
}

NeighborhoodGraph ring_neighbors(const Matrix& positions, int k, int p) {
  const size_t n = positions.rows;
  const size_t dim = positions.cols;
  require(n >= 1, "ring_neighbors: empty swarm");
  require(k >= 1 && static_cast<size_t>(k) <= n, "ring_neighbors: k out of range");
  require(p == 1 || p == 2, "ring_neighbors: p must be 1 or 2");

  // column-major copy for the distance kernels
  std::vector<double> xt(n * dim);
  for (size_t i = 0; i < n; ++i)
    for (size_t d = 0; d < dim; ++d) xt[d * n + i] = positions(i, d);

  const kern::Ops& ops = kern::active_ops();
  auto dist = p == 1 ? ops.dist_l1_cols : ops.dist_sq_cols;  // same ordering as the p-norm

  NeighborhoodGraph g;
  g.neighbors.resize(n);
  std::vector<double> d(n);
  std::vector<int> order(n);
  for (size_t i = 0; i < n; ++i) {
    dist(xt.data(), n, dim, positions.row(i), d.data());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
      if (d[a] != d[b]) return d[a] < d[b];
      return a < b;
    });
    auto& lst = g.neighbors[i];
    lst.assign(order.begin(), order.begin() + k);
    std::sort(lst.begin(), lst.end());
  }
  return g;
}

NeighborhoodGraph star_neighbors(int n_particles) {
  require(n_particles >= 1, "star_neighbors: empty swarm");
  NeighborhoodGraph g;
  g.static_flag = true;
  std::vector<int> all(n_particles);
  std::iota(all.begin(), all.end(), 0);
  g.neighbors.assign(n_particles, all);
  return g;
}

std::vector<int> local_best(const NeighborhoodGraph& g, const std::vector<double>& values) {
  std::vector<int> best(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    const auto& lst = g.neighbors[i];
    require(!lst.empty(), "local_best: empty neighbor list");
    int arg = -1;
    for (int j : lst) {
      require(j >= 0 && static_cast<size_t>(j) < values.size(),
              "local_best: neighbor index out of range");
      if (arg < 0 || values[j] < values[arg]) arg = j;  // ascending list => ties keep lower
    }
    best[i] = arg;
  }
  return best;
}

void write_edge_list(const NeighborhoodGraph& g, std::ostream& out) {
  out << "particle,neighbor\n";
  for (size_t i = 0; i < g.size(); ++i)
    for (int j : g.neighbors[i]) out << i << ',' << j << '\n';
}

}  // namespace psox
