#include "sepscan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "sepscan/rng.hpp"

namespace sepscan {

Matrix precision_from_graph(const Graph& g, std::uint64_t seed, const SynthConfig& cfg) {
  if (cfg.edge_lo <= 0 || cfg.edge_hi < cfg.edge_lo)
    throw std::invalid_argument("precision_from_graph: bad edge range");
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> mag(cfg.edge_lo, cfg.edge_hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix k = Matrix::Zero(g.n, g.n);
  for (const auto& e : g.edges) {
    double v = mag(rng);
    if (unit(rng) < 0.5) v = -v;
    k(e.first, e.second) = v;
    k(e.second, e.first) = v;
  }
  for (int i = 0; i < g.n; ++i) {
    double row = 0.0;
    for (int j : g.adj[i]) row += std::abs(k(i, j));
    k(i, i) = cfg.diag_boost * row + unit(rng);
  }
  return k;
}

Matrix covariance_from_precision(const Matrix& k) { return spd_inverse(k); }

namespace {

// Edge correlations in canonical edge order, |rho| in [0.95, 0.98].
std::vector<double> strong_edge_correlations(const Graph& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.95, 0.98);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> rho(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    rho[e] = mag(rng);
    if (unit(rng) < 0.5) rho[e] = -rho[e];
  }
  return rho;
}

// Adjacency with edge ids for per-edge weight lookup during BFS.
std::vector<std::vector<std::pair<int, int>>> adjacency_with_ids(const Graph& g) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    adj[g.edges[e].first].emplace_back(g.edges[e].second, static_cast<int>(e));
    adj[g.edges[e].second].emplace_back(g.edges[e].first, static_cast<int>(e));
  }
  return adj;
}

Matrix path_product_matrix(const Graph& tree, const std::vector<double>& rho) {
  const auto adj = adjacency_with_ids(tree);
  Matrix sigma = Matrix::Identity(tree.n, tree.n);
  std::vector<double> val(tree.n);
  std::vector<char> seen(tree.n);
  std::queue<int> q;
  for (int root = 0; root < tree.n; ++root) {
    std::fill(seen.begin(), seen.end(), 0);
    val[root] = 1.0;
    seen[root] = 1;
    q.push(root);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, e] : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          val[v] = val[u] * rho[e];
          q.push(v);
        }
    }
    for (int j = root + 1; j < tree.n; ++j) {
      sigma(root, j) = val[j];
      sigma(j, root) = val[j];
    }
  }
  return sigma;
}

}  // namespace

Matrix tree_covariance(const Graph& tree, std::uint64_t seed) {
  if (!is_tree(tree)) throw std::invalid_argument("tree_covariance: not a tree");
  auto rng = make_rng(seed);
  return path_product_matrix(tree, strong_edge_correlations(tree, rng));
}

Matrix tree_plus_edges_covariance(const Graph& tree,
                                  const std::vector<std::pair<int, int>>& extra,
                                  std::uint64_t seed) {
  Matrix sigma = tree_covariance(tree, derive_seed(seed, 0));
  if (extra.empty()) return sigma;
  const int n = tree.n;
  const int t = static_cast<int>(extra.size());
  for (auto [a, b] : extra) {
    if (a == b || a < 0 || b < 0 || a >= n || b >= n)
      throw std::invalid_argument("tree_plus_edges_covariance: bad extra edge");
    if (tree.has_edge(a, b))
      throw std::invalid_argument("tree_plus_edges_covariance: extra edge already in tree");
  }
  double norm1 = 0.0;
  for (int j = 0; j < n; ++j) norm1 = std::max(norm1, sigma.col(j).cwiseAbs().sum());
  const double w = std::min(0.02, 0.4 / (t * norm1));
  Matrix u = Matrix::Zero(n, t);
  for (int e = 0; e < t; ++e) {
    u(extra[e].first, e) = 1.0;
    u(extra[e].second, e) = -1.0;
  }
  // precision gets + w u u^T per extra edge; covariance follows by Woodbury
  Matrix su = sigma * u;
  Matrix cap = Matrix::Identity(t, t) / w + u.transpose() * su;
  Eigen::LLT<Matrix> llt(cap);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("tree_plus_edges_covariance: update factorization failed");
  return sigma - su * llt.solve(su.transpose());
}

Matrix lollipop_covariance(int clique_size, int path_len, std::uint64_t seed) {
  if (clique_size < 2 || path_len < 1)
    throw std::invalid_argument("lollipop_covariance: need clique >= 2 and path >= 1");
  const int n = clique_size + path_len;
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> mag(0.95, 0.98);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double rc = 0.55;  // clique equicorrelation
  Matrix sigma = Matrix::Identity(n, n);
  for (int i = 0; i < clique_size; ++i)
    for (int j = i + 1; j < clique_size; ++j) {
      sigma(i, j) = rc;
      sigma(j, i) = rc;
    }
  // cumulative products from the attachment vertex clique_size-1 outward
  std::vector<double> prod(n, 1.0);
  double acc = 1.0;
  for (int q = clique_size; q < n; ++q) {
    double rho = mag(rng);
    if (unit(rng) < 0.5) rho = -rho;
    acc *= rho;
    prod[q] = acc;
  }
  const int hub = clique_size - 1;
  for (int q = clique_size; q < n; ++q) {
    for (int i = 0; i < clique_size; ++i) {
      double base = (i == hub) ? 1.0 : rc;
      sigma(i, q) = base * prod[q];
      sigma(q, i) = sigma(i, q);
    }
    for (int r = clique_size; r < q; ++r) {
      // correlation along the path between r and q
      sigma(r, q) = prod[q] / prod[r];
      sigma(q, r) = sigma(r, q);
    }
  }
  return sigma;
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, std::move(e));
}

Graph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle_graph: n < 3");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  e.emplace_back(0, n - 1);
  return make_graph(n, std::move(e));
}

Graph star_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.emplace_back(0, i);
  return make_graph(n, std::move(e));
}

Graph clique_graph(int c) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < c; ++i)
    for (int j = i + 1; j < c; ++j) e.emplace_back(i, j);
  return make_graph(c, std::move(e));
}

Graph grid_graph(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid_graph: bad dims");
  std::vector<std::pair<int, int>> e;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) e.emplace_back(id(r, c), id(r + 1, c));
    }
  return make_graph(rows * cols, std::move(e));
}

Graph lollipop_graph(int clique_size, int path_len) {
  if (clique_size < 2 || path_len < 1)
    throw std::invalid_argument("lollipop_graph: need clique >= 2 and path >= 1");
  const int n = clique_size + path_len;
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < clique_size; ++i)
    for (int j = i + 1; j < clique_size; ++j) e.emplace_back(i, j);
  e.emplace_back(clique_size - 1, clique_size);
  for (int q = clique_size; q + 1 < n; ++q) e.emplace_back(q, q + 1);
  return make_graph(n, std::move(e));
}

namespace {

Graph tree_from_prufer(int n, const std::vector<int>& code) {
  std::vector<int> deg(n, 1);
  for (int v : code) ++deg[v];
  std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
  for (int v = 0; v < n; ++v)
    if (deg[v] == 1) leaves.push(v);
  std::vector<std::pair<int, int>> edges;
  for (int v : code) {
    int leaf = leaves.top();
    leaves.pop();
    edges.emplace_back(leaf, v);
    if (--deg[v] == 1) leaves.push(v);
  }
  int a = leaves.top();
  leaves.pop();
  int b = leaves.top();
  edges.emplace_back(a, b);
  return make_graph(n, std::move(edges));
}

}  // namespace

Graph random_tree(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_tree: n < 1");
  if (n == 1) return make_graph(1, {});
  if (n == 2) return make_graph(2, {{0, 1}});
  auto rng = make_rng(seed);
  std::vector<int> code(n - 2);
  for (int& v : code) v = static_cast<int>(uniform_index(rng, n));
  return tree_from_prufer(n, code);
}

Graph random_tree_bounded(int n, int max_deg, std::uint64_t seed) {
  if (max_deg < 2) throw std::invalid_argument("random_tree_bounded: max_deg < 2");
  if (n <= 2) return random_tree(n, seed);
  auto rng = make_rng(seed);
  std::vector<int> quota(n, max_deg - 1), code(n - 2);
  std::vector<int> open(n);
  std::iota(open.begin(), open.end(), 0);
  for (int i = 0; i < n - 2; ++i) {
    std::size_t pick = uniform_index(rng, open.size());
    int v = open[pick];
    code[i] = v;
    if (--quota[v] == 0) {
      open[pick] = open.back();
      open.pop_back();
    }
  }
  return tree_from_prufer(n, code);
}

TreePlusEdges random_tree_plus_edges(int n, int extra_edges, std::uint64_t seed) {
  if (n < 3 && extra_edges > 0)
    throw std::invalid_argument("random_tree_plus_edges: n too small");
  long long slots = static_cast<long long>(n) * (n - 1) / 2 - (n - 1);
  if (extra_edges > slots)
    throw std::invalid_argument("random_tree_plus_edges: too many extra edges");
  TreePlusEdges out;
  out.tree = random_tree_bounded(n, 4, derive_seed(seed, 0));
  auto rng = make_rng(derive_seed(seed, 1));
  std::set<std::pair<int, int>> chosen;
  while (static_cast<int>(chosen.size()) < extra_edges) {
    int a = static_cast<int>(uniform_index(rng, n));
    int b = static_cast<int>(uniform_index(rng, n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (out.tree.has_edge(a, b)) continue;
    chosen.insert({a, b});
  }
  out.extra.assign(chosen.begin(), chosen.end());
  auto edges = out.tree.edges;
  edges.insert(edges.end(), out.extra.begin(), out.extra.end());
  out.graph = make_graph(n, std::move(edges));
  return out;
}

Graph k_tree_graph(int n, int k, std::uint64_t seed) {
  if (k < 1 || n < k + 1) throw std::invalid_argument("k_tree_graph: need n >= k+1");
  auto rng = make_rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) edges.emplace_back(i, j);
  std::vector<std::vector<int>> cliques;
  {
    // the k+1 size-k subsets of the root clique
    std::vector<int> base(k + 1);
    std::iota(base.begin(), base.end(), 0);
    for (int skip = 0; skip <= k; ++skip) {
      std::vector<int> c;
      for (int v : base)
        if (v != skip) c.push_back(v);
      cliques.push_back(std::move(c));
    }
  }
  for (int v = k + 1; v < n; ++v) {
    const std::vector<int> q = cliques[uniform_index(rng, cliques.size())];
    for (int u : q) edges.emplace_back(u, v);
    for (int skip = 0; skip < k; ++skip) {
      std::vector<int> c;
      for (int i = 0; i < k; ++i)
        if (i != skip) c.push_back(q[i]);
      c.push_back(v);
      std::sort(c.begin(), c.end());
      cliques.push_back(std::move(c));
    }
  }
  return make_graph(n, std::move(edges));
}

Graph clique_planted_graph(int n, int c) {
  if (c < 2 || n < c) throw std::invalid_argument("clique_planted_graph: need n >= c >= 2");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < c; ++i)
    for (int j = i + 1; j < c; ++j) e.emplace_back(i, j);
  for (int v = c; v < n; ++v) e.emplace_back((v - c) % c, v);
  return make_graph(n, std::move(e));
}

Graph gnp_connected(int n, double p, std::uint64_t seed) {
  if (n < 1 || p <= 0.0 || p > 1.0) throw std::invalid_argument("gnp_connected: bad args");
  for (int attempt = 0; attempt < 500; ++attempt) {
    auto rng = make_rng(derive_seed(seed, attempt));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unit(rng) < p) e.emplace_back(i, j);
    Graph g = make_graph(n, std::move(e));
    if (is_connected(g)) return g;
  }
  throw std::runtime_error("gnp_connected: no connected sample in 500 attempts");
}

namespace {

void note_violation(FaithfulnessReport& rep, std::string msg) {
  if (rep.violations.size() < 20) rep.violations.push_back(std::move(msg));
}

std::string ids_to_string(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

// All subsets of pool with size <= tau, invoking f on each.
template <typename F>
void for_subsets_up_to(const IndexSet& pool, int tau, F&& f) {
  IndexSet cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    f(cur);
    if (static_cast<int>(cur.size()) == tau) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      cur.push_back(pool[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

FaithfulnessReport verify_tau_faithfulness(const Matrix& sigma, const Graph& g,
                                           int tau, double rank_rel) {
  const int n = g.n;
  if (sigma.rows() != n) throw std::invalid_argument("verify_tau_faithfulness: size mismatch");
  double budget = 0.0;
  for (int s = 0, b = 1; s <= tau; ++s) {
    budget += static_cast<double>(b) * n * n / 2.0;
    b = b * std::max(1, n - 2 - s) / (s + 1);
  }
  if (budget > 5e6)
    throw std::invalid_argument("verify_tau_faithfulness: enumeration budget exceeded");
  FaithfulnessReport rep;
  rep.tau = tau;
  rep.passed = true;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      IndexSet pool;
      for (int v = 0; v < n; ++v)
        if (v != i && v != j) pool.push_back(v);
      for_subsets_up_to(pool, tau, [&](const IndexSet& s) {
        ++rep.checks;
        IndexSet rows = set_union({i}, s), cols = set_union({j}, s);
        int r = numerical_rank(submatrix(sigma, rows, cols), rank_rel);
        bool sep = separates(g, s, {i}, {j});
        bool rank_says_sep = (r == static_cast<int>(s.size()));
        if (sep != rank_says_sep) {
          rep.passed = false;
          note_violation(rep, "pair (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") S=" + ids_to_string(s) + " rank=" + std::to_string(r) +
                                  " separated=" + (sep ? "yes" : "no"));
        }
      });
    }
  return rep;
}

FaithfulnessReport verify_strong_faithfulness(const Matrix& sigma, const Graph& g,
                                              int tau, double rank_rel) {
  const int n = g.n;
  if (n > 10) throw std::invalid_argument("verify_strong_faithfulness: n > 10");
  if (sigma.rows() != n) throw std::invalid_argument("verify_strong_faithfulness: size mismatch");
  FaithfulnessReport rep;
  rep.tau = tau;
  rep.passed = true;
  const std::uint32_t full = (1u << n) - 1;
  auto mask_ids = [n](std::uint32_t m) {
    IndexSet s;
    for (int v = 0; v < n; ++v)
      if (m & (1u << v)) s.push_back(v);
    return s;
  };
  for (std::uint32_t a = 1; a <= full; ++a) {
    std::uint32_t rest = full & ~a;
    for (std::uint32_t b = rest; b; b = (b - 1) & rest) {
      if ((a & -a) > (b & -b)) continue;  // unordered pairs once
      IndexSet av = mask_ids(a), bv = mask_ids(b);
      int r = numerical_rank(submatrix(sigma, av, bv), rank_rel);
      ++rep.checks;
      if (r <= tau) {
        int ms = min_vertex_separator_size(g, av, bv);
        if (r != ms) {
          rep.passed = false;
          note_violation(rep, "A=" + ids_to_string(av) + " B=" + ids_to_string(bv) +
                                  " rank=" + std::to_string(r) +
                                  " minsep=" + std::to_string(ms));
        }
      }
    }
  }
  return rep;
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw std::invalid_argument("kendall_tau: length mismatch");
  if (n < 2) throw std::invalid_argument("kendall_tau: need at least two observations");
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
      std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; }))
    throw std::invalid_argument("kendall_tau: constant column");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  auto tied_pairs = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    long long t = 0, run = 1;
    for (std::size_t i = 1; i <= v.size(); ++i) {
      if (i < v.size() && v[i] == v[i - 1]) {
        ++run;
      } else {
        t += run * (run - 1) / 2;
        run = 1;
      }
    }
    return t;
  };
  long long tx = tied_pairs(x), ty = tied_pairs(y);
  long long txy = 0;
  {
    std::vector<std::pair<double, double>> xy(n);
    for (std::size_t i = 0; i < n; ++i) xy[i] = {x[i], y[i]};
    std::sort(xy.begin(), xy.end());
    long long run = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      if (i < n && xy[i] == xy[i - 1]) {
        ++run;
      } else {
        txy += run * (run - 1) / 2;
        run = 1;
      }
    }
  }

  // discordant pairs = strict inversions of y in x-order (x-ties are y-sorted
  // within their group, so they never count)
  std::vector<double> seq(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i) seq[i] = y[idx[i]];
  long long q = 0;
  auto merge_count = [&](auto&& self, std::size_t lo, std::size_t hi) -> void {
    if (hi - lo < 2) return;
    std::size_t mid = (lo + hi) / 2;
    self(self, lo, mid);
    self(self, mid, hi);
    std::size_t i = lo, j = mid, o = lo;
    while (i < mid && j < hi) {
      if (seq[j] < seq[i]) {
        q += mid - i;
        tmp[o++] = seq[j++];
      } else {
        tmp[o++] = seq[i++];
      }
    }
    while (i < mid) tmp[o++] = seq[i++];
    while (j < hi) tmp[o++] = seq[j++];
    std::copy(tmp.begin() + lo, tmp.begin() + hi, seq.begin() + lo);
  };
  merge_count(merge_count, 0, n);

  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  long long p = total - tx - ty + txy - q;
  return static_cast<double>(p - q) / static_cast<double>(total);
}

Matrix kendall_sigma(const Matrix& samples) {
  const int count = static_cast<int>(samples.rows());
  const int n = static_cast<int>(samples.cols());
  if (count < 2) throw std::invalid_argument("kendall_sigma: need at least two samples");
  Matrix sigma = Matrix::Identity(n, n);
  std::vector<double> xi(count), xj(count);
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < count; ++r) xi[r] = samples(r, i);
    for (int j = i + 1; j < n; ++j) {
      for (int r = 0; r < count; ++r) xj[r] = samples(r, j);
      double t = kendall_tau(xi, xj);
      double v = std::sin(1.5707963267948966 * t);
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
  }
  return sigma;
}

Matrix gaussian_samples(const Matrix& sigma, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("gaussian_samples: count < 1");
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("gaussian_samples: covariance not PD");
  Matrix l = llt.matrixL();
  const int n = static_cast<int>(sigma.rows());
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix out(count, n);
  Vector z(n);
  for (int r = 0; r < count; ++r) {
    for (int i = 0; i < n; ++i) z(i) = gauss(rng);
    out.row(r) = (l * z).transpose();
  }
  return out;
}

Matrix nonparanormal_samples(const Matrix& sigma, int count, std::uint64_t seed) {
  Matrix z = gaussian_samples(sigma, count, seed);
  for (int j = 0; j < z.cols(); ++j) {
    switch (j % 4) {
      case 0:
        break;
      case 1:
        for (int r = 0; r < z.rows(); ++r) z(r, j) = std::exp(z(r, j));
        break;
      case 2:
        for (int r = 0; r < z.rows(); ++r) z(r, j) = z(r, j) * z(r, j) * z(r, j);
        break;
      default:
        for (int r = 0; r < z.rows(); ++r) z(r, j) = 1.0 / (1.0 + std::exp(-z(r, j)));
        break;
    }
  }
  return z;
}

Matrix ising_tree_samples(const Graph& tree, const std::vector<double>& edge_corr,
                          int count, std::uint64_t seed) {
  if (!is_tree(tree)) throw std::invalid_argument("ising_tree_samples: not a tree");
  if (edge_corr.size() != tree.edges.size())
    throw std::invalid_argument("ising_tree_samples: edge_corr size mismatch");
  for (double r : edge_corr)
    if (std::abs(r) >= 1.0) throw std::invalid_argument("ising_tree_samples: |corr| >= 1");
  const auto adj = adjacency_with_ids(tree);
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix out(count, tree.n);
  std::vector<char> seen(tree.n);
  std::queue<int> q;
  for (int r = 0; r < count; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    out(r, 0) = unit(rng) < 0.5 ? 1.0 : -1.0;
    seen[0] = 1;
    q.push(0);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, e] : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          double agree = 0.5 * (1.0 + edge_corr[e]);
          out(r, v) = unit(rng) < agree ? out(r, u) : -out(r, u);
          q.push(v);
        }
    }
  }
  return out;
}

void save_covariance(const Matrix& sigma, const std::string& bin_path,
                     const std::string& sidecar_path, const std::string& graph_file,
                     std::uint64_t seed) {
  const int n = static_cast<int>(sigma.rows());
  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("save_covariance: cannot open " + bin_path);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = sigma(i, j);
      bin.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
  bin.close();
  nlohmann::ordered_json j;
  j["n"] = n;
  j["graph_file"] = graph_file;
  j["seed"] = seed;
  std::ofstream side(sidecar_path);
  if (!side) throw std::runtime_error("save_covariance: cannot open " + sidecar_path);
  side << j.dump(2) << "\n";
}

Matrix load_covariance(const std::string& bin_path, int n) {
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("load_covariance: cannot open " + bin_path);
  bin.seekg(0, std::ios::end);
  if (bin.tellg() != static_cast<std::streamoff>(8LL * n * n))
    throw std::runtime_error("load_covariance: size mismatch for " + bin_path);
  bin.seekg(0);
  Matrix sigma(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v;
      bin.read(reinterpret_cast<char*>(&v), sizeof(double));
      sigma(i, j) = v;
    }
  return sigma;
}

}  // namespace sepscan
