#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sepscan/graph.hpp"
#include "sepscan/linalg.hpp"

namespace sepscan {

struct SynthConfig {
  double edge_lo = 0.2;   // minimum |K_ij| on edges
  double edge_hi = 1.0;
  double diag_boost = 1.0;
};

// Precision matrix supported exactly on g: K_ij = +-uniform[lo,hi] on edges,
// K_ii = diag_boost * sum_j |K_ij| + uniform(0,1). Diagonally dominant,
// hence positive definite.
Matrix precision_from_graph(const Graph& g, std::uint64_t seed,
                            const SynthConfig& cfg = {});

Matrix covariance_from_precision(const Matrix& k);

// Correlation matrix of a tree model, built entrywise as products of edge
// correlations (+-uniform[0.95,0.98]) along tree paths. Unit diagonal, no
// matrix inversion involved, so entries stay meaningful at any scale.
Matrix tree_covariance(const Graph& tree, std::uint64_t seed);

// Covariance whose precision is the tree precision plus w (e_a-e_b)(e_a-e_b)^T
// per extra edge. Computed from the exact tree covariance by a low-rank
// update, keeping path signals intact.
Matrix tree_plus_edges_covariance(const Graph& tree,
                                  const std::vector<std::pair<int, int>>& extra,
                                  std::uint64_t seed);

// Exact correlation matrix for the clique-plus-path graph: an equicorrelated
// clique block glued to a product-form path through the last clique vertex.
Matrix lollipop_covariance(int clique_size, int path_len, std::uint64_t seed);

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int n);
Graph clique_graph(int c);
Graph grid_graph(int rows, int cols);
Graph lollipop_graph(int clique_size, int path_len);

// Uniform random labeled tree via Prufer decoding.
Graph random_tree(int n, std::uint64_t seed);

// Random tree whose degrees stay at or below max_deg.
Graph random_tree_bounded(int n, int max_deg, std::uint64_t seed);

struct TreePlusEdges {
  Graph graph;
  Graph tree;
  std::vector<std::pair<int, int>> extra;
};
TreePlusEdges random_tree_plus_edges(int n, int extra_edges, std::uint64_t seed);

// Start from K_{k+1}, attach each later vertex to a random existing k-clique.
Graph k_tree_graph(int n, int k, std::uint64_t seed);

// Clique on the first c vertices, remaining vertices hang off it round-robin.
Graph clique_planted_graph(int n, int c);

// Erdos-Renyi conditioned on connectivity (resamples, throws after 500 tries).
Graph gnp_connected(int n, double p, std::uint64_t seed);

struct FaithfulnessReport {
  int tau = 0;
  bool passed = false;
  long checks = 0;
  std::vector<std::string> violations;  // at most 20 recorded
};

// For every vertex pair i,j and every S with |S| <= tau not meeting {i,j}:
// rank(sigma_{{i} u S, {j} u S}) == |S| exactly when S separates i from j.
// Throws when the enumeration budget would be excessive.
FaithfulnessReport verify_tau_faithfulness(const Matrix& sigma, const Graph& g,
                                           int tau, double rank_rel = 1e-8);

// For every pair of disjoint nonempty A, B with rank(sigma_{A,B}) <= tau the
// rank must equal the minimum vertex separator size. n <= 10 enforced.
FaithfulnessReport verify_strong_faithfulness(const Matrix& sigma, const Graph& g,
                                              int tau, double rank_rel = 1e-8);

// Kendall tau-a: (concordant - discordant) / (N choose 2). Ties count as
// neither. Throws on fewer than two observations or a constant column.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

// Pairwise sin((pi/2) tau) matrix from a samples-by-variables data matrix.
Matrix kendall_sigma(const Matrix& samples);

// Rows are samples drawn from N(0, sigma).
Matrix gaussian_samples(const Matrix& sigma, int count, std::uint64_t seed);

// Gaussian samples pushed through per-column monotone maps
// (identity, exp, cube, logistic cycling by column index).
Matrix nonparanormal_samples(const Matrix& sigma, int count, std::uint64_t seed);

// +-1 spin samples on a tree: root uniform, child agrees with parent with
// probability (1 + r_e)/2. edge_corr is aligned with tree.edges.
Matrix ising_tree_samples(const Graph& tree, const std::vector<double>& edge_corr,
                          int count, std::uint64_t seed);

// Raw row-major doubles plus a JSON sidecar {"n", "graph_file", "seed"}.
void save_covariance(const Matrix& sigma, const std::string& bin_path,
                     const std::string& sidecar_path, const std::string& graph_file,
                     std::uint64_t seed);
Matrix load_covariance(const std::string& bin_path, int n);

}  // namespace sepscan
