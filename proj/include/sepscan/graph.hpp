#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sepscan/linalg.hpp"

namespace sepscan {

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, sorted lexicographically
  std::vector<std::vector<int>> adj;       // sorted neighbor lists

  bool has_edge(int i, int j) const;
  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  int max_degree() const;
};

// Canonicalizes edges (orients i < j, sorts, rejects self loops, duplicates
// and out-of-range endpoints) and builds adjacency.
Graph make_graph(int n, std::vector<std::pair<int, int>> edges);

Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

// Components of G restricted to W: { C cap W : C component of G } minus
// empty blocks. Blocks are sorted internally and ordered by smallest member.
std::vector<IndexSet> connected_components(const Graph& g, const IndexSet& w);

// Components of the subgraph induced on W.
std::vector<IndexSet> induced_components(const Graph& g, const IndexSet& w);

bool is_connected(const Graph& g);
bool is_tree(const Graph& g);

// Size of the largest component of G - v. Graph must be connected.
int max_component_after_removal(const Graph& g, int v);

// Largest component weight of G - v under per-vertex weights.
double weighted_max_component(const Graph& g, int v, const std::vector<double>& w);

// argmin_v of weighted_max_component, ties to the lowest index. Unit
// weights when w is null.
int exact_central_vertex(const Graph& g, const std::vector<double>* w = nullptr);

// True when every path from A to B meets S. A and B are taken minus S.
bool separates(const Graph& g, const IndexSet& s, const IndexSet& a, const IndexSet& b);

// Minimum number of vertices whose removal cuts every A-B path. Vertices of
// A and B themselves may be counted (each path must be hit somewhere,
// endpoints included). Computed by max-flow on the split-vertex graph;
// min(|A|,|B|) is returned when the sides cannot be fully cut otherwise.
int min_vertex_separator_size(const Graph& g, const IndexSet& a, const IndexSet& b);

// Exhaustive separation number. Throws for n > 12.
int exact_separation_number(const Graph& g);

// Exhaustive treewidth by elimination-order DP. Throws for n > 10.
int exact_treewidth(const Graph& g);

// Maximum cardinality search + perfect elimination check.
bool is_chordal(const Graph& g);

Graph disjoint_union(const std::vector<Graph>& parts);

}  // namespace sepscan
