#include "sepscan/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <limits>
#include <queue>
#include <stdexcept>

#include "json.hpp"

namespace sepscan {

bool Graph::has_edge(int i, int j) const {
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) return false;
  const auto& a = adj[i];
  return std::binary_search(a.begin(), a.end(), j);
}

int Graph::max_degree() const {
  int d = 0;
  for (const auto& a : adj) d = std::max(d, static_cast<int>(a.size()));
  return d;
}

Graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 0) throw std::invalid_argument("make_graph: negative n");
  for (auto& e : edges) {
    if (e.first == e.second) throw std::invalid_argument("make_graph: self loop");
    if (e.first < 0 || e.second < 0 || e.first >= n || e.second >= n)
      throw std::invalid_argument("make_graph: endpoint out of range");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("make_graph: duplicate edge");
  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  g.adj.assign(n, {});
  for (const auto& e : g.edges) {
    g.adj[e.first].push_back(e.second);
    g.adj[e.second].push_back(e.first);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_graph: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (!j.contains("n") || !j.contains("edges"))
    throw std::runtime_error("load_graph: missing n or edges in " + path);
  int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::runtime_error("load_graph: malformed edge in " + path);
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return make_graph(n, std::move(edges));
}

void save_graph(const Graph& g, const std::string& path) {
  nlohmann::ordered_json j;
  j["n"] = g.n;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : g.edges) arr.push_back({e.first, e.second});
  j["edges"] = arr;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_graph: cannot open " + path);
  out << j.dump(2) << "\n";
}

namespace {

// Component labels over the whole graph, BFS in vertex order.
std::vector<int> component_labels(const Graph& g) {
  std::vector<int> label(g.n, -1);
  int next = 0;
  std::queue<int> q;
  for (int s = 0; s < g.n; ++s) {
    if (label[s] != -1) continue;
    label[s] = next;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : g.adj[u])
        if (label[v] == -1) {
          label[v] = next;
          q.push(v);
        }
    }
    ++next;
  }
  return label;
}

}  // namespace

std::vector<IndexSet> connected_components(const Graph& g, const IndexSet& w) {
  std::vector<int> label = component_labels(g);
  std::vector<IndexSet> blocks;
  std::vector<int> block_of_label;
  for (int v : w) {
    if (v < 0 || v >= g.n) throw std::out_of_range("connected_components: vertex");
    int l = label[v];
    if (l >= static_cast<int>(block_of_label.size()))
      block_of_label.resize(l + 1, -1);
    if (block_of_label[l] == -1) {
      block_of_label[l] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[block_of_label[l]].push_back(v);
  }
  return blocks;
}

std::vector<IndexSet> induced_components(const Graph& g, const IndexSet& w) {
  std::vector<char> in_w(g.n, 0);
  for (int v : w) {
    if (v < 0 || v >= g.n) throw std::out_of_range("induced_components: vertex");
    in_w[v] = 1;
  }
  std::vector<char> seen(g.n, 0);
  std::vector<IndexSet> blocks;
  std::queue<int> q;
  for (int s : w) {
    if (seen[s]) continue;
    IndexSet blk;
    seen[s] = 1;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      blk.push_back(u);
      for (int v : g.adj[u])
        if (in_w[v] && !seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
    }
    std::sort(blk.begin(), blk.end());
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

bool is_connected(const Graph& g) {
  if (g.n <= 1) return true;
  std::vector<int> label = component_labels(g);
  return *std::max_element(label.begin(), label.end()) == 0;
}

bool is_tree(const Graph& g) {
  return is_connected(g) && static_cast<int>(g.edges.size()) == g.n - 1;
}

int max_component_after_removal(const Graph& g, int v) {
  std::vector<double> unit(g.n, 1.0);
  return static_cast<int>(weighted_max_component(g, v, unit) + 0.5);
}

double weighted_max_component(const Graph& g, int v, const std::vector<double>& w) {
  std::vector<char> seen(g.n, 0);
  seen[v] = 1;
  double best = 0.0;
  std::queue<int> q;
  for (int s = 0; s < g.n; ++s) {
    if (seen[s]) continue;
    double total = 0.0;
    seen[s] = 1;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      total += w[u];
      for (int x : g.adj[u])
        if (!seen[x]) {
          seen[x] = 1;
          q.push(x);
        }
    }
    best = std::max(best, total);
  }
  return best;
}

int exact_central_vertex(const Graph& g, const std::vector<double>* w) {
  if (g.n == 0) throw std::invalid_argument("exact_central_vertex: empty graph");
  std::vector<double> unit;
  if (!w) {
    unit.assign(g.n, 1.0);
    w = &unit;
  }
  int best_v = 0;
  double best = weighted_max_component(g, 0, *w);
  for (int v = 1; v < g.n; ++v) {
    double m = weighted_max_component(g, v, *w);
    if (m < best) {
      best = m;
      best_v = v;
    }
  }
  return best_v;
}

bool separates(const Graph& g, const IndexSet& s, const IndexSet& a, const IndexSet& b) {
  std::vector<char> blocked(g.n, 0), seen(g.n, 0), target(g.n, 0);
  for (int v : s) blocked[v] = 1;
  for (int v : b)
    if (!blocked[v]) target[v] = 1;
  std::queue<int> q;
  for (int v : a)
    if (!blocked[v] && !seen[v]) {
      seen[v] = 1;
      q.push(v);
    }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    if (target[u]) return false;
    for (int x : g.adj[u])
      if (!blocked[x] && !seen[x]) {
        seen[x] = 1;
        q.push(x);
      }
  }
  return true;
}

namespace {

struct FlowEdge {
  int to, rev, cap;
};

class FlowGraph {
 public:
  explicit FlowGraph(int n) : adj_(n) {}

  void add_edge(int u, int v, int cap) {
    adj_[u].push_back({v, static_cast<int>(adj_[v].size()), cap});
    adj_[v].push_back({u, static_cast<int>(adj_[u].size()) - 1, 0});
  }

  int max_flow(int s, int t) {
    int flow = 0;
    while (true) {
      std::vector<std::pair<int, int>> parent(adj_.size(), {-1, -1});
      std::queue<int> q;
      q.push(s);
      parent[s] = {s, -1};
      while (!q.empty() && parent[t].first == -1) {
        int u = q.front();
        q.pop();
        for (std::size_t i = 0; i < adj_[u].size(); ++i) {
          const FlowEdge& e = adj_[u][i];
          if (e.cap > 0 && parent[e.to].first == -1) {
            parent[e.to] = {u, static_cast<int>(i)};
            q.push(e.to);
          }
        }
      }
      if (parent[t].first == -1) break;
      int push = std::numeric_limits<int>::max();
      for (int v = t; v != s;) {
        auto [u, i] = parent[v];
        push = std::min(push, adj_[u][i].cap);
        v = u;
      }
      for (int v = t; v != s;) {
        auto [u, i] = parent[v];
        adj_[u][i].cap -= push;
        adj_[adj_[u][i].to][adj_[u][i].rev].cap += push;
        v = u;
      }
      flow += push;
    }
    return flow;
  }

 private:
  std::vector<std::vector<FlowEdge>> adj_;
};

}  // namespace

int min_vertex_separator_size(const Graph& g, const IndexSet& a, const IndexSet& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("min_vertex_separator_size: empty side");
  const int big = static_cast<int>(std::min(a.size(), b.size())) + g.n + 1;
  // in(v) = 2v, out(v) = 2v+1, source = 2n, sink = 2n+1
  FlowGraph f(2 * g.n + 2);
  for (int v = 0; v < g.n; ++v) f.add_edge(2 * v, 2 * v + 1, 1);
  for (const auto& e : g.edges) {
    f.add_edge(2 * e.first + 1, 2 * e.second, big);
    f.add_edge(2 * e.second + 1, 2 * e.first, big);
  }
  for (int v : a) f.add_edge(2 * g.n, 2 * v, big);
  for (int v : b) f.add_edge(2 * v + 1, 2 * g.n + 1, big);
  return f.max_flow(2 * g.n, 2 * g.n + 1);
}

namespace {

std::vector<std::uint32_t> adjacency_masks(const Graph& g) {
  std::vector<std::uint32_t> m(g.n, 0);
  for (const auto& e : g.edges) {
    m[e.first] |= 1u << e.second;
    m[e.second] |= 1u << e.first;
  }
  return m;
}

// Component sizes of the induced subgraph on mask.
void mask_component_sizes(const std::vector<std::uint32_t>& adj, std::uint32_t mask,
                          std::vector<int>& sizes) {
  sizes.clear();
  std::uint32_t rest = mask;
  while (rest) {
    std::uint32_t comp = rest & (~rest + 1);
    while (true) {
      std::uint32_t grow = comp;
      std::uint32_t scan = comp;
      while (scan) {
        int v = std::countr_zero(scan);
        scan &= scan - 1;
        grow |= adj[v] & mask;
      }
      if (grow == comp) break;
      comp = grow;
    }
    sizes.push_back(std::popcount(comp));
    rest &= ~comp;
  }
}

}  // namespace

int exact_separation_number(const Graph& g) {
  if (g.n > 12) throw std::invalid_argument("exact_separation_number: n > 12");
  if (g.n <= 1) return 0;
  const auto adj = adjacency_masks(g);
  const std::uint32_t full = (g.n == 32) ? ~0u : ((1u << g.n) - 1);
  // msep[W]: smallest |S|, S inside W, such that the components of W - S
  // regroup into two nonempty sides each at most 2|W|/3. INF when none.
  const int INF = g.n + 1;
  std::vector<std::uint8_t> msep(full + 1, static_cast<std::uint8_t>(INF));
  std::vector<int> sizes;
  for (std::uint32_t w = 0; w <= full; ++w) {
    int wsz = std::popcount(w);
    if (wsz < 2) continue;
    int best = INF;
    std::uint32_t s = w;
    while (true) {
      int ssz = std::popcount(s);
      if (ssz < best && wsz - ssz >= 2) {
        mask_component_sizes(adj, w & ~s, sizes);
        if (sizes.size() >= 2) {
          std::uint32_t sums = 1;
          for (int c : sizes) sums |= sums << c;
          int total = wsz - ssz;
          for (int x = 1; x < total; ++x) {
            if (!((sums >> x) & 1)) continue;
            if (3 * x <= 2 * wsz && 3 * (total - x) <= 2 * wsz) {
              best = ssz;
              break;
            }
          }
        }
      }
      if (s == 0) break;
      s = (s - 1) & w;
    }
    msep[w] = static_cast<std::uint8_t>(best);
  }
  for (int k = 0; k < g.n; ++k) {
    bool ok = true;
    for (std::uint32_t w = 0; w <= full && ok; ++w) {
      if (std::popcount(w) >= k + 2 && msep[w] > k) ok = false;
    }
    if (ok) return k;
  }
  return g.n - 1;
}

int exact_treewidth(const Graph& g) {
  if (g.n > 10) throw std::invalid_argument("exact_treewidth: n > 10");
  if (g.n == 0) return -1;
  const auto adj = adjacency_masks(g);
  const std::uint32_t full = (1u << g.n) - 1;
  std::vector<std::int8_t> dp(full + 1, 0);
  dp[0] = -1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    int best = g.n;
    std::uint32_t scan = s;
    while (scan) {
      int v = std::countr_zero(scan);
      scan &= scan - 1;
      std::uint32_t x = s & ~(1u << v);
      // component of v in the induced graph on x | {v}
      std::uint32_t comp = 1u << v;
      while (true) {
        std::uint32_t grow = comp;
        std::uint32_t t = comp;
        while (t) {
          int u = std::countr_zero(t);
          t &= t - 1;
          grow |= adj[u] & (x | (1u << v));
        }
        if (grow == comp) break;
        comp = grow;
      }
      std::uint32_t nbrs = 0;
      std::uint32_t t = comp;
      while (t) {
        int u = std::countr_zero(t);
        t &= t - 1;
        nbrs |= adj[u];
      }
      int q = std::popcount(nbrs & ~(x | (1u << v)));
      int cand = std::max(static_cast<int>(dp[x]), q);
      best = std::min(best, cand);
    }
    dp[s] = static_cast<std::int8_t>(best);
  }
  return dp[full];
}

bool is_chordal(const Graph& g) {
  if (g.n <= 2) return true;
  // maximum cardinality search
  std::vector<int> weight(g.n, 0), order;
  std::vector<int> pos(g.n, -1);
  order.reserve(g.n);
  for (int step = 0; step < g.n; ++step) {
    int pick = -1;
    for (int v = 0; v < g.n; ++v)
      if (pos[v] == -1 && (pick == -1 || weight[v] > weight[pick])) pick = v;
    pos[pick] = step;
    order.push_back(pick);
    for (int u : g.adj[pick])
      if (pos[u] == -1) ++weight[u];
  }
  // reverse MCS order is a perfect elimination order iff chordal
  for (int v = 0; v < g.n; ++v) {
    // neighbors picked before v; the latest of them must cover the rest
    int latest = -1;
    for (int u : g.adj[v])
      if (pos[u] < pos[v] && (latest == -1 || pos[u] > pos[latest])) latest = u;
    if (latest == -1) continue;
    for (int u : g.adj[v]) {
      if (u == latest || pos[u] >= pos[v]) continue;
      if (!g.has_edge(latest, u)) return false;
    }
  }
  return true;
}

Graph disjoint_union(const std::vector<Graph>& parts) {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  for (const Graph& p : parts) {
    for (const auto& e : p.edges) edges.emplace_back(e.first + n, e.second + n);
    n += p.n;
  }
  return make_graph(n, std::move(edges));
}

}  // namespace sepscan
