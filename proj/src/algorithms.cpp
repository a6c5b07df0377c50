#include "sepscan/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sepscan/rng.hpp"

namespace sepscan {

int sample_size_tree(int n, double eps) {
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("sample_size_tree: eps outside (0,1)");
  if (n < 2) return 1;
  double inner = 5.0 * n * static_cast<double>(n) / eps * std::log(static_cast<double>(n));
  return static_cast<int>(std::ceil(18.0 * std::log(inner)));
}

int sample_size_separator(int k, double delta, double delta_prime) {
  if (k < 1) throw std::invalid_argument("sample_size_separator: k < 1");
  if (delta <= 0.0 || delta >= 1.0 || delta_prime <= 0.0 || delta_prime >= 1.0)
    throw std::invalid_argument("sample_size_separator: probabilities outside (0,1)");
  double d2 = delta * delta;
  double cover = 110.0 * k / d2 * std::log(88.0 * k / d2);
  double balance = 2.0 / d2 * std::log(2.0 / delta_prime);
  return static_cast<int>(std::ceil(std::max(cover, balance)));
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::IsTree: return "IsTree";
    case Verdict::NotTree: return "NotTree";
    case Verdict::Terminated: return "Terminated";
    case Verdict::Broke: return "Broke";
    default: return "Inconclusive";
  }
}

ComponentsResult components(EntrySource& src, const IndexSet& w,
                            std::mt19937_64& rng, const Tolerances& tol) {
  ComponentsResult out;
  IndexSet active = w;
  double max_pivot_diag = 0.0;
  while (!active.empty()) {
    int pivot = active[uniform_index(rng, active.size())];
    double d = src.entry(pivot, pivot);
    ++out.reads;
    max_pivot_diag = std::max(max_pivot_diag, std::abs(d));
    double thr = tol.zero_rel * max_pivot_diag;
    IndexSet block;
    block.push_back(pivot);
    for (int j : active) {
      if (j == pivot) continue;
      double v = src.entry(j, pivot);
      ++out.reads;
      if (std::abs(v) > thr) block.push_back(j);
    }
    std::sort(block.begin(), block.end());
    active = set_difference(active, block);
    out.blocks.push_back(std::move(block));
  }
  std::size_t bound = w.size() * std::min(out.blocks.size(), w.size());
  if (out.reads > bound)
    throw std::logic_error("components: read budget exceeded");
  return out;
}

namespace {

IndexSet sample_without_replacement(const IndexSet& pool, int m, std::mt19937_64& rng) {
  std::vector<int> a = pool;
  for (int i = 0; i < m; ++i) {
    std::size_t j = i + uniform_index(rng, a.size() - i);
    std::swap(a[i], a[j]);
  }
  IndexSet w(a.begin(), a.begin() + m);
  std::sort(w.begin(), w.end());
  return w;
}

Matrix gather(EntrySource& src, const IndexSet& rows, const IndexSet& cols) {
  Matrix m(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      m(i, j) = src.entry(rows[i], cols[j]);
  return m;
}

}  // namespace

FbptResult find_balanced_partition_tree(CovarianceOracle& base, const IndexSet& v_cur,
                                        int m, std::mt19937_64& rng,
                                        const Tolerances& tol) {
  const int n = static_cast<int>(v_cur.size());
  if (m < 1 || m >= n)
    throw std::invalid_argument("find_balanced_partition_tree: need 1 <= m < |V|");
  IndexSet w = sample_without_replacement(v_cur, m, rng);
  double best = std::numeric_limits<double>::infinity();
  int best_v = -1;
  for (int v : v_cur) {
    CondCovView view(base, {v});
    IndexSet wv = set_difference(w, {v});
    auto res = components(view, wv, rng, tol);
    std::size_t mx = 0;
    for (const IndexSet& b : res.blocks) mx = std::max(mx, b.size());
    double mhat = static_cast<double>(n) * static_cast<double>(mx) / m;
    if (mhat < best) {
      best = mhat;
      best_v = v;
    }
  }
  FbptResult out;
  if (best > n / 2.0) {
    out.broke = true;
    return out;
  }
  out.v_star = best_v;
  CondCovView view(base, {best_v});
  out.blocks = components(view, set_difference(v_cur, {best_v}), rng, tol).blocks;
  return out;
}

Graph direct_subgraph_check(const Matrix& sigma_bb, double support_rel) {
  const int sz = static_cast<int>(sigma_bb.rows());
  if (sz == 0) return make_graph(0, {});
  Matrix khat = spd_inverse(sigma_bb);
  double thr = support_rel * khat.diagonal().cwiseAbs().maxCoeff();
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < sz; ++i)
    for (int j = i + 1; j < sz; ++j)
      if (std::abs(khat(i, j)) > thr) edges.emplace_back(i, j);
  return make_graph(sz, std::move(edges));
}

namespace {

struct TreeRunState {
  CovarianceOracle& base;
  int m;
  Tolerances tol;
  std::mt19937_64 rng;
  bool not_tree = false;
  int depth = 0;
  std::vector<TraceEntry> trace;
};

void tree_recurse(TreeRunState& st, const IndexSet& v_cur, int level) {
  if (st.not_tree) return;
  st.depth = std::max(st.depth, level);
  const int sz = static_cast<int>(v_cur.size());
  if (sz <= st.m) {
    Matrix s(sz, sz);
    for (int i = 0; i < sz; ++i)
      for (int j = i; j < sz; ++j) {
        double v = st.base.query(v_cur[i], v_cur[j]);
        s(i, j) = v;
        s(j, i) = v;
      }
    st.trace.push_back({level, sz, {}});
    if (!is_tree(direct_subgraph_check(s, st.tol.support_rel))) st.not_tree = true;
    return;
  }
  FbptResult f = find_balanced_partition_tree(st.base, v_cur, st.m, st.rng, st.tol);
  if (f.broke) {
    st.trace.push_back({level, sz, {}});
    st.not_tree = true;
    return;
  }
  st.trace.push_back({level, sz, {f.v_star}});
  for (const IndexSet& c : f.blocks) {
    tree_recurse(st, set_union(c, {f.v_star}), level + 1);
    if (st.not_tree) return;
  }
}

}  // namespace

TestOutcome test_tree(CovarianceOracle& base, const TreeTestConfig& cfg) {
  const int n = base.n();
  const int m_theory = sample_size_tree(std::max(n, 2), cfg.eps);
  const int m = cfg.m > 0 ? cfg.m : m_theory;
  TreeRunState st{base, m, cfg.tol, make_rng(cfg.seed)};
  if (n > 0) {
    IndexSet all(n);
    std::iota(all.begin(), all.end(), 0);
    tree_recurse(st, all, 0);
  }
  TestOutcome out;
  out.verdict = st.not_tree ? Verdict::NotTree : Verdict::IsTree;
  out.good_run = true;
  out.queries = base.ledger().count();
  out.depth = st.depth;
  out.trace = std::move(st.trace);
  out.theory_m_met = m >= m_theory;
  return out;
}

AbsepResult ab_separator(EntrySource& src, const IndexSet& v_cur, const IndexSet& a,
                         const IndexSet& b, const Tolerances& tol) {
  AbsepResult out;
  auto rank_of = [&](const IndexSet& r, const IndexSet& c) {
    return numerical_rank(gather(src, r, c), tol.rank_rel);
  };
  out.rank = rank_of(a, b);
  if (out.rank == 0) {
    out.good = true;
    return out;
  }
  IndexSet u;
  for (int v : v_cur) {
    if (rank_of(set_union(a, {v}), set_union(b, {v})) == out.rank) u.push_back(v);
  }
  if (u.empty()) return out;
  out.s.push_back(u[0]);
  for (std::size_t i = 1; i < u.size(); ++i) {
    IndexSet cand = set_union(out.s, {u[i]});
    if (rank_of(set_union(a, cand), set_union(b, cand)) == out.rank) out.s = std::move(cand);
  }
  out.good = static_cast<int>(out.s.size()) == out.rank;
  return out;
}

SeparatorResult separator(EntrySource& src, const IndexSet& v_cur,
                          const SeparatorConfig& cfg, std::mt19937_64& rng) {
  if (cfg.k < 1) throw std::invalid_argument("separator: k < 1");
  if (v_cur.size() < 2) throw std::invalid_argument("separator: fewer than two vertices");
  SeparatorResult out;
  const int n_global = std::max(2, src.base().n());
  double dprime = cfg.delta_prime > 0.0
                      ? cfg.delta_prime
                      : cfg.eps / (10.0 * n_global * std::log(static_cast<double>(n_global)));
  const int m_theory = sample_size_separator(cfg.k, cfg.delta, dprime);
  int m = cfg.m;
  if (m <= 0) {
    if (m_theory > cfg.m_cap)
      throw std::invalid_argument(
          "separator: derived sample size " + std::to_string(m_theory) + " exceeds cap " +
          std::to_string(cfg.m_cap) + "; pass an explicit m to override");
    m = m_theory;
  }
  out.m_used = m;
  out.theory_m_met = m >= m_theory;

  IndexSet wset;
  for (int attempt = 0; attempt < 2 && wset.size() < 2; ++attempt) {
    wset.clear();
    for (int i = 0; i < m; ++i)
      wset.push_back(v_cur[uniform_index(rng, v_cur.size())]);
    std::sort(wset.begin(), wset.end());
    wset.erase(std::unique(wset.begin(), wset.end()), wset.end());
  }
  if (wset.size() < 2) throw std::runtime_error("separator: degenerate landmark sample");
  const int w = static_cast<int>(wset.size());
  if (w > 30) throw std::invalid_argument("separator: landmark set too large to enumerate");

  Matrix block = gather(src, wset, wset);

  int min_rank = INT_MAX;
  std::vector<std::uint32_t> minimizers;
  std::vector<int> pa, pb;
  const std::uint32_t full = (w == 31) ? 0x7FFFFFFFu : ((1u << w) - 1);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    if (!(mask & 1)) continue;  // lowest landmark stays on side A: each split once
    int ca = std::popcount(mask);
    int cb = w - ca;
    if (3 * ca > 2 * w || 3 * cb > 2 * w) continue;
    pa.clear();
    pb.clear();
    for (int p = 0; p < w; ++p) ((mask >> p) & 1 ? pa : pb).push_back(p);
    int r = numerical_rank(submatrix(block, pa, pb), cfg.tol.rank_rel);
    if (r < min_rank) {
      min_rank = r;
      minimizers.clear();
    }
    if (r == min_rank && minimizers.size() < 4096) minimizers.push_back(mask);
  }
  if (minimizers.empty()) throw std::runtime_error("separator: no balanced bipartition");
  out.rank = min_rank;
  if (min_rank > cfg.k) {
    out.broke = true;
    return out;
  }

  for (std::uint32_t mask : minimizers) {
    IndexSet a, b;
    for (int p = 0; p < w; ++p) ((mask >> p) & 1 ? a : b).push_back(wset[p]);
    AbsepResult ab = ab_separator(src, v_cur, a, b, cfg.tol);
    IndexSet rest = set_difference(wset, ab.s);
    if (rest.size() < 2) continue;
    std::size_t nblocks = 0;
    IndexSet cond = set_union(src.conditioning(), ab.s);
    if (cond.empty()) {
      nblocks = components(src, rest, rng, cfg.tol).blocks.size();
    } else {
      CondCovView check(src.base(), cond);
      nblocks = components(check, rest, rng, cfg.tol).blocks.size();
    }
    if (nblocks >= 2) {
      out.accepted = true;
      out.s = ab.s;
      out.good = ab.good;
      return out;
    }
  }
  return out;
}

namespace {

struct SepRunState {
  CovarianceOracle& base;
  const SeparatorConfig& cfg;
  std::mt19937_64 rng;
  bool broke = false;
  bool good = true;
  bool theory = true;
  int depth = 0;
  std::vector<TraceEntry> trace;
};

void marginal_recurse(SepRunState& st, const IndexSet& v_cur, int level) {
  if (st.broke) return;
  st.depth = std::max(st.depth, level);
  const int sz = static_cast<int>(v_cur.size());
  if (sz <= st.cfg.k + 1) {
    st.trace.push_back({level, sz, {}});
    return;
  }
  OracleSource src(st.base);
  SeparatorResult r = separator(src, v_cur, st.cfg, st.rng);
  st.theory = st.theory && r.theory_m_met;
  if (r.broke) {
    st.trace.push_back({level, sz, {}});
    st.broke = true;
    return;
  }
  if (!r.accepted) {
    st.trace.push_back({level, sz, {}});
    st.good = false;
    return;
  }
  st.good = st.good && r.good;
  st.trace.push_back({level, sz, r.s});
  CondCovView view(st.base, r.s);
  auto comps = components(view, set_difference(v_cur, r.s), st.rng, st.cfg.tol);
  for (const IndexSet& c : comps.blocks) {
    marginal_recurse(st, set_union(c, r.s), level + 1);
    if (st.broke) return;
  }
}

void conditional_recurse(SepRunState& st, const IndexSet& v_cur, const IndexSet& sbar,
                         int level) {
  if (st.broke) return;
  st.depth = std::max(st.depth, level);
  const int sz = static_cast<int>(v_cur.size());
  if (sz <= st.cfg.k + 1) {
    st.trace.push_back({level, sz, {}});
    return;
  }
  SeparatorResult r;
  if (sbar.empty()) {
    OracleSource src(st.base);
    r = separator(src, v_cur, st.cfg, st.rng);
  } else {
    CondCovView src(st.base, sbar);
    r = separator(src, v_cur, st.cfg, st.rng);
  }
  st.theory = st.theory && r.theory_m_met;
  if (r.broke) {
    st.trace.push_back({level, sz, {}});
    st.broke = true;
    return;
  }
  if (!r.accepted) {
    st.trace.push_back({level, sz, {}});
    st.good = false;
    return;
  }
  st.good = st.good && r.good;
  st.trace.push_back({level, sz, r.s});
  IndexSet sbar2 = set_union(sbar, r.s);
  CondCovView view(st.base, sbar2);
  auto comps = components(view, set_difference(v_cur, r.s), st.rng, st.cfg.tol);
  for (const IndexSet& c : comps.blocks) {
    conditional_recurse(st, c, sbar2, level + 1);
    if (st.broke) return;
  }
}

}  // namespace

TestOutcome test_marginal(CovarianceOracle& base, const SeparatorConfig& cfg) {
  SepRunState st{base, cfg, make_rng(cfg.seed)};
  IndexSet all(base.n());
  std::iota(all.begin(), all.end(), 0);
  if (!all.empty()) marginal_recurse(st, all, 0);
  TestOutcome out;
  out.good_run = st.good;
  out.verdict = st.broke ? (st.good ? Verdict::Broke : Verdict::Inconclusive)
                         : (st.good ? Verdict::Terminated : Verdict::Inconclusive);
  out.queries = base.ledger().count();
  out.depth = st.depth;
  out.trace = std::move(st.trace);
  out.theory_m_met = st.theory;
  return out;
}

TestOutcome test_conditional(CovarianceOracle& base, const SeparatorConfig& cfg) {
  SepRunState st{base, cfg, make_rng(cfg.seed)};
  IndexSet all(base.n());
  std::iota(all.begin(), all.end(), 0);
  if (!all.empty()) conditional_recurse(st, all, {}, 0);
  TestOutcome out;
  out.good_run = st.good;
  out.verdict = st.broke ? Verdict::Broke : Verdict::Terminated;
  out.queries = base.ledger().count();
  out.depth = st.depth;
  out.trace = std::move(st.trace);
  out.theory_m_met = st.theory;
  return out;
}

SnEstimate estimate_sn(CovarianceOracle& base, const SeparatorConfig& proto, int k_max) {
  SnEstimate out;
  const int n = base.n();
  for (int k = 1; k <= k_max; ++k) {
    SeparatorConfig cfg = proto;
    cfg.k = k;
    cfg.eps = proto.eps / (k * k);
    cfg.seed = derive_seed(proto.seed, 2 * k);
    TestOutcome marg = test_marginal(base, cfg);
    if (marg.verdict == Verdict::Terminated) {
      out.ok = true;
      out.k0 = k;
      out.lower = 2.0 * (k - 1) / 3.0;
      out.upper = 2.0 * k;
      out.via_conditional = false;
      break;
    }
    if (marg.verdict == Verdict::Inconclusive) {
      cfg.seed = derive_seed(proto.seed, 2 * k + 1);
      TestOutcome cond = test_conditional(base, cfg);
      if (cond.verdict == Verdict::Terminated) {
        out.ok = true;
        out.k0 = k;
        out.lower = 2.0 * (k - 1) / 3.0;
        out.upper = std::max(static_cast<double>(k),
                             10.0 * k * std::log(static_cast<double>(n) / k));
        out.via_conditional = true;
        break;
      }
    }
  }
  out.queries = base.ledger().count();
  return out;
}

namespace {

struct CiRunState {
  CIOracle& ci;
  int m;
  std::mt19937_64 rng;
  bool not_tree = false;
  int depth = 0;
  std::vector<TraceEntry> trace;
};

std::vector<IndexSet> ci_blocks(CIOracle& ci, IndexSet active, int cond,
                                std::mt19937_64& rng) {
  std::vector<IndexSet> blocks;
  while (!active.empty()) {
    int pivot = active[uniform_index(rng, active.size())];
    IndexSet block;
    block.push_back(pivot);
    for (int j : active) {
      if (j == pivot) continue;
      bool indep = cond < 0 ? ci.ci(j, pivot) : ci.ci(j, pivot, cond);
      if (!indep) block.push_back(j);
    }
    std::sort(block.begin(), block.end());
    active = set_difference(active, block);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

void ci_recurse(CiRunState& st, const IndexSet& v_cur, int level) {
  if (st.not_tree) return;
  st.depth = std::max(st.depth, level);
  const int sz = static_cast<int>(v_cur.size());
  if (sz <= st.m) {
    // edge iff dependent marginally and under every single conditioning vertex
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < sz; ++i)
      for (int j = i + 1; j < sz; ++j) {
        if (st.ci.ci(v_cur[i], v_cur[j])) continue;
        bool edge = true;
        for (int t = 0; t < sz && edge; ++t) {
          if (t == i || t == j) continue;
          if (st.ci.ci(v_cur[i], v_cur[j], v_cur[t])) edge = false;
        }
        if (edge) edges.emplace_back(i, j);
      }
    st.trace.push_back({level, sz, {}});
    if (!is_tree(make_graph(sz, std::move(edges)))) st.not_tree = true;
    return;
  }
  IndexSet w = sample_without_replacement(v_cur, st.m, st.rng);
  double best = std::numeric_limits<double>::infinity();
  int best_v = -1;
  for (int v : v_cur) {
    IndexSet wv = set_difference(w, {v});
    auto blocks = ci_blocks(st.ci, wv, v, st.rng);
    std::size_t mx = 0;
    for (const IndexSet& b : blocks) mx = std::max(mx, b.size());
    double mhat = static_cast<double>(sz) * static_cast<double>(mx) / st.m;
    if (mhat < best) {
      best = mhat;
      best_v = v;
    }
  }
  if (best > sz / 2.0) {
    st.trace.push_back({level, sz, {}});
    st.not_tree = true;
    return;
  }
  st.trace.push_back({level, sz, {best_v}});
  auto blocks = ci_blocks(st.ci, set_difference(v_cur, {best_v}), best_v, st.rng);
  for (const IndexSet& c : blocks) {
    ci_recurse(st, set_union(c, {best_v}), level + 1);
    if (st.not_tree) return;
  }
}

}  // namespace

TestOutcome ci_test_tree(CIOracle& ci, const CiTreeConfig& cfg) {
  const int n = ci.n();
  const int m_theory = sample_size_tree(std::max(n, 2), cfg.eps);
  const int m = cfg.m > 0 ? cfg.m : m_theory;
  CiRunState st{ci, m, make_rng(cfg.seed)};
  if (n > 0) {
    IndexSet all(n);
    std::iota(all.begin(), all.end(), 0);
    ci_recurse(st, all, 0);
  }
  TestOutcome out;
  out.verdict = st.not_tree ? Verdict::NotTree : Verdict::IsTree;
  out.good_run = true;
  out.queries = ci.count();
  out.depth = st.depth;
  out.trace = std::move(st.trace);
  out.theory_m_met = m >= m_theory;
  return out;
}

}  // namespace sepscan
