#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sepscan/graph.hpp"
#include "sepscan/linalg.hpp"
#include "sepscan/oracle.hpp"

namespace sepscan {

struct Tolerances {
  double zero_rel = 1e-9;     // conditional entry treated as zero below
                              // zero_rel * (largest pivot variance seen so far)
  double rank_rel = 1e-8;     // singular value cutoff, relative to the largest
  double support_rel = 1e-7;  // inverse support cutoff, relative to max diagonal
};

// Sample size for the tree tester at failure probability eps.
int sample_size_tree(int n, double eps);

// Sample size for the separator sampler: max of the partition-coverage and
// the block-balance terms.
int sample_size_separator(int k, double delta, double delta_prime);

struct ComponentsResult {
  std::vector<IndexSet> blocks;  // discovery order, each sorted
  std::size_t reads = 0;         // view entries consumed
};

// Partition w by repeatedly picking a random pivot and claiming the indices
// whose entry against the pivot is nonzero. Enforces the read budget
// |w| * min(#blocks, |w|) as a hard internal assertion.
ComponentsResult components(EntrySource& src, const IndexSet& w,
                            std::mt19937_64& rng, const Tolerances& tol);

struct FbptResult {
  bool broke = false;  // every candidate keeps a component above |V|/2
  int v_star = -1;
  std::vector<IndexSet> blocks;  // components of v_cur minus v_star
};

// One balanced-split search round: sample m landmarks, score every candidate
// vertex by its largest surviving landmark block, keep the best splitter.
FbptResult find_balanced_partition_tree(CovarianceOracle& base, const IndexSet& v_cur,
                                        int m, std::mt19937_64& rng,
                                        const Tolerances& tol);

enum class Verdict { IsTree, NotTree, Terminated, Broke, Inconclusive };

const char* verdict_name(Verdict v);

struct TraceEntry {
  int level = 0;
  int size = 0;        // |V| at this call
  IndexSet separator;  // empty for leaves and broken calls
};

struct TestOutcome {
  Verdict verdict = Verdict::Inconclusive;
  bool good_run = true;
  std::size_t queries = 0;
  int depth = 0;
  std::vector<TraceEntry> trace;
  bool theory_m_met = false;
};

struct TreeTestConfig {
  int m = 0;  // 0 derives the sample size from n and eps
  double eps = 0.1;
  std::uint64_t seed = 0;
  Tolerances tol;
};

// Recursive tree property test. IsTree / NotTree.
TestOutcome test_tree(CovarianceOracle& base, const TreeTestConfig& cfg);

// Support graph (local indices) of the inverse of sigma_bb.
Graph direct_subgraph_check(const Matrix& sigma_bb, double support_rel);

struct SeparatorConfig {
  int k = 1;
  int m = 0;        // 0 derives the theory sample size (error above m_cap)
  int m_cap = 24;   // refuse derived sizes beyond this; explicit m overrides
  double eps = 0.1;
  double delta = 7.0 / 30.0;
  double delta_prime = 0.0;  // 0 derives eps / (10 n ln n)
  std::uint64_t seed = 0;
  Tolerances tol;
};

struct AbsepResult {
  IndexSet s;
  int rank = 0;
  bool good = false;  // |s| == rank
};

// Grow a separator for sides a, b from the vertices that keep
// rank(sigma_{a+v, b+v}) at rank(sigma_{a,b}).
AbsepResult ab_separator(EntrySource& src, const IndexSet& v_cur, const IndexSet& a,
                         const IndexSet& b, const Tolerances& tol);

struct SeparatorResult {
  bool broke = false;
  bool accepted = false;  // a minimizing partition produced a splitting S
  IndexSet s;
  int rank = 0;
  bool good = false;
  int m_used = 0;
  bool theory_m_met = false;
};

// Sample landmarks with replacement, minimize cross-rank over balanced
// bipartitions, grow the separator, and keep the first one that actually
// splits the landmark set in the conditioned view.
SeparatorResult separator(EntrySource& src, const IndexSet& v_cur,
                          const SeparatorConfig& cfg, std::mt19937_64& rng);

// Remove-and-recurse on principal submatrices B = C + S. Verdicts:
// Terminated / Broke, downgraded to Inconclusive when any separator growth
// missed its rank or no usable separator was found.
TestOutcome test_marginal(CovarianceOracle& base, const SeparatorConfig& cfg);

// Same recursion on conditional matrices with the cumulative conditioning
// set. Always reports Terminated or Broke.
TestOutcome test_conditional(CovarianceOracle& base, const SeparatorConfig& cfg);

struct SnEstimate {
  bool ok = false;
  int k0 = -1;
  double lower = 0.0;  // exclusive
  double upper = 0.0;  // inclusive
  bool via_conditional = false;
  std::size_t queries = 0;
};

// Increase k until a run terminates; marginal Inconclusive falls back to the
// conditional tester at the same k.
SnEstimate estimate_sn(CovarianceOracle& base, const SeparatorConfig& proto, int k_max);

struct CiTreeConfig {
  int m = 0;
  double eps = 0.1;
  std::uint64_t seed = 0;
};

// Tree test driven purely by CI queries.
TestOutcome ci_test_tree(CIOracle& ci, const CiTreeConfig& cfg);

}  // namespace sepscan
