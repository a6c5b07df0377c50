#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sepscan/linalg.hpp"

namespace sepscan {

// Distinct-entry accounting over unordered pairs (diagonal included).
// Dense bitmap for moderate n, hash set above.
class QueryLedger {
 public:
  explicit QueryLedger(int n);
  bool record(int i, int j);  // true when the pair was not seen before
  bool seen(int i, int j) const;
  std::size_t count() const { return count_; }
  int n() const { return n_; }

 private:
  std::uint64_t key(int i, int j) const;
  int n_;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> bits_;  // empty when sparse
  std::unordered_set<std::uint64_t> sparse_;
};

class CovarianceOracle {
 public:
  virtual ~CovarianceOracle() = default;
  double query(int i, int j);
  int n() const { return ledger_.n(); }
  QueryLedger& ledger() { return ledger_; }
  const QueryLedger& ledger() const { return ledger_; }

 protected:
  explicit CovarianceOracle(int n) : ledger_(n) {}
  virtual double fetch(int i, int j) = 0;  // called with i <= j

 private:
  QueryLedger ledger_;
};

class MatrixOracle : public CovarianceOracle {
 public:
  explicit MatrixOracle(Matrix sigma);

 protected:
  double fetch(int i, int j) override { return sigma_(i, j); }

 private:
  Matrix sigma_;
};

// Entries read on demand from the raw row-major file written by
// save_covariance; each distinct entry is read from disk once.
class FileOracle : public CovarianceOracle {
 public:
  FileOracle(const std::string& bin_path, int n);

 protected:
  double fetch(int i, int j) override;

 private:
  std::ifstream file_;
  std::unordered_map<std::uint64_t, double> cache_;
};

// A positioned read of covariance entries: either the raw matrix or the
// conditional matrix given a fixed index set. Implementations report which
// set they condition on so callers can extend it.
class EntrySource {
 public:
  virtual ~EntrySource() = default;
  virtual double entry(int i, int j) = 0;
  virtual const IndexSet& conditioning() const = 0;
  virtual CovarianceOracle& base() = 0;
};

class OracleSource : public EntrySource {
 public:
  explicit OracleSource(CovarianceOracle& o) : oracle_(o) {}
  double entry(int i, int j) override { return oracle_.query(i, j); }
  const IndexSet& conditioning() const override { return none_; }
  CovarianceOracle& base() override { return oracle_; }

 private:
  CovarianceOracle& oracle_;
  IndexSet none_;
};

// Conditional covariance view sigma_{ij} - sigma_{i,S} sigma_{S,S}^{-1}
// sigma_{S,j} computed lazily. The S-block is factored once at construction;
// per-index solve vectors are cached, so a fresh off-block entry costs at
// most 1 + 2|S| new base queries.
class CondCovView : public EntrySource {
 public:
  CondCovView(CovarianceOracle& base, IndexSet sbar);
  double entry(int i, int j) override;
  const IndexSet& conditioning() const override { return sbar_; }
  CovarianceOracle& base() override { return base_; }

 private:
  const Vector& column(int i);
  const Vector& solved(int i);
  CovarianceOracle& base_;
  IndexSet sbar_;
  Eigen::LLT<Matrix> llt_;
  std::unordered_map<int, Vector> cols_;
  std::unordered_map<int, Vector> solved_;
};

// Conditional-independence oracle answering i _||_ j and i _||_ j | k.
// Accounting is per distinct query triple.
class CIOracle {
 public:
  virtual ~CIOracle() = default;
  bool ci(int i, int j);
  bool ci(int i, int j, int k);
  std::size_t count() const { return count_; }
  virtual int n() const = 0;

 protected:
  virtual bool decide(int i, int j, int k) = 0;  // k = -1 for marginal

 private:
  std::unordered_set<std::uint64_t> seen_;
  std::size_t count_ = 0;
};

// CI decisions from covariance entries: marginal independence is a vanishing
// correlation (3 entries), conditional independence given k is the vanishing
// of sigma_ij sigma_kk - sigma_ik sigma_kj (4 entries).
class CovCIOracle : public CIOracle {
 public:
  explicit CovCIOracle(CovarianceOracle& base, double eps_rel = 1e-9);
  int n() const override { return base_.n(); }

 protected:
  bool decide(int i, int j, int k) override;

 private:
  CovarianceOracle& base_;
  double eps_rel_;
};

// Same tests on a precomputed correlation matrix (typically estimated from
// samples) with an absolute threshold chosen for the noise level.
class EmpiricalCIOracle : public CIOracle {
 public:
  EmpiricalCIOracle(Matrix corr, double threshold);
  int n() const override { return static_cast<int>(corr_.rows()); }

 protected:
  bool decide(int i, int j, int k) override;

 private:
  Matrix corr_;
  double thr_;
};

}  // namespace sepscan
